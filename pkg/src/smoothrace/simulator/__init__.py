"""2D closed-track racing environment: track geometry, kinematic car dynamics,
synthetic camera rendering, and an episode wrapper."""

from .track import TrackSpec, make_track, project_to_centerline, load_track_table, track_to_table
from .dynamics import (
    ActionCmd,
    CarState,
    StepOutcome,
    Termination,
    compute_reward,
    reset,
    step,
)
from .render import ObservationShift, RenderParams, apply_shift, render_observation
from .env import RacingEnv

__all__ = [
    "ActionCmd",
    "CarState",
    "ObservationShift",
    "RacingEnv",
    "RenderParams",
    "StepOutcome",
    "Termination",
    "TrackSpec",
    "apply_shift",
    "compute_reward",
    "load_track_table",
    "make_track",
    "project_to_centerline",
    "render_observation",
    "reset",
    "step",
    "track_to_table",
]
