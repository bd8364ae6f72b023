"""Kinematic bicycle dynamics, bounded progress reward, termination rules."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import NumericError, ParameterError
from .track import TrackSpec, project_to_centerline

DT_DEFAULT = 1.0 / 30.0           # matches the 30 Hz action sampling rate
WHEELBASE = 0.16                  # meters, 1/18-scale car
SPEED_TAU = 0.3                   # first-order speed lag time constant, seconds
STEER_MAX_RAD = math.radians(30.0)
SPEED_MIN = 1.0                   # command map: speed_norm -1 -> 1 m/s
SPEED_MAX = 4.0                   # command map: speed_norm +1 -> 4 m/s
RESET_SPEED = 1.0
WRONG_DIRECTION_STEPS = 10        # consecutive >90-degree-off steps before abort


class Termination(str, Enum):
    RUNNING = "running"
    OFF_TRACK = "off_track"
    WRONG_DIRECTION = "wrong_direction"
    LAP_COMPLETE = "lap_complete"


@dataclass(frozen=True)
class ActionCmd:
    """Normalized steering and speed command, both clamped to [-1, 1]."""

    steer_norm: float
    speed_norm: float

    def __post_init__(self):
        if not (math.isfinite(self.steer_norm) and math.isfinite(self.speed_norm)):
            raise NumericError(f"non-finite action ({self.steer_norm}, {self.speed_norm})")
        object.__setattr__(self, "steer_norm", min(1.0, max(-1.0, float(self.steer_norm))))
        object.__setattr__(self, "speed_norm", min(1.0, max(-1.0, float(self.speed_norm))))

    @property
    def steering_angle(self) -> float:
        """Front-wheel angle in radians ([-1, 1] covers +/-30 degrees)."""
        return self.steer_norm * STEER_MAX_RAD

    @property
    def target_speed(self) -> float:
        """Commanded speed in m/s ([-1, 1] covers [1, 4] m/s)."""
        return 0.5 * (SPEED_MIN + SPEED_MAX) + 0.5 * (SPEED_MAX - SPEED_MIN) * self.speed_norm


@dataclass(frozen=True)
class CarState:
    position: np.ndarray          # (2,) meters
    heading: float                # radians
    speed: float                  # m/s, in [0, SPEED_MAX]
    progress_s: float = 0.0       # signed arc length traveled since reset
    lap_fraction: float = 0.0     # progress_s / track length, wrapped to [0, 1)
    step_index: int = 0
    wrong_dir_count: int = 0      # consecutive steps spent facing backwards

    def is_finite(self) -> bool:
        return bool(
            np.isfinite(self.position).all()
            and math.isfinite(self.heading)
            and math.isfinite(self.speed)
        )


@dataclass(frozen=True)
class StepOutcome:
    next_state: CarState
    observation: np.ndarray | None
    reward: float
    terminated: Termination


def _wrap_ds(ds: float, length: float) -> float:
    """Signed minimal arc-length difference in [-length/2, length/2)."""
    return (ds + length / 2.0) % length - length / 2.0


def _angle_diff(a: float, b: float) -> float:
    return (a - b + math.pi) % (2.0 * math.pi) - math.pi


def compute_reward(track: TrackSpec, prev_state: CarState, next_state: CarState, dt: float = DT_DEFAULT) -> float:
    """Bounded progress-times-centering reward in [0, 1].

    reward = clamp(delta_progress / (v_max * dt), 0, 1) * max(0, 1 - |lateral| / half_width),
    so a car holding the centerline at full speed earns exactly 1 and anything
    off-track or moving backward earns 0.
    """
    _, lat_prev, s_prev = project_to_centerline(track, prev_state.position)
    _, lat_next, s_next = project_to_centerline(track, next_state.position)
    ds = _wrap_ds(s_next - s_prev, track.length)
    progress_term = min(1.0, max(0.0, ds / (SPEED_MAX * dt)))
    centering = max(0.0, 1.0 - abs(lat_next) / track.half_width)
    return progress_term * centering


def step(
    track: TrackSpec,
    state: CarState,
    action: ActionCmd,
    dt: float = DT_DEFAULT,
    render_params=None,
) -> StepOutcome:
    """Advance the car one control interval.

    Kinematic bicycle update using the current speed: position moves along the
    current heading, heading turns by (v / wheelbase) * tan(steering) * dt, and
    speed relaxes toward the commanded speed with a first-order lag. The
    observation is rendered only when `render_params` is given.
    """
    if dt <= 0:
        raise ParameterError(f"dt must be > 0, got {dt}")
    if not state.is_finite():
        raise NumericError("car state contains non-finite components")

    v = state.speed
    heading = state.heading
    position = state.position + v * dt * np.array([math.cos(heading), math.sin(heading)])
    new_heading = heading + (v / WHEELBASE) * math.tan(action.steering_angle) * dt
    new_heading = _angle_diff(new_heading, 0.0)
    new_speed = v + (action.target_speed - v) * (1.0 - math.exp(-dt / SPEED_TAU))
    new_speed = min(SPEED_MAX, max(0.0, new_speed))

    _, lat_prev, s_prev = project_to_centerline(track, state.position)
    _, lat_next, s_next = project_to_centerline(track, position)
    ds = _wrap_ds(s_next - s_prev, track.length)
    progress_s = state.progress_s + ds
    lap_fraction = (progress_s / track.length) % 1.0

    tangent = track.tangent_at(s_next)
    facing_backward = abs(_angle_diff(new_heading, math.atan2(tangent[1], tangent[0]))) > math.pi / 2.0
    wrong_dir_count = state.wrong_dir_count + 1 if facing_backward else 0

    next_state = CarState(
        position=position,
        heading=new_heading,
        speed=new_speed,
        progress_s=progress_s,
        lap_fraction=lap_fraction,
        step_index=state.step_index + 1,
        wrong_dir_count=wrong_dir_count,
    )

    if abs(lat_next) > track.half_width:
        terminated = Termination.OFF_TRACK
        reward = 0.0
    else:
        progress_term = min(1.0, max(0.0, ds / (SPEED_MAX * dt)))
        centering = max(0.0, 1.0 - abs(lat_next) / track.half_width)
        reward = progress_term * centering
        if wrong_dir_count >= WRONG_DIRECTION_STEPS:
            terminated = Termination.WRONG_DIRECTION
        elif progress_s >= track.length:
            terminated = Termination.LAP_COMPLETE
        else:
            terminated = Termination.RUNNING

    observation = None
    if render_params is not None:
        from .render import render_observation

        observation = render_observation(track, next_state, render_params)
    return StepOutcome(next_state=next_state, observation=observation, reward=reward, terminated=terminated)


def reset(track: TrackSpec, rng: np.random.Generator | None = None) -> CarState:
    """Place the car on the centerline, aligned with the track tangent.

    With no rng the start is the fixed evaluation start (arc length 0); with
    an rng the start arc length is drawn uniformly along the track.
    """
    s0 = float(rng.uniform(0.0, track.length)) if rng is not None else 0.0
    position = track.point_at(s0)
    tangent = track.tangent_at(s0)
    return CarState(
        position=position,
        heading=math.atan2(tangent[1], tangent[0]),
        speed=RESET_SPEED,
    )
