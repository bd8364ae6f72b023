"""Episode wrapper tying track, dynamics, rendering, and the step cap together."""

from __future__ import annotations

import numpy as np

from ..errors import StateError
from .dynamics import DT_DEFAULT, ActionCmd, CarState, StepOutcome, Termination, reset, step
from .render import ObservationShift, RenderParams, apply_shift, render_observation
from .track import TrackSpec

MAX_EPISODE_STEPS_DEFAULT = 900   # 30 s at the 30 Hz control rate


class RacingEnv:
    """One car on one track. Instances are single-owner: step() must only be
    called by one actor, but independent instances can run in parallel."""

    def __init__(
        self,
        track: TrackSpec,
        render_params: RenderParams,
        dt: float = DT_DEFAULT,
        max_episode_steps: int = MAX_EPISODE_STEPS_DEFAULT,
        obs_shift: ObservationShift | None = None,
    ):
        self.track = track
        self.render_params = render_params
        self.dt = dt
        self.max_episode_steps = max_episode_steps
        self.obs_shift = obs_shift
        self.state: CarState | None = None
        self.steps = 0
        self._shift_rng: np.random.Generator | None = None

    def _observe(self, state: CarState) -> np.ndarray:
        obs = render_observation(self.track, state, self.render_params)
        if self.obs_shift is not None:
            obs = apply_shift(obs, self.obs_shift, self._shift_rng)
        return obs

    def reset(self, rng: np.random.Generator | None = None, shift_rng: np.random.Generator | None = None) -> np.ndarray:
        """Start a new episode; returns the first observation."""
        self.state = reset(self.track, rng)
        self.steps = 0
        self._shift_rng = shift_rng
        return self._observe(self.state)

    def step(self, action: ActionCmd) -> tuple[StepOutcome, bool]:
        """Advance one step; returns (outcome, truncated). `truncated` is True
        when the step cap ends the episode while still running."""
        if self.state is None:
            raise StateError("step() before reset()")
        outcome = step(self.track, self.state, action, self.dt)
        observation = self._observe(outcome.next_state)
        outcome = StepOutcome(
            next_state=outcome.next_state,
            observation=observation,
            reward=outcome.reward,
            terminated=outcome.terminated,
        )
        self.state = outcome.next_state
        self.steps += 1
        truncated = outcome.terminated == Termination.RUNNING and self.steps >= self.max_episode_steps
        return outcome, truncated
