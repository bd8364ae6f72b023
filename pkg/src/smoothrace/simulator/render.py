"""Synthetic camera: rasterizes the track corridor around the car into a
grayscale observation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError
from .dynamics import CarState
from .track import TrackSpec

CAMERAS = ("topdown_local", "pseudo_forward")
LINE_WIDTH_M = 0.06               # painted boundary line width
FORWARD_NEAR_M = 0.15             # nearest ground-plane row of the forward camera
FORWARD_HALF_FOV_TAN = 0.577      # tan(30 deg): lateral half-span per meter ahead


@dataclass(frozen=True)
class RenderParams:
    width: int = 32
    height: int = 24
    camera: str = "pseudo_forward"
    surface_intensity: float = 0.45
    offtrack_intensity: float = 0.10
    line_intensity: float = 0.90
    view_distance: float = 3.0

    def __post_init__(self):
        if self.width < 8 or self.height < 8:
            raise ParameterError(f"render size must be >= 8x8, got {self.width}x{self.height}")
        if self.camera not in CAMERAS:
            raise ParameterError(f"unknown camera {self.camera!r}; expected one of {CAMERAS}")
        if self.view_distance <= 0:
            raise ParameterError("view_distance must be > 0")
        levels = (self.surface_intensity, self.offtrack_intensity, self.line_intensity)
        for v in levels:
            if not 0.0 <= v <= 1.0:
                raise ParameterError(f"intensity {v} outside [0, 1]")
        for i in range(3):
            for j in range(i + 1, 3):
                if abs(levels[i] - levels[j]) < 0.05:
                    raise ParameterError("render intensities must differ pairwise by >= 0.05")


def _sample_points(state: CarState, params: RenderParams) -> np.ndarray:
    """World-space ground points sampled by each pixel, shape (H*W, 2)."""
    h, w = params.height, params.width
    heading_vec = np.array([math.cos(state.heading), math.sin(state.heading)])
    right_vec = np.array([heading_vec[1], -heading_vec[0]])
    rows = np.arange(h, dtype=np.float64)
    cols = np.arange(w, dtype=np.float64)

    if params.camera == "topdown_local":
        # car-centered window, heading pointing up, square pixels
        meters_per_px = params.view_distance / (h - 1)
        forward = ((h - 1) / 2.0 - rows) * meters_per_px
        lateral = (cols - (w - 1) / 2.0) * meters_per_px
        fwd_grid, lat_grid = np.meshgrid(forward, lateral, indexing="ij")
    else:
        # ground-plane rays ahead of the car; rows fan out from near to far
        # quadratically so nearby rows get finer spacing, columns span a fixed
        # field of view that widens with distance
        frac = (h - 1 - rows) / (h - 1)
        depth = FORWARD_NEAR_M + (params.view_distance - FORWARD_NEAR_M) * frac**2
        span = (cols - (w - 1) / 2.0) / ((w - 1) / 2.0)
        fwd_grid = np.repeat(depth[:, None], w, axis=1)
        lat_grid = depth[:, None] * FORWARD_HALF_FOV_TAN * span[None, :]

    points = (
        state.position[None, :]
        + fwd_grid.reshape(-1)[:, None] * heading_vec[None, :]
        + lat_grid.reshape(-1)[:, None] * right_vec[None, :]
    )
    return points


def render_observation(track: TrackSpec, state: CarState, params: RenderParams) -> np.ndarray:
    """Render the grayscale observation, shape (height, width), values in [0, 1].

    Pixels on the corridor take surface_intensity, pixels outside take
    offtrack_intensity, and a painted line of width LINE_WIDTH_M straddles
    each corridor boundary. Deterministic in (track, state, params).
    """
    points = _sample_points(state, params)
    _, lateral, _ = track.project_many(points)
    dist = np.abs(lateral)
    img = np.where(dist <= track.half_width, params.surface_intensity, params.offtrack_intensity)
    img = np.where(np.abs(dist - track.half_width) <= LINE_WIDTH_M / 2.0, params.line_intensity, img)
    return np.clip(img.reshape(params.height, params.width), 0.0, 1.0).astype(np.float32)


@dataclass(frozen=True)
class ObservationShift:
    """Observation-space perturbation standing in for a deployment-domain gap."""

    brightness: float = 0.0
    noise_sigma: float = 0.0
    invert: bool = False

    def is_identity(self) -> bool:
        return self.brightness == 0.0 and self.noise_sigma == 0.0 and not self.invert


def apply_shift(obs: np.ndarray, shift: ObservationShift, rng: np.random.Generator | None = None) -> np.ndarray:
    """Apply intensity inversion, brightness offset, then additive noise."""
    if shift.is_identity():
        return obs
    out = obs.astype(np.float32)
    if shift.invert:
        out = 1.0 - out
    if shift.brightness != 0.0:
        out = out + np.float32(shift.brightness)
    if shift.noise_sigma > 0.0:
        if rng is None:
            raise ParameterError("noise_sigma > 0 requires an rng")
        out = out + rng.normal(0.0, shift.noise_sigma, size=out.shape).astype(np.float32)
    return np.clip(out, 0.0, 1.0)
