"""Closed-loop track geometry: presets, point projection, plain-text I/O."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from ..errors import ParameterError

MIN_POINTS = 8
MIN_SEGMENT_LEN = 1e-6
HALF_WIDTH_RANGE = (0.2, 2.0)

PRESETS = ("oval", "s_curve", "paper_like_loop")


class TrackSpec:
    """A closed centerline polyline with a constant corridor half-width.

    The polyline is implicitly closed: the segment from the last point back
    to the first is part of the track. Arc length runs counterclockwise from
    point 0.
    """

    def __init__(self, centerline: np.ndarray, half_width: float, name: str = "custom"):
        pts = np.asarray(centerline, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ParameterError(f"centerline must be (N, 2), got {pts.shape}")
        if len(pts) < MIN_POINTS:
            raise ParameterError(f"centerline needs >= {MIN_POINTS} points, got {len(pts)}")
        if not np.isfinite(pts).all():
            raise ParameterError("centerline contains non-finite coordinates")
        if half_width <= 0:
            raise ParameterError(f"half_width must be > 0, got {half_width}")
        seg_vec = np.roll(pts, -1, axis=0) - pts
        seg_len = np.hypot(seg_vec[:, 0], seg_vec[:, 1])
        if (seg_len <= MIN_SEGMENT_LEN).any():
            raise ParameterError("consecutive centerline points must be distinct")

        self.centerline = pts
        self.half_width = float(half_width)
        self.name = name
        self.closed = True
        self._seg_vec = seg_vec
        self._seg_len = seg_len
        self._seg_unit = seg_vec / seg_len[:, None]
        self._cum = np.concatenate(([0.0], np.cumsum(seg_len)))
        self.length = float(self._cum[-1])

    @property
    def n_segments(self) -> int:
        return len(self.centerline)

    def point_at(self, s: float) -> np.ndarray:
        """Centerline point at arc length s (wrapped into [0, length))."""
        s = float(s) % self.length
        i = int(np.searchsorted(self._cum, s, side="right")) - 1
        i = min(i, self.n_segments - 1)
        return self.centerline[i] + (s - self._cum[i]) * self._seg_unit[i]

    def tangent_at(self, s: float) -> np.ndarray:
        """Unit travel-direction tangent at arc length s."""
        s = float(s) % self.length
        i = int(np.searchsorted(self._cum, s, side="right")) - 1
        i = min(i, self.n_segments - 1)
        return self._seg_unit[i]

    def project_many(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Project (M, 2) points onto the centerline.

        Returns (segment_index, signed lateral offset, arc length), each (M,).
        Lateral offset is positive on the left of the travel direction.
        """
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        rel = pts[:, None, :] - self.centerline[None, :, :]          # (M, N, 2)
        t = np.einsum("mnk,nk->mn", rel, self._seg_vec) / (self._seg_len**2)[None, :]
        t = np.clip(t, 0.0, 1.0)
        proj = self.centerline[None, :, :] + t[:, :, None] * self._seg_vec[None, :, :]
        diff = pts[:, None, :] - proj
        dist_sq = np.einsum("mnk,mnk->mn", diff, diff)
        idx = np.argmin(dist_sq, axis=1)
        m = np.arange(len(pts))
        best_t = t[m, idx]
        best_diff = diff[m, idx]
        dist = np.sqrt(dist_sq[m, idx])
        # positive cross(track direction, point offset) means left of travel
        cross = self._seg_vec[idx, 0] * best_diff[:, 1] - self._seg_vec[idx, 1] * best_diff[:, 0]
        lateral = np.where(cross >= 0, dist, -dist)
        progress = self._cum[idx] + best_t * self._seg_len[idx]
        return idx, lateral, progress


def project_to_centerline(track: TrackSpec, position) -> tuple[int, float, float]:
    """Nearest-point projection of one position onto the track centerline."""
    idx, lateral, progress = track.project_many(np.asarray(position, dtype=np.float64)[None, :])
    return int(idx[0]), float(lateral[0]), float(progress[0])


def _stadium_points(n: int, straight: float, radius: float) -> np.ndarray:
    """Counterclockwise stadium (two straights, two semicircles), centered at
    the origin. Built as one half plus its point mirror so the sampled points
    are exactly centrally symmetric."""
    if n % 2:
        raise ParameterError("stadium point count must be even")
    perimeter = 2.0 * straight + 2.0 * math.pi * radius
    half = n // 2
    pts = np.empty((n, 2))
    for i in range(half):
        s = perimeter * i / n
        if s < straight:
            pts[i] = (-straight / 2.0 + s, -radius)
        else:
            phi = (s - straight) / radius - math.pi / 2.0
            pts[i] = (straight / 2.0 + radius * math.cos(phi), radius * math.sin(phi))
    pts[half:] = -pts[:half]
    return pts


def _wavy_loop_points(n: int, base_radius: float, wave_amp: float, lobes: int) -> np.ndarray:
    theta = 2.0 * math.pi * np.arange(n) / n
    r = base_radius + wave_amp * np.sin(lobes * theta)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def _catmull_rom_loop(waypoints: np.ndarray, samples_per_span: int) -> np.ndarray:
    """Closed centripetal-free (uniform) Catmull-Rom through the waypoints."""
    w = np.asarray(waypoints, dtype=np.float64)
    n = len(w)
    out = []
    ts = np.linspace(0.0, 1.0, samples_per_span, endpoint=False)
    for i in range(n):
        p0, p1, p2, p3 = w[(i - 1) % n], w[i], w[(i + 1) % n], w[(i + 2) % n]
        for t in ts:
            t2, t3 = t * t, t * t * t
            point = 0.5 * (
                2.0 * p1
                + (-p0 + p2) * t
                + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2
                + (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t3
            )
            out.append(point)
    return np.asarray(out)


_PAPER_LIKE_WAYPOINTS = np.array(
    [
        (0.0, 0.0),
        (1.8, -0.45),
        (3.4, -0.2),
        (4.4, 0.9),
        (4.1, 2.2),
        (2.9, 2.6),
        (2.2, 1.8),
        (1.2, 1.6),
        (0.4, 2.4),
        (-0.9, 2.9),
        (-2.1, 2.2),
        (-2.3, 0.9),
        (-1.4, 0.1),
    ]
)


def make_track(preset: str, half_width: float) -> TrackSpec:
    """Build a deterministic preset track.

    oval: stadium loop, 64 points. s_curve: three-lobed wavy loop whose
    curvature changes sign six times. paper_like_loop: a longer circuit with
    mixed corners, Catmull-Rom smoothed.
    """
    lo, hi = HALF_WIDTH_RANGE
    if not lo <= half_width <= hi:
        raise ParameterError(f"half_width must be in [{lo}, {hi}], got {half_width}")
    if preset == "oval":
        return TrackSpec(_stadium_points(64, straight=3.0, radius=1.2), half_width, name="oval")
    if preset == "s_curve":
        return TrackSpec(_wavy_loop_points(96, 2.0, 0.45, 3), half_width, name="s_curve")
    if preset == "paper_like_loop":
        return TrackSpec(_catmull_rom_loop(_PAPER_LIKE_WAYPOINTS, 10), half_width, name="paper_like_loop")
    raise ParameterError(f"unknown track preset {preset!r}; expected one of {PRESETS}")


def track_to_table(track: TrackSpec) -> str:
    """Serialize as a plain-text table: one `x,y` pair per line, preceded by a
    `# halfwidth=<m>` header."""
    lines = [f"# halfwidth={track.half_width!r}"]
    lines += [f"{float(x)!r},{float(y)!r}" for x, y in track.centerline]
    return "\n".join(lines) + "\n"


def load_track_table(source: str | Path, name: str = "custom") -> TrackSpec:
    """Parse a track table produced by track_to_table (path or literal text)."""
    text = Path(source).read_text() if isinstance(source, Path) else str(source)
    if isinstance(source, str) and "\n" not in source and Path(source).exists():
        text = Path(source).read_text()
    half_width = None
    points = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("halfwidth="):
                half_width = float(body.split("=", 1)[1])
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ParameterError(f"track table line {lineno}: expected 'x,y', got {raw!r}")
        points.append((float(parts[0]), float(parts[1])))
    if half_width is None:
        raise ParameterError("track table is missing the '# halfwidth=<m>' header")
    return TrackSpec(np.asarray(points), half_width, name=name)
