import numpy as np
import pytest

from smoothrace.errors import ParameterError
from smoothrace.simulator import load_track_table, make_track, project_to_centerline, track_to_table
from smoothrace.simulator.track import TrackSpec


def dense_centerline_samples(centerline, n_samples=100_000):
    """Independent oracle support: interpolate the raw polyline densely,
    returning (points, arc_lengths) without touching TrackSpec internals."""
    a = np.asarray(centerline, dtype=float)
    b = np.roll(a, -1, axis=0)
    seg_len = np.hypot(*(b - a).T)
    cum = np.concatenate(([0.0], np.cumsum(seg_len)))
    s = np.linspace(0.0, cum[-1], n_samples, endpoint=False)
    idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(a) - 1)
    t = (s - cum[idx]) / seg_len[idx]
    return a[idx] + t[:, None] * (b[idx] - a[idx]), s


def brute_force_projection(dense_pts, dense_s, point):
    d = np.hypot(dense_pts[:, 0] - point[0], dense_pts[:, 1] - point[1])
    i = int(np.argmin(d))
    return d[i], dense_s[i]


class TestPresets:
    def test_oval_shape(self, oval):
        assert oval.length > 0
        assert len(oval.centerline) == 64
        assert oval.closed

    def test_presets_deterministic(self):
        a = make_track("s_curve", 0.5)
        b = make_track("s_curve", 0.5)
        assert np.array_equal(a.centerline, b.centerline)

    @pytest.mark.parametrize("preset", ["oval", "s_curve", "paper_like_loop"])
    def test_preset_invariants(self, preset):
        track = make_track(preset, 0.6)
        seg = np.roll(track.centerline, -1, axis=0) - track.centerline
        lengths = np.hypot(seg[:, 0], seg[:, 1])
        assert (lengths > 1e-6).all()
        assert len(track.centerline) >= 8
        assert track.length == pytest.approx(lengths.sum(), rel=1e-9)

    def test_s_curve_has_curvature_sign_changes(self, s_curve):
        pts = s_curve.centerline
        prev_pts = np.roll(pts, 1, axis=0)
        next_pts = np.roll(pts, -1, axis=0)
        v1 = pts - prev_pts
        v2 = next_pts - pts
        cross = v1[:, 0] * v2[:, 1] - v1[:, 1] * v2[:, 0]
        signs = np.sign(cross[np.abs(cross) > 1e-12])
        changes = int(np.sum(signs[1:] != signs[:-1]))
        assert changes >= 2

    @pytest.mark.parametrize("preset", ["oval", "s_curve", "paper_like_loop"])
    def test_centerline_does_not_self_intersect(self, preset):
        track = make_track(preset, 0.6)
        pts = track.centerline
        n = len(pts)
        a = pts
        b = np.roll(pts, -1, axis=0)

        def cross2(u, v):
            return u[0] * v[1] - u[1] * v[0]

        def segments_cross(p, q, r, s):
            d1 = cross2(q - p, r - p)
            d2 = cross2(q - p, s - p)
            d3 = cross2(s - r, p - r)
            d4 = cross2(s - r, q - r)
            return (d1 * d2 < 0) and (d3 * d4 < 0)

        for i in range(n):
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue  # adjacent through the wrap
                assert not segments_cross(a[i], b[i], a[j], b[j]), (i, j)

    def test_bad_half_width(self):
        with pytest.raises(ParameterError):
            make_track("oval", 0.0)
        with pytest.raises(ParameterError):
            make_track("oval", 5.0)

    def test_unknown_preset(self):
        with pytest.raises(ParameterError):
            make_track("figure_eight", 0.6)


class TestTrackSpecValidation:
    def test_too_few_points(self):
        pts = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
        with pytest.raises(ParameterError):
            TrackSpec(pts, 0.5)

    def test_duplicate_points(self):
        pts = np.array([[np.cos(t), np.sin(t)] for t in np.linspace(0, 2 * np.pi, 12, endpoint=False)])
        pts[3] = pts[2]
        with pytest.raises(ParameterError):
            TrackSpec(pts, 0.5)


class TestProjection:
    def test_vertex_projects_to_zero_offset(self, oval):
        for i in (0, 7, 31):
            _, lateral, _ = project_to_centerline(oval, oval.centerline[i])
            assert lateral == pytest.approx(0.0, abs=1e-12)

    def test_perpendicular_offset_on_straight(self, oval):
        # bottom straight of the stadium runs along y = -1.2 toward +x,
        # so a point above it sits on the left with positive lateral offset
        point = np.array([0.1, -1.2 + 0.25])
        _, lateral, _ = project_to_centerline(oval, point)
        assert lateral == pytest.approx(0.25, abs=1e-9)
        point = np.array([0.1, -1.2 - 0.25])
        _, lateral, _ = project_to_centerline(oval, point)
        assert lateral == pytest.approx(-0.25, abs=1e-9)

    @pytest.mark.parametrize("preset", ["oval", "s_curve"])
    def test_matches_brute_force_oracle(self, preset, rng):
        track = make_track(preset, 0.6)
        dense_pts, dense_s = dense_centerline_samples(track.centerline)
        bbox_lo = track.centerline.min(axis=0) - 1.0
        bbox_hi = track.centerline.max(axis=0) + 1.0
        for _ in range(25):
            point = rng.uniform(bbox_lo, bbox_hi)
            _, lateral, progress = project_to_centerline(track, point)
            d_oracle, s_oracle = brute_force_projection(dense_pts, dense_s, point)
            assert abs(abs(lateral) - d_oracle) <= 1e-3
            ds = abs(progress - s_oracle)
            assert min(ds, track.length - ds) <= 1e-3

    def test_progress_continuous_across_segments(self, oval):
        s_values = np.linspace(0.0, oval.length, 500, endpoint=False)
        prev = None
        for s in s_values:
            _, _, progress = project_to_centerline(oval, oval.point_at(s))
            assert progress == pytest.approx(s, abs=1e-9)
            if prev is not None:
                assert progress > prev
            prev = progress


class TestTableIO:
    def test_round_trip(self, tmp_path, s_curve):
        text = track_to_table(s_curve)
        assert text.startswith("# halfwidth=")
        loaded = load_track_table(text)
        assert loaded.half_width == s_curve.half_width
        assert np.array_equal(loaded.centerline, s_curve.centerline)

        path = tmp_path / "track.txt"
        path.write_text(text)
        loaded2 = load_track_table(path)
        assert np.array_equal(loaded2.centerline, s_curve.centerline)

    def test_missing_header(self):
        with pytest.raises(ParameterError):
            load_track_table("0.0,0.0\n1.0,0.0\n")
