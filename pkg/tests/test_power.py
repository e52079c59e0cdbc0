import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from windbench.grids import GriddedSeries, GridSpec
from windbench.power import (PowerCurve, PowerCurveError, PowerSummary,
                             builtin_curve_path, cumulative_power,
                             load_power_curve, power_at, relative_power)


@pytest.fixture(scope="module")
def v126():
    return load_power_curve(builtin_curve_path())


def speed_series(plane, times):
    arr = np.asarray(plane, dtype=float)
    grid = GridSpec.regular(np.arange(arr.shape[0], dtype=float),
                            np.arange(arr.shape[1], dtype=float))
    vals = np.broadcast_to(arr, (len(times),) + arr.shape).copy()
    return GriddedSeries(grid, times, vals)


SIX_HOURLY = [0, 21600, 43200, 64800]


class TestCurveLoading:
    def test_bundled_curve(self, v126):
        assert v126.name == "Vestas V126-3.45"
        assert v126.hub_height == 126.0
        assert v126.cut_in == 3.0 and v126.cut_out == 22.5
        assert v126.rated_power == 3450000.0

    def test_missing_sidecar(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text("wind_speed_ms,power_w\n1.0,0\n2.0,10\n")
        with pytest.raises(PowerCurveError, match="sidecar"):
            load_power_curve(p)

    def test_bad_header(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text("speed,power\n1.0,0\n")
        (tmp_path / "c.json").write_text(
            '{"cut_in": 1, "rated_speed": 2, "cut_out": 3, "rated_power_w": 10}')
        with pytest.raises(PowerCurveError, match="header"):
            load_power_curve(p)

    def test_curve_invariants(self):
        with pytest.raises(PowerCurveError, match="strictly increasing"):
            PowerCurve(np.array([1.0, 1.0]), np.array([0.0, 1.0]), 0.5, 0.8, 2.0, 1.0)
        with pytest.raises(PowerCurveError, match="rated_power"):
            PowerCurve(np.array([1.0, 2.0]), np.array([0.0, 5.0]), 0.5, 0.8, 2.5, 1.0)
        with pytest.raises(PowerCurveError, match="below cut-in"):
            PowerCurve(np.array([1.0, 4.0]), np.array([0.5, 1.0]), 3.0, 3.5, 5.0, 1.0)
        with pytest.raises(PowerCurveError, match="cut_in < rated_speed < cut_out"):
            PowerCurve(np.array([1.0, 4.0]), np.array([0.0, 1.0]), 3.0, 6.0, 5.0, 1.0)


class TestPowerAt:
    def test_zero_below_cut_in(self, v126):
        assert power_at(v126, 0.0) == 0.0
        assert power_at(v126, 2.999) == 0.0

    def test_zero_above_cut_out(self, v126):
        assert power_at(v126, 22.500001) == 0.0
        assert power_at(v126, 40.0) == 0.0

    def test_exact_knot_values(self, v126):
        for s, p in zip(v126.speeds, v126.powers):
            assert power_at(v126, float(s)) == float(p)

    def test_midpoint_interpolation(self, v126):
        mid = power_at(v126, 7.25)
        assert mid == (1006000.0 + 1247000.0) / 2.0

    def test_at_cut_out_uses_knot(self, v126):
        assert power_at(v126, 22.5) == 3450000.0

    def test_nan_contributes_zero(self, v126):
        out = power_at(v126, np.array([np.nan, 10.0]))
        assert out[0] == 0.0 and out[1] > 0

    def test_bounds_and_monotone_below_rated(self, v126):
        w = np.linspace(0.0, 30.0, 4001)
        p = power_at(v126, w)
        assert np.all(p >= 0.0) and np.all(p <= v126.rated_power)
        ramp = (w >= v126.cut_in) & (w <= v126.rated_speed)
        assert np.all(np.diff(p[ramp]) >= 0.0)
        plateau = (w >= v126.rated_speed) & (w <= v126.cut_out)
        assert np.all(p[plateau] == v126.rated_power)


class TestCumulativePower:
    def test_all_below_cut_in_zero(self, v126):
        s = speed_series(np.full((2, 2), 1.0), SIX_HOURLY)
        out = cumulative_power(s, v126)
        assert out.total_energy_wh == 0.0

    def test_single_point_single_step_rated(self, v126):
        grid = GridSpec.regular([0.0], [0.0])
        s = GriddedSeries(grid, [0], np.full((1, 1, 1), 15.0))
        out = cumulative_power(s, v126, step_hours=6.0)
        assert out.total_energy_wh == 6.0 * v126.rated_power
        assert out.per_point_mean_power_w == v126.rated_power

    def test_grid_additivity(self, v126):
        cell = GriddedSeries(GridSpec.regular([0.0], [0.0]), [0, 21600],
                             np.full((2, 1, 1), 9.0))
        grid4 = speed_series(np.full((2, 2), 9.0), [0, 21600])
        one = cumulative_power(cell, v126)
        four = cumulative_power(grid4, v126)
        assert abs(four.total_energy_wh - 8.0 * one.total_energy_wh /
                   2.0) < 1e-6 * four.total_energy_wh
        # 2x2 grid, 2 steps = 8 cell-steps; `one` holds 2 cell-steps

    def test_additive_over_time_partition(self, v126):
        rng = np.random.default_rng(2)
        grid = GridSpec.regular(np.arange(3.0), np.arange(3.0))
        vals = rng.weibull(2.0, (8, 3, 3)) * 9.0
        times = np.arange(8, dtype=np.int64) * 21600
        s = GriddedSeries(grid, times, vals)
        total = cumulative_power(s, v126).total_energy_wh
        part = 0.0
        for lo, hi in ((0, 3), (3, 6), (6, 8)):
            chunk = GriddedSeries(grid, times[lo:hi], vals[lo:hi])
            part += cumulative_power(chunk, v126, step_hours=6.0).total_energy_wh
        assert abs(part - total) <= 1e-9 * max(total, 1.0)

    def test_non_uniform_axis_rejected(self, v126):
        grid = GridSpec.regular([0.0], [0.0])
        s = GriddedSeries(grid, [0, 21600, 50000], np.full((3, 1, 1), 9.0))
        with pytest.raises(ValueError, match="not uniform"):
            cumulative_power(s, v126)

    def test_step_hours_mismatch_rejected(self, v126):
        s = speed_series(np.full((1, 1), 9.0), SIX_HOURLY)
        with pytest.raises(ValueError, match="does not match"):
            cumulative_power(s, v126, step_hours=3.0)

    def test_missing_samples_counted(self, v126):
        vals = np.full((2, 2, 2), 9.0)
        vals[0, 0, 0] = np.nan       # one missing sample at a live point
        vals[:, 1, 1] = np.nan       # a dead point: excluded from n_points
        grid = GridSpec.regular([0.0, 1.0], [0.0, 1.0])
        s = GriddedSeries(grid, [0, 21600], vals)
        out = cumulative_power(s, v126)
        assert out.n_points == 3
        assert out.n_missing == 1


class TestRelativePower:
    def mk(self, per_point, n_points=10, total=None):
        total = per_point * n_points * 4 * 6.0 if total is None else total
        return PowerSummary(total, per_point, n_points, 4, 6.0)

    def test_identity_zero(self):
        x = self.mk(1000.0)
        assert relative_power(x, x) == 0.0

    def test_double_is_plus_100(self):
        assert relative_power(self.mk(2000.0), self.mk(1000.0)) == 100.0

    def test_grid_density_independent(self):
        dense = self.mk(1500.0, n_points=100)
        sparse = self.mk(1500.0, n_points=50)
        assert relative_power(sparse, dense) == 0.0

    def test_total_mode_flag(self):
        a = self.mk(1000.0, n_points=50)
        b = self.mk(1000.0, n_points=100)
        assert relative_power(a, b, normalize="total") == -50.0

    def test_zero_reference_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            relative_power(self.mk(10.0), self.mk(0.0))


@given(st.floats(1.0, 1e7), st.integers(1, 500), st.integers(1, 400))
@settings(max_examples=100, deadline=None)
def test_relative_power_self_is_zero(per_point, n_points, n_steps):
    s = PowerSummary(per_point * n_points * n_steps * 6.0, per_point,
                     n_points, n_steps, 6.0)
    assert relative_power(s, s) == 0.0
