import logging

import numpy as np

from windbench.grids import GriddedSeries, GridSpec
from windbench.regrid import regrid_bilinear


def regular_series(lat, lon, plane):
    grid = GridSpec.regular(lat, lon)
    return GriddedSeries(grid, [0], np.asarray(plane, dtype=float)[None, :, :])


def rotated_grid(n_y=9, n_x=11, angle=0.35):
    """A smooth curvilinear grid: rotated + gently sheared coordinates."""
    jj, ii = np.meshgrid(np.arange(n_y, dtype=float), np.arange(n_x, dtype=float),
                         indexing="ij")
    c, s = np.cos(angle), np.sin(angle)
    lat = 10.0 + 1.1 * (c * jj - s * ii) + 0.03 * ii * jj / max(n_y, n_x)
    lon = -20.0 + 1.3 * (s * jj + c * ii)
    return GridSpec.curvilinear(lat, lon)


class TestRegularSource:
    def test_constant_field_preserved(self):
        s = regular_series(np.arange(5.0), np.arange(6.0), np.full((5, 6), 3.25))
        target = GridSpec.regular(np.linspace(0.2, 3.8, 7), np.linspace(0.1, 4.9, 9))
        out = regrid_bilinear(s, target)
        np.testing.assert_allclose(out.values, 3.25, rtol=0, atol=1e-12)

    def test_bilinear_function_exact(self):
        lat, lon = np.arange(6.0), np.arange(7.0) * 2.0
        lat2d, lon2d = np.meshgrid(lat, lon, indexing="ij")
        s = regular_series(lat, lon, 2.0 * lat2d + 3.0 * lon2d)
        target = GridSpec.regular(np.linspace(0.3, 4.7, 8), np.linspace(0.5, 11.5, 10))
        out = regrid_bilinear(s, target)
        tlat, tlon = target.point_latlon()
        np.testing.assert_allclose(out.values[0], 2.0 * tlat + 3.0 * tlon,
                                   rtol=0, atol=1e-10)

    def test_identity_target(self):
        rng = np.random.default_rng(0)
        lat, lon = np.arange(5.0), np.arange(4.0)
        s = regular_series(lat, lon, rng.normal(size=(5, 4)))
        out = regrid_bilinear(s, s.grid)
        np.testing.assert_allclose(out.values, s.values, rtol=0, atol=1e-12)

    def test_outside_hull_is_nan(self):
        s = regular_series(np.arange(3.0), np.arange(3.0), np.ones((3, 3)))
        target = GridSpec.regular([-1.0, 1.0], [0.5, 5.0])
        out = regrid_bilinear(s, target)
        assert np.isnan(out.values[0, 0, 0])   # lat below hull
        assert np.isnan(out.values[0, 1, 1])   # lon beyond hull
        assert out.values[0, 1, 0] == 1.0

    def test_nan_corner_propagates(self):
        plane = np.ones((3, 3))
        plane[1, 1] = np.nan
        s = regular_series(np.arange(3.0), np.arange(3.0), plane)
        target = GridSpec.regular([0.5], [0.5])
        out = regrid_bilinear(s, target)
        assert np.isnan(out.values[0, 0, 0])

    def test_time_steps_independent(self):
        rng = np.random.default_rng(1)
        grid = GridSpec.regular(np.arange(4.0), np.arange(4.0))
        vals = rng.normal(size=(3, 4, 4))
        s = GriddedSeries(grid, [0, 1, 2], vals)
        target = GridSpec.regular([1.5], [2.5])
        full = regrid_bilinear(s, target)
        for t in range(3):
            single = GriddedSeries(grid, [t], vals[t:t + 1])
            one = regrid_bilinear(single, target)
            np.testing.assert_array_equal(one.values[0], full.values[t])


class TestCurvilinearSource:
    def test_constant_preserved(self):
        grid = rotated_grid()
        s = GriddedSeries(grid, [0], np.full((1,) + grid.shape, 7.5))
        target = GridSpec.regular(np.linspace(8.0, 14.0, 6), np.linspace(-16.0, -8.0, 7))
        out = regrid_bilinear(s, target)
        interior = ~np.isnan(out.values)
        assert interior.sum() > 10
        np.testing.assert_allclose(out.values[interior], 7.5, rtol=0, atol=1e-10)

    def test_linear_field_exact_inside(self):
        # linear (hence bilinear) in lat/lon: exact wherever interpolation applies
        grid = rotated_grid()
        vals = (0.7 * grid.lat - 0.4 * grid.lon)[None, :, :]
        s = GriddedSeries(grid, [0], vals)
        target = GridSpec.regular(np.linspace(8.0, 14.0, 9), np.linspace(-16.0, -8.0, 9))
        out = regrid_bilinear(s, target)
        tlat, tlon = target.point_latlon()
        expect = 0.7 * tlat - 0.4 * tlon
        inside = ~np.isnan(out.values[0])
        assert inside.sum() > 20
        np.testing.assert_allclose(out.values[0][inside], expect[inside],
                                   rtol=0, atol=1e-9)

    def test_source_nodes_reproduced(self):
        grid = rotated_grid(6, 7)
        rng = np.random.default_rng(4)
        vals = rng.normal(size=(1,) + grid.shape)
        s = GriddedSeries(grid, [0], vals)
        # target = a 1 x k curvilinear "grid" of interior source nodes
        tl = grid.lat[2:4, 2:5].ravel()[None, :]
        tn = grid.lon[2:4, 2:5].ravel()[None, :]
        target = GridSpec.curvilinear(tl, tn)
        out = regrid_bilinear(s, target)
        np.testing.assert_allclose(out.values[0, 0],
                                   vals[0, 2:4, 2:5].ravel(), rtol=0, atol=1e-9)

    def test_degenerate_cell_yields_nan_and_warning(self, caplog):
        lat = np.array([[0.0, 1.0, 2.0], [1.0, 1.0, 3.0]])
        lon = np.array([[0.0, 1.0, 2.0], [0.0, 1.0, 2.0]])
        lat[1, 1] = 0.0  # collapses the first cell into a twisted quad
        grid = GridSpec.curvilinear(lat, lon)
        s = GriddedSeries(grid, [0], np.ones((1, 2, 3)))
        target = GridSpec.curvilinear(np.array([[0.5]]), np.array([[0.4]]))
        with caplog.at_level(logging.WARNING, logger="windbench.regrid"):
            out = regrid_bilinear(s, target)
        assert np.isnan(out.values[0, 0, 0])
        assert any("degenerate" in rec.message for rec in caplog.records)

    def test_outside_hull_nan(self):
        grid = rotated_grid()
        s = GriddedSeries(grid, [0], np.ones((1,) + grid.shape))
        target = GridSpec.regular([89.0], [100.0])
        out = regrid_bilinear(s, target)
        assert np.isnan(out.values[0, 0, 0])


class TestNoOvershoot:
    def test_regular_10k_random_fields(self):
        # 10^4 random fields as 10^4 time steps over one geometry
        rng = np.random.default_rng(7)
        lat, lon = np.arange(5.0), np.arange(5.0)
        grid = GridSpec.regular(lat, lon)
        vals = rng.normal(size=(10_000, 5, 5))
        s = GriddedSeries(grid, np.arange(10_000, dtype=np.int64), vals)
        plat = rng.uniform(0.0, 4.0, 40)
        plon = rng.uniform(0.0, 4.0, 40)
        target = GridSpec.curvilinear(plat[None, :], plon[None, :])
        out = regrid_bilinear(s, target)
        jy = np.clip(np.searchsorted(lat, plat, side="right") - 1, 0, 3)
        jx = np.clip(np.searchsorted(lon, plon, side="right") - 1, 0, 3)
        for k in range(40):
            stencil = vals[:, jy[k]:jy[k] + 2, jx[k]:jx[k] + 2].reshape(10_000, 4)
            lo = stencil.min(axis=1) - 1e-12
            hi = stencil.max(axis=1) + 1e-12
            got = out.values[:, 0, k]
            assert np.all(got >= lo) and np.all(got <= hi)

    def test_curvilinear_random_fields_no_overshoot(self):
        rng = np.random.default_rng(8)
        grid = rotated_grid(7, 8)
        vals = rng.normal(size=(2_000,) + grid.shape)
        s = GriddedSeries(grid, np.arange(2_000, dtype=np.int64), vals)
        plat = rng.uniform(grid.lat.min(), grid.lat.max(), 30)
        plon = rng.uniform(grid.lon.min(), grid.lon.max(), 30)
        target = GridSpec.curvilinear(plat[None, :], plon[None, :])
        out = regrid_bilinear(s, target)
        finite = np.isfinite(out.values[:, 0, :])
        # global bound: any convex combination stays within the global range
        assert np.all(out.values[:, 0, :][finite] <= vals.max() + 1e-12)
        assert np.all(out.values[:, 0, :][finite] >= vals.min() - 1e-12)
        assert finite.any()
