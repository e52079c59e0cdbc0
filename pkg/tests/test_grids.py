import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from windbench.grids import (EmptyRegionError, GriddedSeries, GridError, GridSpec,
                             MaskMismatchError, RegionSelection, count_points,
                             normalize_lon, select_region)


def make_series(lat, lon, values=None, times=None):
    grid = GridSpec.regular(lat, lon)
    n_y, n_x = grid.shape
    if times is None:
        times = [0]
    if values is None:
        values = np.arange(len(times) * n_y * n_x, dtype=float).reshape(len(times), n_y, n_x)
    return GriddedSeries(grid, times, values)


class TestGridSpec:
    def test_regular_shape(self):
        g = GridSpec.regular([10.0, 20.0, 30.0], [0.0, 5.0])
        assert g.shape == (3, 2)

    def test_non_monotonic_axis_rejected(self):
        with pytest.raises(GridError, match="monotonic"):
            GridSpec.regular([10.0, 30.0, 20.0], [0.0, 5.0])

    def test_lat_out_of_range_rejected(self):
        with pytest.raises(GridError, match="latitudes"):
            GridSpec.regular([80.0, 95.0], [0.0, 5.0])

    def test_lon_normalized_to_half_open_interval(self):
        g = GridSpec.regular([0.0, 1.0], [170.0, 180.0])
        assert g.lon[1] == -180.0
        # lon already in range passes through bit-exactly
        assert normalize_lon(np.array([0.1, -179.9]))[0] == 0.1

    def test_curvilinear_needs_matching_2d(self):
        with pytest.raises(GridError):
            GridSpec.curvilinear(np.zeros((2, 3)), np.zeros((3, 2)))

    def test_descending_lat_is_valid_and_canonicalized_with_values(self):
        s = make_series([30.0, 20.0, 10.0], [0.0, 5.0])
        assert list(s.grid.lat) == [10.0, 20.0, 30.0]
        # row order followed the flip: original row 0 (lat 30) is now last
        assert s.values[0, 2, 0] == 0.0


class TestGriddedSeries:
    def test_times_must_increase(self):
        with pytest.raises(GridError, match="strictly increasing"):
            make_series([0.0, 1.0], [0.0, 1.0], times=[5, 5])

    def test_shape_mismatch(self):
        with pytest.raises(GridError, match="shape"):
            GriddedSeries(GridSpec.regular([0.0, 1.0], [0.0, 1.0]),
                          [0], np.zeros((1, 3, 3)))

    def test_empty_time_axis_allowed(self):
        s = GriddedSeries(GridSpec.regular([0.0, 1.0], [0.0, 1.0]),
                          np.array([], dtype=np.int64), np.zeros((0, 2, 2)))
        assert s.n_t == 0

    def test_select_times_half_open(self):
        s = make_series([0.0, 1.0], [0.0, 1.0], times=[0, 100, 200],
                        values=np.zeros((3, 2, 2)))
        cut = s.select_times(0, 200)
        assert list(cut.times) == [0, 100]


class TestSelectRegion:
    def test_whole_grid_region_is_identity(self):
        s = make_series([10.0, 20.0, 30.0, 40.0], [0.0, 10.0, 20.0, 30.0])
        region = RegionSelection(10.0, 40.0, 0.0, 30.0)
        out = select_region(s, region)
        assert out.grid.equals(s.grid)
        np.testing.assert_array_equal(out.values, s.values)
        assert count_points(s, region) == 16

    def test_inner_rectangle(self):
        s = make_series([10.0, 20.0, 30.0, 40.0], [0.0, 10.0, 20.0, 30.0])
        out = select_region(s, RegionSelection(15.0, 35.0, 5.0, 25.0))
        assert list(out.grid.lat) == [20.0, 30.0]
        assert list(out.grid.lon) == [10.0, 20.0]
        np.testing.assert_array_equal(out.values[0], s.values[0, 1:3, 1:3])

    def test_disjoint_rectangle_raises_empty_region(self):
        s = make_series([10.0, 20.0], [0.0, 10.0])
        with pytest.raises(EmptyRegionError, match="empty region"):
            select_region(s, RegionSelection(50.0, 60.0, 50.0, 60.0))

    def test_mask_zeroes_points_and_count(self):
        s = make_series([10.0, 20.0], [0.0, 10.0])
        mask = GriddedSeries(s.grid, [0], np.array([[[1.0, 0.0], [1.0, 1.0]]]),
                             units="1", name="landmask")
        region = RegionSelection(0.0, 90.0, -20.0, 20.0, land_mask=mask)
        out = select_region(s, region)
        assert np.isnan(out.values[0, 0, 1])
        assert np.isfinite(out.values[0, 0, 0])
        assert count_points(s, region) == 3

    def test_mask_grid_mismatch(self):
        s = make_series([10.0, 20.0], [0.0, 10.0])
        other = GridSpec.regular([11.0, 21.0], [0.0, 10.0])
        mask = GriddedSeries(other, [0], np.ones((1, 2, 2)), name="landmask")
        with pytest.raises(MaskMismatchError, match="mask/grid mismatch"):
            select_region(s, RegionSelection(0.0, 90.0, -20.0, 20.0, land_mask=mask))

    def test_mask_values_validated(self):
        s = make_series([10.0, 20.0], [0.0, 10.0])
        bad = GriddedSeries(s.grid, [0], np.full((1, 2, 2), 0.5))
        with pytest.raises(GridError, match="0 or 1"):
            RegionSelection(0.0, 90.0, -20.0, 20.0, land_mask=bad)

    def test_select_is_idempotent(self):
        s = make_series(np.arange(8.0), np.arange(8.0) * 2.0,
                        times=[0, 3600],
                        values=np.random.default_rng(1).normal(size=(2, 8, 8)))
        region = RegionSelection(1.5, 6.5, 2.5, 9.5)
        once = select_region(s, region)
        twice = select_region(once, region)
        assert once.grid.equals(twice.grid)
        np.testing.assert_array_equal(once.values, twice.values)

    def test_select_idempotent_with_mask(self):
        rng = np.random.default_rng(2)
        s = make_series(np.arange(6.0), np.arange(6.0),
                        values=rng.normal(size=(1, 6, 6)))
        mask_vals = (rng.uniform(size=(1, 6, 6)) > 0.4).astype(float)
        mask_vals[0, 2, 2] = 1.0
        mask = GriddedSeries(s.grid, [0], mask_vals, name="landmask")
        region = RegionSelection(0.5, 4.5, 0.5, 4.5, land_mask=mask)
        once = select_region(s, region)
        twice = select_region(once, region)
        np.testing.assert_array_equal(once.values, twice.values)

    def test_count_of_selection_equals_count_of_original(self):
        rng = np.random.default_rng(3)
        s = make_series(np.arange(6.0), np.arange(6.0),
                        values=rng.normal(size=(1, 6, 6)))
        mask_vals = (rng.uniform(size=(1, 6, 6)) > 0.3).astype(float)
        mask_vals[0, 3, 3] = 1.0
        mask = GriddedSeries(s.grid, [0], mask_vals, name="landmask")
        region = RegionSelection(0.5, 4.5, 0.5, 4.5, land_mask=mask)
        selected = select_region(s, region)
        whole = RegionSelection(-90.0, 90.0, -180.0, 179.999)
        assert count_points(selected, whole) == count_points(s, region)

    def test_curvilinear_selection(self):
        lat2d, lon2d = np.meshgrid(np.arange(4.0), np.arange(5.0), indexing="ij")
        grid = GridSpec.curvilinear(lat2d, lon2d)
        s = GriddedSeries(grid, [0], np.arange(20.0).reshape(1, 4, 5))
        region = RegionSelection(0.5, 2.5, 0.5, 3.5)
        out = select_region(s, region)
        assert out.grid.shape == (2, 3)
        assert count_points(s, region) == 6

    def test_invalid_region_bounds(self):
        with pytest.raises(GridError):
            RegionSelection(10.0, 10.0, 0.0, 1.0)


@st.composite
def region_and_grid(draw):
    n_y = draw(st.integers(2, 8))
    n_x = draw(st.integers(2, 8))
    lat0 = draw(st.floats(-60, 40))
    lon0 = draw(st.floats(-120, 100))
    lat = lat0 + np.arange(n_y) * draw(st.floats(0.5, 4.0))
    lon = lon0 + np.arange(n_x) * draw(st.floats(0.5, 4.0))
    lat = np.clip(lat, -90, 90)
    lon = np.clip(lon, -180, 179.99)
    if np.any(np.diff(lat) <= 0) or np.any(np.diff(lon) <= 0):
        # clipping can flatten the axis; regenerate deterministically
        lat = lat0 + np.arange(n_y) * 1.0
        lon = lon0 + np.arange(n_x) * 1.0
        lat = np.clip(lat, -90, 89)
        lon = np.clip(lon, -180, 179.0 - n_x)
    frac = sorted([draw(st.floats(0.05, 0.95)), draw(st.floats(0.05, 0.95))])
    return lat, lon, frac


@given(region_and_grid())
@settings(max_examples=60, deadline=None)
def test_select_idempotency_property(params):
    lat, lon, frac = params
    if np.any(np.diff(lat) <= 0) or np.any(np.diff(lon) <= 0):
        return
    s = make_series(lat, lon)
    lo = lat[0] + frac[0] * (lat[-1] - lat[0])
    hi = lat[0] + frac[1] * (lat[-1] - lat[0]) + 1e-9
    region = RegionSelection(lo, hi, lon[0] - 1, lon[-1] + 1)
    try:
        once = select_region(s, region)
    except EmptyRegionError:
        return
    twice = select_region(once, region)
    np.testing.assert_array_equal(once.values, twice.values)
    whole = RegionSelection(-90, 90, -180, 179.9999)
    assert count_points(once, whole) == count_points(s, region)
