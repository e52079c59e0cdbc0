"""Gridded wind-data containers and spatial region selection.

A series lives on either a regular grid (1-D lat/lon axes) or a curvilinear
grid (2-D lat/lon arrays, e.g. rotated-pole regional models). Values are a
(n_t, n_y, n_x) array with NaN for missing data. All functions here are pure:
they never mutate their inputs and are safe to call from multiple threads.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

GRID_REGULAR = "regular"
GRID_CURVILINEAR = "curvilinear"


class GridError(ValueError):
    """Invalid grid geometry or inconsistent grid/value shapes."""


class EmptyRegionError(GridError):
    """A region selection matched no grid points."""


class MaskMismatchError(GridError):
    """A land mask could not be aligned with the target grid."""


def normalize_lon(lon: np.ndarray) -> np.ndarray:
    """Map longitudes into [-180, 180).

    Values already in range pass through bit-exactly (no arithmetic is
    applied to them), so round trips of compliant files stay lossless.
    """
    lon = np.asarray(lon, dtype=np.float64)
    out_of_range = (lon < -180.0) | (lon >= 180.0)
    if not out_of_range.any():
        return lon
    wrapped = ((lon + 180.0) % 360.0) - 180.0
    return np.where(out_of_range, wrapped, lon)


def unwrap_regular_lon(lon: np.ndarray, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Restore monotonic order to a regular lon axis after normalization.

    A 0..360-style axis becomes two ascending runs once mapped into
    [-180, 180); rolling both the axis and the value columns to start at the
    minimum longitude repairs it. Raises GridError when no single roll gives
    a monotonic axis. Readers call this on raw arrays before building a
    GridSpec, which only accepts monotonic axes.
    """
    lon = normalize_lon(lon)
    if lon.size > 1 and np.any(np.diff(lon) < 0) and not np.all(np.diff(lon) < 0):
        cut = int(np.argmin(lon))
        lon = np.roll(lon, -cut)
        values = np.roll(values, -cut, axis=2)
        if np.any(np.diff(lon) <= 0):
            raise GridError("longitude axis is not monotonic after unwrapping")
    return lon, values


@dataclass(frozen=True, eq=False)
class GridSpec:
    """Geometry of a regular or curvilinear lat/lon grid.

    Regular grids carry 1-D strictly monotonic axes; curvilinear grids carry
    2-D per-point coordinates. Latitudes are degrees north in [-90, 90],
    longitudes degrees east in [-180, 180).
    """

    kind: str
    lat: np.ndarray
    lon: np.ndarray

    def __post_init__(self):
        lat = np.asarray(self.lat, dtype=np.float64)
        lon = np.asarray(self.lon, dtype=np.float64)
        object.__setattr__(self, "lat", lat)
        object.__setattr__(self, "lon", lon)
        if self.kind == GRID_REGULAR:
            if lat.ndim != 1 or lon.ndim != 1:
                raise GridError("regular grid needs 1-D lat/lon axes")
            if lat.size < 1 or lon.size < 1:
                raise GridError("grid axes must be non-empty")
            for name, ax in (("lat", lat), ("lon", lon)):
                d = np.diff(ax)
                if not (np.all(d > 0) or np.all(d < 0)):
                    raise GridError(f"regular {name} axis is not strictly monotonic")
        elif self.kind == GRID_CURVILINEAR:
            if lat.ndim != 2 or lon.ndim != 2 or lat.shape != lon.shape:
                raise GridError("curvilinear grid needs matching 2-D lat/lon arrays")
            if lat.size < 1:
                raise GridError("grid must be non-empty")
        else:
            raise GridError(f"unknown grid kind {self.kind!r}")
        if np.any(np.abs(lat) > 90.0) or np.any(np.isnan(lat)):
            raise GridError("latitudes must lie in [-90, 90]")
        if np.any(lon < -180.0) or np.any(lon >= 180.0) or np.any(np.isnan(lon)):
            raise GridError("longitudes must lie in [-180, 180)")

    @classmethod
    def regular(cls, lat, lon) -> "GridSpec":
        return cls(GRID_REGULAR, np.asarray(lat, dtype=np.float64),
                   normalize_lon(np.asarray(lon, dtype=np.float64)))

    @classmethod
    def curvilinear(cls, lat, lon) -> "GridSpec":
        return cls(GRID_CURVILINEAR, np.asarray(lat, dtype=np.float64),
                   normalize_lon(np.asarray(lon, dtype=np.float64)))

    @property
    def shape(self) -> tuple[int, int]:
        """(n_y, n_x) of the value planes."""
        if self.kind == GRID_REGULAR:
            return self.lat.size, self.lon.size
        return self.lat.shape

    def point_latlon(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-point (lat, lon) as two (n_y, n_x) arrays."""
        if self.kind == GRID_REGULAR:
            lon2d, lat2d = np.meshgrid(self.lon, self.lat)
            return lat2d, lon2d
        return self.lat, self.lon

    def equals(self, other: "GridSpec") -> bool:
        return (self.kind == other.kind
                and np.array_equal(self.lat, other.lat)
                and np.array_equal(self.lon, other.lon))


@dataclass(eq=False)
class GriddedSeries:
    """One physical variable on a grid over time.

    values has shape (n_t, n_y, n_x); missing values are NaN. Regular grids
    are canonicalized to ascending lat/lon on construction (rows/columns of
    values are reordered together with the axes), so downstream index
    searches can assume ascending order.
    """

    grid: GridSpec
    times: np.ndarray
    values: np.ndarray
    units: str = "m/s"
    name: str = "w"

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.times.ndim != 1:
            raise GridError("times must be a 1-D array")
        if np.any(np.diff(self.times) <= 0):
            raise GridError("times must be strictly increasing")
        expected = (self.times.size,) + self.grid.shape
        if self.values.shape != expected:
            raise GridError(
                f"values shape {self.values.shape} does not match "
                f"(n_t, n_y, n_x) = {expected}")
        if self.grid.kind == GRID_REGULAR:
            self._canonicalize_regular()

    def _canonicalize_regular(self):
        lat, lon, vals = self.grid.lat, self.grid.lon, self.values
        changed = False
        if lat.size > 1 and lat[1] < lat[0]:
            lat = lat[::-1]
            vals = vals[:, ::-1, :]
            changed = True
        if lon.size > 1 and lon[1] < lon[0]:
            lon = lon[::-1]
            vals = vals[:, :, ::-1]
            changed = True
        if changed:
            self.grid = GridSpec(GRID_REGULAR, np.ascontiguousarray(lat),
                                 np.ascontiguousarray(lon))
            self.values = np.ascontiguousarray(vals)

    @property
    def n_t(self) -> int:
        return self.times.size

    def same_axes(self, other: "GriddedSeries") -> bool:
        return self.grid.equals(other.grid) and np.array_equal(self.times, other.times)

    def select_times(self, start_epoch: int, end_epoch: int) -> "GriddedSeries":
        """Restrict to timestamps t with start <= t < end."""
        keep = (self.times >= start_epoch) & (self.times < end_epoch)
        if not keep.any():
            raise GridError("time window selects no time steps")
        return GriddedSeries(self.grid, self.times[keep], self.values[keep],
                             units=self.units, name=self.name)


@dataclass
class RegionSelection:
    """Rectangular lat/lon selection with an optional 0/1 land mask.

    Bounds are inclusive. The mask, when given, is a single-time-step series
    on (or containing) the target grid; points with mask value 0 are dropped.
    """

    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float
    land_mask: GriddedSeries | None = field(default=None)

    def __post_init__(self):
        if not self.lat_min < self.lat_max:
            raise GridError("region needs lat_min < lat_max")
        if not self.lon_min < self.lon_max:
            raise GridError("region needs lon_min < lon_max")
        if self.land_mask is not None:
            m = self.land_mask
            if m.n_t != 1:
                raise GridError("land mask must have exactly one time step")
            vals = m.values
            if not np.all(np.isin(vals[np.isfinite(vals)], (0.0, 1.0))) or np.any(~np.isfinite(vals)):
                raise GridError("land mask values must be 0 or 1")


def _aligned_mask(mask: GriddedSeries, grid: GridSpec) -> np.ndarray:
    """Mask plane aligned onto `grid`; raises MaskMismatchError when impossible.

    The mask grid must either equal the target grid or (regular grids only)
    contain it as an exact coordinate sub-block, which is what a previous
    select_region produces.
    """
    if mask.grid.equals(grid):
        return mask.values[0]
    if mask.grid.kind == GRID_REGULAR and grid.kind == GRID_REGULAR:
        iy = np.searchsorted(mask.grid.lat, grid.lat)
        ix = np.searchsorted(mask.grid.lon, grid.lon)
        if (np.all(iy < mask.grid.lat.size) and np.all(ix < mask.grid.lon.size)
                and np.array_equal(mask.grid.lat[iy], grid.lat)
                and np.array_equal(mask.grid.lon[ix], grid.lon)):
            return mask.values[0][np.ix_(iy, ix)]
    raise MaskMismatchError("mask/grid mismatch: land mask does not align with the data grid")


def _selected_points(series: GriddedSeries, region: RegionSelection) -> np.ndarray:
    """Boolean (n_y, n_x) plane of points kept by rectangle and mask."""
    lat2d, lon2d = series.grid.point_latlon()
    keep = ((lat2d >= region.lat_min) & (lat2d <= region.lat_max)
            & (lon2d >= region.lon_min) & (lon2d <= region.lon_max))
    if region.land_mask is not None:
        keep &= _aligned_mask(region.land_mask, series.grid) > 0.5
    if not keep.any():
        raise EmptyRegionError(
            f"empty region: no grid points inside "
            f"lat [{region.lat_min}, {region.lat_max}], "
            f"lon [{region.lon_min}, {region.lon_max}]")
    return keep


def select_region(series: GriddedSeries, region: RegionSelection) -> GriddedSeries:
    """Crop a series to a region.

    The result is cut down to the bounding index box of the kept points;
    points inside the box that are excluded (by the rectangle on curvilinear
    grids, or by the mask) become NaN at every time step. Selecting twice
    with the same region is a no-op the second time.
    """
    keep = _selected_points(series, region)
    ys, xs = np.nonzero(keep)
    y0, y1 = int(ys.min()), int(ys.max()) + 1
    x0, x1 = int(xs.min()), int(xs.max()) + 1
    vals = series.values[:, y0:y1, x0:x1].copy()
    vals[:, ~keep[y0:y1, x0:x1]] = np.nan
    if series.grid.kind == GRID_REGULAR:
        grid = GridSpec(GRID_REGULAR, series.grid.lat[y0:y1], series.grid.lon[x0:x1])
    else:
        grid = GridSpec(GRID_CURVILINEAR, series.grid.lat[y0:y1, x0:x1],
                        series.grid.lon[y0:y1, x0:x1])
    return GriddedSeries(grid, series.times, vals, units=series.units, name=series.name)


def count_points(series: GriddedSeries, region: RegionSelection) -> int:
    """Number of spatial points the region keeps.

    Points with no finite value at any time step are not counted: they are
    placeholders that keep the array rectangular (e.g. ocean points NaN-ed
    out by an earlier mask application), not data points.
    """
    keep = _selected_points(series, region)
    if series.n_t > 0:
        keep = keep & ~np.all(np.isnan(series.values), axis=0)
    return int(keep.sum())
