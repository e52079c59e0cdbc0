"""Reader/writer for the WGRD binary grid format.

Layout (all little-endian):

    bytes 0-3   ASCII "WGRD"
    u16         version (= 1)
    u8          grid kind: 0 regular, 1 curvilinear
    u8          reserved (= 0)
    u32 x 3     n_t, n_y, n_x
    i64[n_t]    timestamps, seconds since 1970-01-01T00:00:00Z
    coords      regular:      f64 lat[n_y], f64 lon[n_x]
                curvilinear:  f64 lat[n_y*n_x], f64 lon[n_y*n_x], row-major
    u16         n_vars
    per var     u8 name_len, name, u8 unit_len, unit,
                f32 data[n_t*n_y*n_x] row-major (t slowest, x fastest)

Missing values are f32 quiet NaN. Values are stored at f32 precision:
the writer casts, the reader returns the exact f64 image of the stored
f32 bits, so write-read round trips are lossless after the first write.
"""
from __future__ import annotations

import struct

import numpy as np

from .grids import GRID_REGULAR, GriddedSeries, GridSpec, unwrap_regular_lon

MAGIC = b"WGRD"
VERSION = 1
_HEADER = struct.Struct("<4sHBBIII")


class WgrdError(ValueError):
    """Structured WGRD parse/encode error carrying the failing byte offset."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


def _take(buf: bytes, offset: int, nbytes: int, what: str) -> int:
    end = offset + nbytes
    if end > len(buf):
        raise WgrdError(f"truncated file: expected {what}", offset)
    return end


def _read_array(buf: bytes, offset: int, dtype, count: int, what: str):
    nbytes = np.dtype(dtype).itemsize * count
    end = _take(buf, offset, nbytes, what)
    arr = np.frombuffer(buf, dtype=dtype, count=count, offset=offset)
    return arr, end


def read_wgrd(path, var: str | None = None) -> GriddedSeries:
    """Read one variable of a WGRD file as a GriddedSeries.

    `var` selects the variable by name; it may be omitted for single-variable
    files. Longitudes are normalized to [-180, 180) on load and regular grids
    are canonicalized to ascending axes.
    """
    with open(path, "rb") as fh:
        buf = fh.read()

    _take(buf, 0, _HEADER.size, "header")
    magic, version, kind_code, reserved, n_t, n_y, n_x = _HEADER.unpack_from(buf, 0)
    if magic != MAGIC:
        raise WgrdError(f"bad magic {magic!r}, expected {MAGIC!r}", 0)
    if version != VERSION:
        raise WgrdError(f"unsupported version {version}", 4)
    if kind_code not in (0, 1):
        raise WgrdError(f"unknown grid kind {kind_code}", 6)
    if reserved != 0:
        raise WgrdError(f"reserved byte must be 0, got {reserved}", 7)
    if n_y < 1 or n_x < 1:
        raise WgrdError(f"grid dimensions must be positive, got n_y={n_y} n_x={n_x}", 8)
    offset = _HEADER.size

    times, offset = _read_array(buf, offset, "<i8", n_t, f"{n_t} timestamps")
    n_pts = n_y * n_x
    if kind_code == 0:
        lat, offset = _read_array(buf, offset, "<f8", n_y, f"{n_y} latitudes")
        lon, offset = _read_array(buf, offset, "<f8", n_x, f"{n_x} longitudes")
    else:
        lat, offset = _read_array(buf, offset, "<f8", n_pts, f"{n_pts} latitudes")
        lon, offset = _read_array(buf, offset, "<f8", n_pts, f"{n_pts} longitudes")
        lat = lat.reshape(n_y, n_x)
        lon = lon.reshape(n_y, n_x)

    end = _take(buf, offset, 2, "variable count")
    (n_vars,) = struct.unpack_from("<H", buf, offset)
    offset = end
    if n_vars < 1:
        raise WgrdError("file contains no variables", offset - 2)

    def _decode(raw: bytes, what: str, at: int) -> str:
        try:
            return raw.decode("ascii")
        except UnicodeDecodeError as exc:
            raise WgrdError(f"{what} is not ASCII", at) from exc

    variables: dict[str, tuple[str, np.ndarray]] = {}
    n_values = n_t * n_pts
    for _ in range(n_vars):
        end = _take(buf, offset, 1, "variable name length")
        name_len = buf[offset]
        offset = end
        end = _take(buf, offset, name_len, "variable name")
        name = _decode(buf[offset:end], "variable name", offset)
        offset = end
        end = _take(buf, offset, 1, "unit length")
        unit_len = buf[offset]
        offset = end
        end = _take(buf, offset, unit_len, "unit")
        unit = _decode(buf[offset:end], "unit", offset)
        offset = end
        data, offset = _read_array(buf, offset, "<f4", n_values,
                                   f"{n_values} values of variable {name!r}")
        variables[name] = (unit, data)

    if var is None:
        if len(variables) > 1:
            raise WgrdError(
                "file has multiple variables "
                f"({', '.join(sorted(variables))}); pass var= to pick one")
        var = next(iter(variables))
    if var not in variables:
        raise WgrdError(f"variable {var!r} not in file "
                        f"(has: {', '.join(sorted(variables))})")
    unit, data = variables[var]
    values = data.astype(np.float64).reshape(n_t, n_y, n_x)

    if kind_code == 0:
        lon, values = unwrap_regular_lon(lon, values)
        grid = GridSpec.regular(lat, lon)
    else:
        grid = GridSpec.curvilinear(lat, lon)
    return GriddedSeries(grid, times, values, units=unit, name=var)


def _ascii_field(text: str, what: str) -> bytes:
    try:
        raw = text.encode("ascii")
    except UnicodeEncodeError as exc:
        raise WgrdError(f"{what} must be ASCII, got {text!r}") from exc
    if not 1 <= len(raw) <= 255:
        raise WgrdError(f"{what} must be 1..255 bytes, got {len(raw)}")
    return raw


def write_wgrd(series: GriddedSeries, path) -> None:
    """Write a series as a single-variable WGRD file (values cast to f32)."""
    grid = series.grid
    kind_code = 0 if grid.kind == GRID_REGULAR else 1
    n_y, n_x = grid.shape
    name = _ascii_field(series.name, "variable name")
    unit = _ascii_field(series.units, "unit")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, kind_code, 0, series.n_t, n_y, n_x))
        fh.write(np.ascontiguousarray(series.times, dtype="<i8").tobytes())
        if kind_code == 0:
            fh.write(np.ascontiguousarray(grid.lat, dtype="<f8").tobytes())
            fh.write(np.ascontiguousarray(grid.lon, dtype="<f8").tobytes())
        else:
            fh.write(np.ascontiguousarray(grid.lat, dtype="<f8").tobytes())
            fh.write(np.ascontiguousarray(grid.lon, dtype="<f8").tobytes())
        fh.write(struct.pack("<H", 1))
        fh.write(struct.pack("<B", len(name)))
        fh.write(name)
        fh.write(struct.pack("<B", len(unit)))
        fh.write(unit)
        fh.write(np.ascontiguousarray(series.values, dtype="<f4").tobytes())


def read_landmask(path) -> GriddedSeries:
    """Read a land mask file: one variable named "landmask", n_t = 1, 0/1 values."""
    mask = read_wgrd(path, var="landmask")
    if mask.n_t != 1:
        raise WgrdError(f"land mask must have n_t=1, got {mask.n_t}")
    finite = np.isfinite(mask.values)
    if not finite.all() or not np.all(np.isin(mask.values, (0.0, 1.0))):
        raise WgrdError("land mask values must all be 0.0 or 1.0")
    return mask
