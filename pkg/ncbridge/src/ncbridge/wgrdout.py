"""WGRD writer: the binary interchange format the evaluation toolkit reads.

Layout (little-endian): "WGRD" magic, u16 version 1, u8 grid kind
(0 regular / 1 curvilinear), u8 reserved 0, u32 n_t/n_y/n_x, i64 epoch
timestamps, f64 coordinates (axes for regular grids, row-major 2-D fields
for curvilinear), u16 variable count, then per variable a length-prefixed
ASCII name and unit followed by f32 values, t slowest / x fastest. Missing
values are f32 NaN.
"""
from __future__ import annotations

import struct

import numpy as np

MAGIC = b"WGRD"
VERSION = 1
_HEADER = struct.Struct("<4sHBBIII")


class WgrdWriteError(ValueError):
    pass


def _ascii(text: str, what: str) -> bytes:
    try:
        raw = text.encode("ascii")
    except UnicodeEncodeError as exc:
        raise WgrdWriteError(f"{what} must be ASCII, got {text!r}") from exc
    if not 1 <= len(raw) <= 255:
        raise WgrdWriteError(f"{what} must be 1..255 bytes")
    return raw


def write_wgrd(path, times, lat, lon, values, name: str, unit: str) -> None:
    """Write one variable; grid kind follows the coordinate rank."""
    times = np.ascontiguousarray(times, dtype="<i8")
    lat = np.ascontiguousarray(lat, dtype="<f8")
    lon = np.ascontiguousarray(lon, dtype="<f8")
    values = np.ascontiguousarray(values, dtype="<f4")
    if lat.ndim == 1 and lon.ndim == 1:
        kind = 0
        n_y, n_x = lat.size, lon.size
    elif lat.ndim == 2 and lon.ndim == 2 and lat.shape == lon.shape:
        kind = 1
        n_y, n_x = lat.shape
    else:
        raise WgrdWriteError("coordinates must be two 1-D axes or two matching "
                             "2-D fields")
    if values.shape != (times.size, n_y, n_x):
        raise WgrdWriteError(
            f"values shape {values.shape} does not match "
            f"(n_t={times.size}, n_y={n_y}, n_x={n_x})")
    name_b = _ascii(name, "variable name")
    unit_b = _ascii(unit, "unit")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, kind, 0, times.size, n_y, n_x))
        fh.write(times.tobytes())
        fh.write(lat.tobytes())
        fh.write(lon.tobytes())
        fh.write(struct.pack("<H", 1))
        fh.write(struct.pack("<B", len(name_b)))
        fh.write(name_b)
        fh.write(struct.pack("<B", len(unit_b)))
        fh.write(unit_b)
        fh.write(values.tobytes())
