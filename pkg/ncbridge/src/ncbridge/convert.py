"""NetCDF wind archives -> WGRD conversion.

A conversion spec names the u and v source files and variables, the output
paths, an optional [start, end) UTC time range, and an optional land-mask
source. Values pass through unchanged (CF scale/offset/fill applied, then
stored at the format's f32 precision); coordinates stay f64; times are
decoded from CF units to UTC epoch seconds.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .reader import NcReadError, NcVar, open_dataset
from .timecodec import CalendarError, check_calendar, decode_times
from .wgrdout import write_wgrd

LAT_NAMES = ("lat", "latitude", "nav_lat")
LON_NAMES = ("lon", "longitude", "nav_lon")
TIME_NAMES = ("time", "valid_time")


class SpecError(ValueError):
    """Malformed conversion spec."""


@dataclass
class FieldData:
    values: np.ndarray          # (n_t, n_y, n_x) float
    lat: np.ndarray
    lon: np.ndarray
    times: np.ndarray           # int64 epoch seconds
    units: str
    calendar: str


@dataclass
class ConversionSpec:
    u_path: Path
    u_var: str
    v_path: Path
    v_var: str
    out_u: Path
    out_v: Path
    time_range: tuple[int, int] | None = None
    landmask_path: Path | None = None
    landmask_var: str | None = None
    landmask_out: Path | None = None
    landmask_threshold: float | None = None

    @classmethod
    def from_json(cls, path) -> "ConversionSpec":
        doc = json.loads(Path(path).read_text())
        try:
            u, v = doc["u"], doc["v"]
            spec = cls(
                u_path=Path(u["path"]), u_var=str(u["var"]),
                v_path=Path(v["path"]), v_var=str(v["var"]),
                out_u=Path(doc["out_u"]), out_v=Path(doc["out_v"]),
            )
        except KeyError as exc:
            raise SpecError(f"conversion spec is missing key {exc}") from exc
        if doc.get("time_range") is not None:
            raw = doc["time_range"]
            if not (isinstance(raw, list) and len(raw) == 2):
                raise SpecError("time_range must be [start, end)")
            spec.time_range = (_parse_utc(raw[0]), _parse_utc(raw[1]))
            if spec.time_range[0] >= spec.time_range[1]:
                raise SpecError("time_range must be a nonempty [start, end)")
        if doc.get("landmask") is not None:
            lm = doc["landmask"]
            try:
                spec.landmask_path = Path(lm["path"])
                spec.landmask_var = str(lm["var"])
                spec.landmask_out = Path(lm["out"])
            except KeyError as exc:
                raise SpecError(f"landmask entry is missing key {exc}") from exc
            if lm.get("threshold") is not None:
                spec.landmask_threshold = float(lm["threshold"])
        return spec


def _parse_utc(stamp: str) -> int:
    text = re.sub("[Zz]$", "+00:00", stamp.strip())
    try:
        dt = datetime.fromisoformat(text)
    except ValueError as exc:
        raise SpecError(f"cannot parse timestamp {stamp!r}") from exc
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def _apply_cf_packing(var: NcVar) -> np.ndarray:
    """Fill values to NaN, scale/offset applied; dtype preserved when raw."""
    data = var.data
    fill = None
    for key in ("_FillValue", "missing_value"):
        if key in var.attrs:
            fill = np.asarray(var.attrs[key]).ravel()[0]
            break
    scaled = "scale_factor" in var.attrs or "add_offset" in var.attrs
    if scaled or fill is not None:
        data = data.astype(np.float64)
    if fill is not None:
        data = np.where(np.isclose(data, float(fill), rtol=1e-9, atol=0), np.nan, data)
    if scaled:
        data = data * float(np.asarray(var.attrs.get("scale_factor", 1.0)).ravel()[0]) \
            + float(np.asarray(var.attrs.get("add_offset", 0.0)).ravel()[0])
    return data


def _squeeze_to_tyx(name: str, data: np.ndarray) -> np.ndarray:
    """Drop singleton non-time axes (e.g. a height=1 level) down to (t, y, x)."""
    if data.ndim > 3:
        squeezable = [ax for ax in range(1, data.ndim) if data.shape[ax] == 1]
        for ax in reversed(squeezable):
            if data.ndim > 3:
                data = np.squeeze(data, axis=ax)
    if data.ndim != 3:
        raise NcReadError(
            f"variable {name!r} has shape {data.shape}; expected "
            f"(time, y, x) after squeezing singleton levels")
    return data


def load_field(path, var_name: str) -> FieldData:
    """One (time, y, x) variable with decoded coordinates and times."""
    ds = open_dataset(path)
    var = ds.var(var_name)
    lat = ds.find_by_names_or_units(LAT_NAMES, ("degrees_north", "degree_north"))
    lon = ds.find_by_names_or_units(LON_NAMES, ("degrees_east", "degree_east"))
    time = ds.find_by_names_or_units(TIME_NAMES, ())
    if time is None:
        for cand in ds.variables.values():
            if "since" in (cand.attr_text("units") or ""):
                time = cand
                break
    if lat is None or lon is None:
        raise NcReadError(f"{path}: cannot locate latitude/longitude variables")
    if time is None:
        raise NcReadError(f"{path}: cannot locate the time variable")
    calendar = check_calendar(time.attr_text("calendar"))
    times = decode_times(time.data, time.attr_text("units") or "", calendar)
    data = _squeeze_to_tyx(var_name, _apply_cf_packing(var))
    if np.any(np.diff(times) <= 0):
        raise NcReadError(f"{path}: time axis is not strictly increasing")
    if data.shape[0] != times.size:
        raise NcReadError(
            f"{path}: {var_name} has {data.shape[0]} steps but the time "
            f"variable has {times.size}")
    return FieldData(values=data, lat=np.asarray(lat.data, dtype=np.float64),
                     lon=np.asarray(lon.data, dtype=np.float64), times=times,
                     units=var.attr_text("units") or "m/s", calendar=calendar)


def _clip_time(field: FieldData, window: tuple[int, int] | None) -> FieldData:
    if window is None:
        return field
    keep = (field.times >= window[0]) & (field.times < window[1])
    if not keep.any():
        raise NcReadError("time_range selects no time steps")
    return FieldData(field.values[keep], field.lat, field.lon,
                     field.times[keep], field.units, field.calendar)


def convert(spec: ConversionSpec) -> list[Path]:
    """Run a conversion; returns the written WGRD paths."""
    u = _clip_time(load_field(spec.u_path, spec.u_var), spec.time_range)
    v = _clip_time(load_field(spec.v_path, spec.v_var), spec.time_range)
    if u.values.shape != v.values.shape:
        raise NcReadError(
            f"u {u.values.shape} and v {v.values.shape} shapes differ")
    if not (np.array_equal(u.lat, v.lat) and np.array_equal(u.lon, v.lon)):
        raise NcReadError("u and v coordinates differ")
    if not np.array_equal(u.times, v.times):
        raise NcReadError("u and v time axes differ")

    written = []
    for field, var_name, out in ((u, spec.u_var, spec.out_u),
                                 (v, spec.v_var, spec.out_v)):
        out.parent.mkdir(parents=True, exist_ok=True)
        write_wgrd(out, field.times, field.lat, field.lon, field.values,
                   name=var_name, unit=field.units)
        written.append(out)

    if spec.landmask_path is not None:
        written.append(_convert_landmask(spec))
    return written


def _convert_landmask(spec: ConversionSpec) -> Path:
    ds = open_dataset(spec.landmask_path)
    var = ds.var(spec.landmask_var)
    lat = ds.find_by_names_or_units(LAT_NAMES, ("degrees_north",))
    lon = ds.find_by_names_or_units(LON_NAMES, ("degrees_east",))
    if lat is None or lon is None:
        raise NcReadError(f"{spec.landmask_path}: cannot locate lat/lon")
    data = np.asarray(_apply_cf_packing(var), dtype=np.float64)
    if data.ndim == 3:
        data = data[0]
    if data.ndim != 2:
        raise NcReadError(f"land mask must be 2-D, got shape {data.shape}")
    if spec.landmask_threshold is not None:
        data = (data > spec.landmask_threshold).astype(np.float64)
    values = np.where(np.isnan(data), 0.0, data)
    if not np.all(np.isin(values, (0.0, 1.0))):
        raise NcReadError(
            "land mask values are not 0/1; pass a threshold to binarize")
    spec.landmask_out.parent.mkdir(parents=True, exist_ok=True)
    write_wgrd(spec.landmask_out, np.array([0], dtype=np.int64),
               lat.data.astype(np.float64), lon.data.astype(np.float64),
               values[None, :, :], name="landmask", unit="1")
    return spec.landmask_out


def inspect_summary(path) -> str:
    """Human-readable summary: dims, variables, calendar, grid kind, times."""
    ds = open_dataset(path)
    lines = [f"file: {ds.path}", f"format: {ds.format}"]
    lines.append("dimensions: " + (", ".join(f"{k}={v}" for k, v in
                                             sorted(ds.dims.items())) or "none"))
    lines.append("variables:")
    for name in sorted(ds.variables):
        var = ds.variables[name]
        units = var.attr_text("units")
        unit_txt = f" units={units!r}" if units else ""
        lines.append(f"  {name}{var.data.shape} "
                     f"{var.data.dtype}{unit_txt}")
    lat = ds.find_by_names_or_units(LAT_NAMES, ("degrees_north",))
    lon = ds.find_by_names_or_units(LON_NAMES, ("degrees_east",))
    if lat is None or lon is None:
        lines.append("grid: unknown (no lat/lon variables found)")
    elif lat.data.ndim == 2:
        lines.append("grid: curvilinear")
    else:
        lines.append("grid: regular")
    time = ds.find_by_names_or_units(TIME_NAMES, ())
    if time is None:
        lines.append("time: no time variable found")
    else:
        calendar = time.attr_text("calendar") or "standard"
        lines.append(f"calendar: {calendar}")
        try:
            times = decode_times(time.data, time.attr_text("units") or "",
                                 calendar)
            first = datetime.fromtimestamp(int(times[0]), tz=timezone.utc)
            last = datetime.fromtimestamp(int(times[-1]), tz=timezone.utc)
            lines.append(f"time range: {first.isoformat()} .. {last.isoformat()} "
                         f"({times.size} steps)")
        except CalendarError as exc:
            lines.append(f"time range: undecodable ({exc})")
    return "\n".join(lines)
