"""CF-convention time decoding to UTC epoch seconds.

Supports the real-world calendars that map onto the proleptic Gregorian
datetime arithmetic Python provides: "standard", "gregorian" and
"proleptic_gregorian" (these agree for all post-1582 dates, which covers
the historical/reanalysis periods this tool targets). Model-specific
calendars (360_day, noleap, ...) are rejected explicitly rather than
silently resampled: coercing them would corrupt six-hourly alignment.
"""
from __future__ import annotations

import re
from datetime import datetime, timedelta, timezone

import numpy as np

SUPPORTED_CALENDARS = ("standard", "gregorian", "proleptic_gregorian")

_UNIT_SECONDS = {
    "second": 1.0, "seconds": 1.0, "sec": 1.0, "secs": 1.0, "s": 1.0,
    "minute": 60.0, "minutes": 60.0, "min": 60.0, "mins": 60.0,
    "hour": 3600.0, "hours": 3600.0, "hr": 3600.0, "hrs": 3600.0, "h": 3600.0,
    "day": 86400.0, "days": 86400.0, "d": 86400.0,
}

_REF_RE = re.compile(
    r"^\s*(?P<unit>[a-zA-Z]+)\s+since\s+"
    r"(?P<date>\d{1,4}-\d{1,2}-\d{1,2})"
    r"(?:[ T](?P<time>\d{1,2}:\d{1,2}(?::\d{1,2}(?:\.\d+)?)?))?"
    r"\s*(?P<tz>Z|[+-]\d{1,2}:?\d{2}|[+-]\d{1,2})?\s*$")


class CalendarError(ValueError):
    """Unsupported or undecodable CF calendar/time encoding."""


def check_calendar(calendar: str | None) -> str:
    cal = (calendar or "standard").strip().lower()
    if cal not in SUPPORTED_CALENDARS:
        raise CalendarError(
            f"calendar {cal!r} is not supported; convert the time axis to a "
            f"standard or proleptic_gregorian calendar first (e.g. with CDO "
            f"or xarray) and retry")
    return cal


def parse_reference(units: str) -> tuple[float, datetime]:
    """Split a CF units string into (seconds per step, reference datetime)."""
    m = _REF_RE.match(units)
    if not m:
        raise CalendarError(f"cannot parse CF time units {units!r}")
    unit = m.group("unit").lower()
    if unit not in _UNIT_SECONDS:
        raise CalendarError(f"unsupported time unit {unit!r} in {units!r}")
    y, mo, d = (int(part) for part in m.group("date").split("-"))
    hh = mm = 0
    ss = 0.0
    if m.group("time"):
        parts = m.group("time").split(":")
        hh, mm = int(parts[0]), int(parts[1])
        ss = float(parts[2]) if len(parts) > 2 else 0.0
    tz = timezone.utc
    raw_tz = m.group("tz")
    if raw_tz and raw_tz != "Z":
        sign = 1 if raw_tz[0] == "+" else -1
        digits = raw_tz[1:].replace(":", "")
        if len(digits) <= 2:
            off_h, off_m = int(digits), 0
        else:
            off_h, off_m = int(digits[:-2]), int(digits[-2:])
        tz = timezone(sign * timedelta(hours=off_h, minutes=off_m))
    ref = datetime(y, mo, d, hh, mm, int(ss), tzinfo=tz)
    ref += timedelta(seconds=ss - int(ss))
    return _UNIT_SECONDS[unit], ref


def decode_times(values, units: str, calendar: str | None = None) -> np.ndarray:
    """CF time values -> int64 seconds since 1970-01-01T00:00:00Z."""
    check_calendar(calendar)
    unit_seconds, ref = parse_reference(units)
    ref_epoch = ref.timestamp()
    raw = np.asarray(values, dtype=np.float64) * unit_seconds + ref_epoch
    rounded = np.rint(raw)
    if np.any(np.abs(raw - rounded) > 1e-3):
        worst = float(np.max(np.abs(raw - rounded)))
        raise CalendarError(
            f"time values are not whole seconds (off by up to {worst:.6f}s)")
    return rounded.astype(np.int64)
