"""Tabulated turbine power curves and cumulative wind-power summaries.

A power curve is a table of (speed, power) knots plus cut-in / rated /
cut-out speeds. Output is zero strictly below cut-in and strictly above
cut-out, linear between knots, and exactly the tabulated value at a knot.
Curves ship as CSV files with a JSON metadata sidecar; a Vestas V126-3.45
curve (126 m hub) is bundled with the package.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .grids import GriddedSeries


class PowerCurveError(ValueError):
    """Power-curve file or table violates the curve invariants."""


@dataclass(eq=False)
class PowerCurve:
    speeds: np.ndarray
    powers: np.ndarray
    cut_in: float
    rated_speed: float
    cut_out: float
    rated_power: float
    name: str = ""
    hub_height: float = 0.0

    def __post_init__(self):
        self.speeds = np.asarray(self.speeds, dtype=np.float64)
        self.powers = np.asarray(self.powers, dtype=np.float64)
        if self.speeds.ndim != 1 or self.speeds.shape != self.powers.shape:
            raise PowerCurveError("speeds and powers must be matching 1-D arrays")
        if self.speeds.size < 2:
            raise PowerCurveError("curve needs at least two knots")
        if np.any(np.diff(self.speeds) <= 0):
            raise PowerCurveError("knot speeds must be strictly increasing")
        if np.any(self.powers < 0) or np.any(self.powers > self.rated_power):
            raise PowerCurveError("knot powers must lie in [0, rated_power]")
        if np.any(self.powers[self.speeds < self.cut_in] != 0):
            raise PowerCurveError("knots below cut-in must have zero power")
        if not self.cut_in < self.rated_speed < self.cut_out:
            raise PowerCurveError("need cut_in < rated_speed < cut_out")


def load_power_curve(csv_path) -> PowerCurve:
    """Load a curve from `wind_speed_ms,power_w` CSV plus its JSON sidecar.

    The sidecar sits next to the CSV with a .json suffix and carries
    {name, hub_height_m, cut_in, rated_speed, cut_out, rated_power_w}.
    """
    csv_path = Path(csv_path)
    sidecar = csv_path.with_suffix(".json")
    if not sidecar.exists():
        raise PowerCurveError(f"missing metadata sidecar {sidecar}")
    meta = json.loads(sidecar.read_text())
    speeds, powers = [], []
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["wind_speed_ms", "power_w"]:
            raise PowerCurveError(
                f"{csv_path}: expected header 'wind_speed_ms,power_w', got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                speeds.append(float(row[0]))
                powers.append(float(row[1]))
            except (ValueError, IndexError) as exc:
                raise PowerCurveError(f"{csv_path}:{lineno}: bad row {row}") from exc
    try:
        return PowerCurve(
            speeds=np.array(speeds), powers=np.array(powers),
            cut_in=float(meta["cut_in"]), rated_speed=float(meta["rated_speed"]),
            cut_out=float(meta["cut_out"]), rated_power=float(meta["rated_power_w"]),
            name=str(meta.get("name", csv_path.stem)),
            hub_height=float(meta.get("hub_height_m", 0.0)),
        )
    except KeyError as exc:
        raise PowerCurveError(f"{sidecar}: missing key {exc}") from exc


def builtin_curve_path(name: str = "vestas_v126_3450") -> Path:
    """Filesystem path of a bundled turbine curve CSV."""
    return Path(resources.files("windbench").joinpath(f"data/turbines/{name}.csv"))


def power_at(curve: PowerCurve, w) -> np.ndarray | float:
    """Power output (W) for speeds `w`; NaN speeds contribute 0."""
    arr = np.asarray(w, dtype=np.float64)
    out = np.interp(arr, curve.speeds, curve.powers, left=0.0, right=0.0)
    out = np.where((arr < curve.cut_in) | (arr > curve.cut_out), 0.0, out)
    out = np.where(np.isnan(arr), 0.0, out)
    if np.isscalar(w) or arr.ndim == 0:
        return float(out)
    return out


@dataclass
class PowerSummary:
    """Cumulative energy over a series plus the grid-normalized mean power."""

    total_energy_wh: float
    per_point_mean_power_w: float
    n_points: int
    n_steps: int
    step_hours: float
    n_missing: int = 0


def cumulative_power(series: GriddedSeries, curve: PowerCurve,
                     step_hours: float | None = None) -> PowerSummary:
    """Total generated energy summed over all time steps and grid points.

    The time axis must be uniform; its spacing is used as the accumulation
    step and validated against `step_hours` when that is provided (a lone
    time step cannot be inferred, so then step_hours is required). Grid
    points with no finite data at all are placeholders and do not count
    toward n_points; individual missing samples contribute zero energy and
    are tallied in n_missing.
    """
    if series.n_t == 0:
        raise ValueError("series has no time steps")
    if series.n_t >= 2:
        steps = np.diff(series.times)
        if np.any(steps != steps[0]):
            raise ValueError("time axis is not uniform")
        inferred = float(steps[0]) / 3600.0
        if step_hours is not None and abs(step_hours - inferred) > 1e-9:
            raise ValueError(
                f"configured step of {step_hours} h does not match the "
                f"time axis ({inferred} h)")
        step_hours = inferred
    elif step_hours is None:
        raise ValueError("step_hours is required for a single-step series")

    finite = np.isfinite(series.values)
    alive = finite.any(axis=0)
    n_points = int(alive.sum())
    if n_points == 0:
        raise ValueError("series has no grid points with data")
    n_missing = int((~finite[:, alive]).sum())
    powers = power_at(curve, series.values)
    total = float(np.sum(powers)) * step_hours
    denom = n_points * series.n_t * step_hours
    return PowerSummary(
        total_energy_wh=total,
        per_point_mean_power_w=total / denom,
        n_points=n_points,
        n_steps=series.n_t,
        step_hours=step_hours,
        n_missing=n_missing,
    )


def relative_power(model: PowerSummary, reference: PowerSummary,
                   normalize: str = "per_point") -> float:
    """Percent deviation of a model's power from the reference's.

    Per-point mean powers are compared by default so grids of different
    density are comparable; normalize="total" switches to raw totals.
    """
    if normalize == "per_point":
        num, den = model.per_point_mean_power_w, reference.per_point_mean_power_w
    elif normalize == "total":
        num, den = model.total_energy_wh, reference.total_energy_wh
    else:
        raise ValueError(f"unknown normalization {normalize!r}")
    if not den > 0:
        raise ValueError("reference power must be positive")
    return 100.0 * (num / den - 1.0)
