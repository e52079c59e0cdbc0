"""Report artifacts for an evaluation run.

Every number is written via repr() of a Python float (shortest exact
round-trip form), so identical runs produce byte-identical files and the
SVG charts can embed the very same strings.
"""
from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .pipeline import RunResult

METRICS_HEADER = ["source_id", "mean", "top_k_mean", "js", "w1"]
POWER_HEADER = ["source_id", "total_energy_wh", "per_point_mean_power_w",
                "n_points", "n_steps", "step_hours", "n_missing",
                "relative_power_pct"]
REGRESSION_HEADER = ["metric", "intercept", "slope", "std_dev",
                     "r_squared_percent", "p_value"]
POINTS_HEADER = ["source_id", "points"]
DENSITY_HEADER = ["source_id", "speed_ms", "density"]


def fmt(value) -> str:
    """Canonical cell text: shortest exact float repr; empty for None."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return repr(float(value))


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    lines += [",".join(fmt(cell) for cell in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def _json_cell(value):
    if value is None or isinstance(value, str):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    return float(value)


def write_artifacts(result: RunResult, out_dir, config_echo: dict) -> list[Path]:
    """Write all run artifacts into out_dir and return their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    metric_rows, power_rows, point_rows = [], [], []
    for o in result.outcomes:
        if o.error is not None or o.metrics is None:
            continue
        m = o.metrics
        metric_rows.append([m.source_id, m.mean, m.top_k_mean, m.js, m.w1])
        p = o.power
        power_rows.append([o.id, p.total_energy_wh, p.per_point_mean_power_w,
                           p.n_points, p.n_steps, p.step_hours, p.n_missing,
                           o.relative_power_pct])
        point_rows.append([o.id, o.n_points])

    _write_csv(out / "metrics.csv", METRICS_HEADER, metric_rows)
    (out / "metrics.json").write_text(json.dumps([
        dict(zip(METRICS_HEADER, map(_json_cell, row))) for row in metric_rows
    ], indent=2) + "\n")
    _write_csv(out / "power.csv", POWER_HEADER, power_rows)
    (out / "power.json").write_text(json.dumps([
        dict(zip(POWER_HEADER, map(_json_cell, row))) for row in power_rows
    ], indent=2) + "\n")
    _write_csv(out / "points.csv", POINTS_HEADER, point_rows)

    reg_rows = [
        [metric, r.intercept, r.slope, r.slope_std_error,
         100.0 * r.r_squared, r.p_value]
        for metric, r in zip(result.regression_metrics, result.regressions)
    ]
    _write_csv(out / "regression.csv", REGRESSION_HEADER, reg_rows)
    reg_doc = {
        "log_base": result.log_base,
        "note": result.regression_note,
        "rows": [dict(zip(REGRESSION_HEADER, map(_json_cell, row)))
                 for row in reg_rows],
    }
    (out / "regression.json").write_text(json.dumps(reg_doc, indent=2) + "\n")

    density_rows = []
    for ds_id, (grid, dens) in result.densities.items():
        density_rows += [[ds_id, g, d] for g, d in zip(grid.tolist(), dens.tolist())]
    _write_csv(out / "densities.csv", DENSITY_HEADER, density_rows)

    meta = {
        "tool": "windbench",
        "version": __version__,
        "generated_at_utc": datetime.now(timezone.utc).isoformat(),
        "log_base": result.log_base,
        "config": config_echo,
        "datasets": {
            o.id: {
                "role": o.role,
                "n_points": o.n_points,
                "n_dropped": o.n_dropped,
                "kde_bandwidth": o.bandwidth or None,
                "error": o.error,
            } for o in result.outcomes
        },
        "regression_note": result.regression_note,
    }
    (out / "run_meta.json").write_text(json.dumps(meta, indent=2) + "\n")

    for name in ("metrics.csv", "metrics.json", "power.csv", "power.json",
                 "points.csv", "regression.csv", "regression.json",
                 "densities.csv", "run_meta.json"):
        written.append(out / name)
    return written
