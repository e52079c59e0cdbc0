"""Render SVG charts from a completed run directory."""
from __future__ import annotations

import csv
import json
from pathlib import Path

from .svgcharts import bar_chart, kde_chart, scatter_chart

REQUIRED = ("metrics.csv", "power.csv", "points.csv", "regression.csv",
            "densities.csv", "run_meta.json")
CHART_FILES = ("kde_curves.svg", "metric_scatter.svg", "relative_power.svg")


class ReportError(ValueError):
    """Run directory is missing artifacts needed for the report."""


def _read_csv(path: Path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def render_report(run_dir) -> list[Path]:
    """Write the three report charts into the run directory."""
    run = Path(run_dir)
    missing = [name for name in REQUIRED if not (run / name).is_file()]
    if missing:
        raise ReportError(f"missing run artifacts in {run}: {', '.join(missing)}")

    meta = json.loads((run / "run_meta.json").read_text())
    log_base = meta.get("log_base", "base10")

    densities: dict[str, tuple[list[float], list[float]]] = {}
    for row in _read_csv(run / "densities.csv"):
        xs, ys = densities.setdefault(row["source_id"], ([], []))
        xs.append(float(row["speed_ms"]))
        ys.append(float(row["density"]))

    points = {row["source_id"]: float(row["points"])
              for row in _read_csv(run / "points.csv")}
    panels: dict[str, list[tuple[float, float, str]]] = {}
    for metric in ("js", "w1", "top_k_mean"):
        rows = []
        for row in _read_csv(run / "metrics.csv"):
            if row[metric] == "" or row["source_id"] not in points:
                continue
            rows.append((points[row["source_id"]], float(row[metric]),
                         row["source_id"]))
        if rows:
            panels[metric] = rows
    fits: dict[str, tuple[float, float] | None] = {m: None for m in panels}
    for row in _read_csv(run / "regression.csv"):
        if row["metric"] in fits:
            fits[row["metric"]] = (float(row["intercept"]), float(row["slope"]))

    bars = [(row["source_id"], float(row["relative_power_pct"]),
             row["relative_power_pct"])
            for row in _read_csv(run / "power.csv")
            if row["relative_power_pct"] != ""]

    if not densities or not bars:
        raise ReportError(f"run artifacts in {run} contain no successful datasets")

    out = []
    kde_chart(densities, run / "kde_curves.svg")
    scatter_chart(panels, fits, log_base, run / "metric_scatter.svg")
    bar_chart(bars, run / "relative_power.svg")
    for name in CHART_FILES:
        out.append(run / name)
    return out
