"""Regress metric tables against point-count tables (the `regress` command).

Inputs are two CSVs keyed by a shared id column: one with metric columns,
one with a `points` column. Exact duplicate rows are collapsed; the same id
with conflicting values is an error, as is any id present on only one side.
"""
from __future__ import annotations

import csv
from pathlib import Path

from .regression import DEFAULT_LOG_BASE, RegressionResult, loglinear_fit


class TableError(ValueError):
    """Malformed or inconsistent input tables."""


def _read_table(path: Path) -> tuple[list[str], dict[str, dict[str, str]]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise TableError(f"{path}: empty file")
        fields = list(reader.fieldnames)
        id_col = fields[0]
        rows: dict[str, dict[str, str]] = {}
        for row in reader:
            key = row[id_col]
            if key in rows:
                if rows[key] != row:
                    raise TableError(f"{path}: conflicting duplicate rows for id {key!r}")
                continue  # exact duplicates collapse
            rows[key] = row
    return fields, rows


def regress_tables(metrics_csv, points_csv,
                   log_base: str = DEFAULT_LOG_BASE) -> list[tuple[str, RegressionResult]]:
    """One fit per metric column, in column order; ids must match exactly."""
    m_fields, m_rows = _read_table(Path(metrics_csv))
    p_fields, p_rows = _read_table(Path(points_csv))
    if "points" not in p_fields:
        raise TableError(f"{points_csv}:missing a 'points' column")
    only_m = sorted(set(m_rows) - set(p_rows))
    only_p = sorted(set(p_rows) - set(m_rows))
    if only_m or only_p:
        raise TableError(
            "id mismatch between tables: "
            f"only in metrics: {only_m or '[]'}; only in points: {only_p or '[]'}")

    fits = []
    for metric in m_fields[1:]:
        pairs = []
        for key in sorted(m_rows):
            cell = m_rows[key][metric]
            if cell == "" or cell is None:
                continue
            try:
                pairs.append((float(p_rows[key]["points"]), float(cell)))
            except (TypeError, ValueError) as exc:
                raise TableError(
                    f"row {key!r}, column {metric!r}: not a number") from exc
        if not pairs:
            continue
        points, values = zip(*pairs)
        fits.append((metric, loglinear_fit(points, values, log_base=log_base)))
    return fits
