#!/usr/bin/env python3
"""Reproduce the ten-model case-study skill regressions from frozen tables.

Writes the case-study metric and point-count tables to a work directory and
fits each metric against log10 of the point count, printing the same table
the `windbench regress` command emits. The reference dataset row carries
mean and top-speed values but no distances, so the distance fits use ten
datasets and the top-speed fit uses eleven.
"""
import argparse
import sys
from pathlib import Path

from windbench.cli import main as windbench_main

MODELS = [
    # id, points, mean, top-100 mean, js, w1
    ("NCC-LR", 163, 5.80, 28.94, 0.165, 0.005),
    ("NCC-HR", 661, 5.84, 31.77, 0.167, 0.005),
    ("MPI-LR", 222, 5.92, 32.84, 0.152, 0.009),
    ("MPI-HR", 909, 5.05, 34.91, 0.069, 0.004),
    ("MOHC-LR", 347, 4.50, 31.34, 0.083, 0.003),
    ("MOHC-HR", 1688, 4.55, 33.19, 0.067, 0.002),
    ("JAP", 394, 3.37, 28.45, 0.196, 0.007),
    ("IPSL", 247, 4.56, 32.91, 0.086, 0.002),
    ("EC-EARTH", 1586, 5.54, 38.00, 0.126, 0.004),
    ("CMCC", 661, 4.32, 31.95, 0.076, 0.005),
]
REFERENCE = ("ERA5", 12506, 4.58, 35.00, None, None)


def write_tables(workdir: Path) -> tuple[Path, Path]:
    workdir.mkdir(parents=True, exist_ok=True)
    metrics = workdir / "case_metrics.csv"
    points = workdir / "case_points.csv"
    m_lines = ["id,mean,top_k_mean,js,w1"]
    p_lines = ["id,points"]
    for mid, pts, mean, topk, js, w1 in MODELS + [REFERENCE]:
        js_cell = "" if js is None else js
        w1_cell = "" if w1 is None else w1
        m_lines.append(f"{mid},{mean},{topk},{js_cell},{w1_cell}")
        p_lines.append(f"{mid},{pts}")
    metrics.write_text("\n".join(m_lines) + "\n")
    points.write_text("\n".join(p_lines) + "\n")
    return metrics, points


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("workdir", nargs="?", default="case_study")
    parser.add_argument("--log-base", choices=("natural", "base10"),
                        default="base10")
    args = parser.parse_args()
    metrics, points = write_tables(Path(args.workdir))
    print(f"tables written to {args.workdir}")
    return windbench_main(["regress", "--metrics", str(metrics),
                           "--points", str(points),
                           "--log-base", args.log_base])


if __name__ == "__main__":
    sys.exit(main())
