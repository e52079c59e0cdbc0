"""Command-line interface.

Subcommands: evaluate (full pipeline from a JSON config), regress (fit
metric tables against point counts), report (render SVG charts for a run
directory), selftest (run the built-in oracle suite). Exit codes: 0 ok,
1 runtime failure, 2 configuration/validation error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .pipeline import evaluate_run
from .report import ReportError, render_report
from .reporting import REGRESSION_HEADER, fmt, write_artifacts
from .selftest import run_selftest
from .tables import TableError, regress_tables

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="windbench",
        description="Evaluate gridded wind datasets against a reference dataset.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("evaluate", help="run the full evaluation pipeline")
    p_eval.add_argument("--config", required=True, help="run configuration JSON")

    p_reg = sub.add_parser("regress", help="fit metrics against log point counts")
    p_reg.add_argument("--metrics", required=True, help="CSV: id column + metric columns")
    p_reg.add_argument("--points", required=True, help="CSV: id column + points column")
    p_reg.add_argument("--log-base", choices=("natural", "base10"), default="base10")
    p_reg.add_argument("--out-dir", default=None,
                       help="write regression.csv/json here instead of stdout")

    p_rep = sub.add_parser("report", help="render SVG charts for a run directory")
    p_rep.add_argument("--run", required=True, help="completed run directory")

    sub.add_parser("selftest", help="run the built-in brute-force oracle suite")
    return parser


def cmd_evaluate(args) -> int:
    cfg = load_config(args.config)
    result = evaluate_run(cfg)
    config_echo = json.loads(Path(args.config).read_text())
    out_dir = cfg.resolve(cfg.output_dir)
    write_artifacts(result, out_dir, config_echo)
    for outcome in result.outcomes:
        if outcome.error:
            print(f"dataset {outcome.id}: FAILED: {outcome.error}", file=sys.stderr)
    print(f"wrote run artifacts to {out_dir}")
    return EXIT_RUNTIME if result.failed else EXIT_OK


def cmd_regress(args) -> int:
    fits = regress_tables(args.metrics, args.points, log_base=args.log_base)
    rows = [[metric, fit.intercept, fit.slope, fit.slope_std_error,
             100.0 * fit.r_squared, fit.p_value] for metric, fit in fits]
    csv_text = "\n".join([",".join(REGRESSION_HEADER)]
                         + [",".join(fmt(c) for c in row) for row in rows]) + "\n"
    if args.out_dir is None:
        sys.stdout.write(csv_text)
    else:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "regression.csv").write_text(csv_text)
        doc = {"log_base": args.log_base,
               "rows": [dict(zip(REGRESSION_HEADER,
                                 [row[0]] + [float(c) for c in row[1:]]))
                        for row in rows]}
        (out / "regression.json").write_text(json.dumps(doc, indent=2) + "\n")
        print(f"wrote regression tables to {out}")
    return EXIT_OK


def cmd_report(args) -> int:
    charts = render_report(args.run)
    print("wrote " + ", ".join(str(c) for c in charts))
    return EXIT_OK


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "evaluate":
            return cmd_evaluate(args)
        if args.command == "regress":
            return cmd_regress(args)
        if args.command == "report":
            return cmd_report(args)
        if args.command == "selftest":
            return EXIT_OK if run_selftest() else EXIT_RUNTIME
    except (ConfigError, TableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ReportError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
