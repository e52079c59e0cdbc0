"""Command-line interface: `ncbridge convert --spec <json>`, `ncbridge inspect <file>`.

Exit codes: 0 ok, 1 conversion/read failure, 2 bad spec or usage.
"""
from __future__ import annotations

import argparse
import sys

from .convert import ConversionSpec, SpecError, convert, inspect_summary
from .reader import NcReadError
from .timecodec import CalendarError
from .wgrdout import WgrdWriteError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncbridge",
        description="Convert CF NetCDF wind archives into WGRD files.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_conv = sub.add_parser("convert", help="convert u/v (+ optional landmask)")
    p_conv.add_argument("--spec", required=True, help="conversion spec JSON")
    p_insp = sub.add_parser("inspect", help="summarize a NetCDF file")
    p_insp.add_argument("path")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "convert":
            spec = ConversionSpec.from_json(args.spec)
            for path in convert(spec):
                print(f"wrote {path}")
            return 0
        if args.command == "inspect":
            print(inspect_summary(args.path))
            return 0
    except (SpecError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NcReadError, CalendarError, WgrdWriteError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
