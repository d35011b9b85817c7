"""Command-line front end: one subcommand-free plotter for sweep CSVs."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import PlotDataError, PlotSpec, X_AXIS_CHOICES, render


def _parse_fixes(items: list[str]) -> dict[str, str]:
    fixed: dict[str, str] = {}
    for item in items:
        key, sep, value = item.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise PlotDataError(f"--fix {item!r}: expected key=value")
        if key in fixed:
            raise PlotDataError(f"--fix {item!r}: duplicate key {key!r}")
        fixed[key] = value
    return fixed


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantmimo-plot",
        description="Render a sweep CSV as MI lines with error bars",
    )
    parser.add_argument("--csv", required=True, type=Path, help="sweep CSV path")
    parser.add_argument(
        "--x", required=True, choices=X_AXIS_CHOICES, help="x-axis column"
    )
    parser.add_argument(
        "--fix",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="pin a non-axis dimension (repeatable)",
    )
    parser.add_argument("--out", required=True, type=Path, help="output image path")
    parser.add_argument(
        "--bound",
        type=float,
        default=None,
        help="overlay a horizontal rate cap at this many bits "
        "(see `quantmimo validate` for the closed-form values)",
    )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        spec = PlotSpec(
            csv_path=args.csv,
            x_axis=args.x,
            out_path=args.out,
            fixed=_parse_fixes(args.fix),
            bound=args.bound,
        )
        render(spec)
    except PlotDataError as exc:
        print(f"plot error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"fatal: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    sys.exit(main())
