#!/usr/bin/env python3
"""Run a named sweep config from the repository's configs/ directory.

Usage: python scripts/run_sweep.py <name> [--set KEY=VALUE ...]
Writes results/<name>.csv at the repository root.
"""

import sys
from pathlib import Path

from quantmimo.cli import main

ROOT = Path(__file__).resolve().parent.parent


def run() -> int:
    if len(sys.argv) < 2:
        names = sorted(p.stem for p in (ROOT / "configs").glob("*.cfg"))
        print(f"usage: {sys.argv[0]} <name> [--set KEY=VALUE ...]", file=sys.stderr)
        print(f"available configs: {', '.join(names)}", file=sys.stderr)
        return 2
    name = sys.argv[1]
    config = ROOT / "configs" / f"{name}.cfg"
    out = ROOT / "results" / f"{name}.csv"
    return main(
        ["sweep", "--config", str(config), "--out", str(out), *sys.argv[2:]]
    )


if __name__ == "__main__":
    raise SystemExit(run())
