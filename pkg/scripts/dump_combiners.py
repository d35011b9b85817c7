#!/usr/bin/env python3
"""Dump the combiner matrices of one seeded channel for inspection.

Usage: python scripts/dump_combiners.py <config-name> [--set KEY=VALUE ...]
Writes text matrices under results/combiners_<name>/.
"""

import sys
from pathlib import Path

from quantmimo.cli import main

ROOT = Path(__file__).resolve().parent.parent


def run() -> int:
    if len(sys.argv) < 2:
        print(f"usage: {sys.argv[0]} <config-name> [--set KEY=VALUE ...]",
              file=sys.stderr)
        return 2
    name = sys.argv[1]
    config = ROOT / "configs" / f"{name}.cfg"
    out = ROOT / "results" / f"combiners_{name}"
    return main(
        ["design", "--config", str(config), "--out", str(out), *sys.argv[2:]]
    )


if __name__ == "__main__":
    raise SystemExit(run())
