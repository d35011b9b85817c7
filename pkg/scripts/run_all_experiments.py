#!/usr/bin/env python3
"""Reproduce every shipped sweep config into results/ (tens of minutes)."""

import sys
from pathlib import Path

from quantmimo.cli import main

ROOT = Path(__file__).resolve().parent.parent


def run() -> int:
    for config in sorted((ROOT / "configs").glob("*.cfg")):
        out = ROOT / "results" / f"{config.stem}.csv"
        print(f"== {config.stem} ==")
        code = main(["sweep", "--config", str(config), "--out", str(out)])
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    raise SystemExit(run())
