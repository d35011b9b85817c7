"""Turn sweep CSV rows into MI line charts with error bars.

The CSV is the only interface to the simulation side: rows come in with the
fixed schema below, one aggregate per (design, n_r, n_rf, snr_db) cell. A
chart puts one of the two sweep axes on x, demands that every other
dimension is pinned to a single value, and draws one errorbar series per
design. MI values pass through untouched: what the CSV says is what the
figure shows.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np
from matplotlib.figure import Figure

CSV_COLUMNS = (
    "design",
    "n_r",
    "n_rf",
    "snr_db",
    "bits",
    "trials",
    "mi_mean",
    "mi_std",
    "mi_sem",
)
X_AXIS_CHOICES = ("snr_db", "n_rf")
# sweep dimensions that must collapse to one value unless they are the x axis
DIMENSION_COLUMNS = ("n_r", "n_rf", "snr_db", "bits")

_INT_COLUMNS = ("n_r", "n_rf", "bits", "trials")
_FLOAT_COLUMNS = ("snr_db", "mi_mean", "mi_std", "mi_sem")
_AXIS_LABELS = {"snr_db": "SNR (dB)", "n_rf": "RF chains"}


class PlotDataError(ValueError):
    """The CSV (or the requested slice of it) cannot be plotted."""


@dataclass(frozen=True)
class PlotSpec:
    """One chart request: data source, x axis, pinned dimensions, output."""

    csv_path: Path
    x_axis: str
    out_path: Path
    fixed: Mapping[str, str] = field(default_factory=dict)
    bound: float | None = None

    def __post_init__(self) -> None:
        if self.x_axis not in X_AXIS_CHOICES:
            raise PlotDataError(
                f"x axis must be one of {X_AXIS_CHOICES}, got {self.x_axis!r}"
            )
        if self.x_axis in self.fixed:
            raise PlotDataError(f"cannot fix the x axis column {self.x_axis!r}")
        for key in self.fixed:
            if key not in CSV_COLUMNS:
                raise PlotDataError(f"unknown column {key!r} in filter")


def load_rows(csv_path: Path) -> list[dict]:
    """Read and type a sweep CSV; the header must match the schema exactly."""
    with open(csv_path, newline="") as handle:
        reader = csv.DictReader(handle)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise PlotDataError(
                f"{csv_path}: header {reader.fieldnames} does not match the "
                f"sweep schema {list(CSV_COLUMNS)}"
            )
        rows = []
        for lineno, raw in enumerate(reader, start=2):
            if any(value is None or value == "" for value in raw.values()):
                raise PlotDataError(f"{csv_path}: short row at line {lineno}")
            row: dict = {"design": raw["design"]}
            try:
                for col in _INT_COLUMNS:
                    row[col] = int(raw[col])
                for col in _FLOAT_COLUMNS:
                    row[col] = float(raw[col])
            except ValueError:
                raise PlotDataError(
                    f"{csv_path}: non-numeric value at line {lineno}"
                ) from None
            rows.append(row)
    if not rows:
        raise PlotDataError(f"{csv_path}: no data rows")
    return rows


def _matches(row: dict, key: str, value: str) -> bool:
    if key == "design":
        return row[key] == value
    try:
        return float(row[key]) == float(value)
    except ValueError:
        raise PlotDataError(
            f"filter {key}={value!r}: expected a numeric value"
        ) from None


def series_for(spec: PlotSpec) -> dict[str, dict[str, np.ndarray]]:
    """Resolve the spec into per-design series, untouched CSV values.

    Returns, per design tag, arrays x, mi_mean, mi_sem sorted by x. Raises
    PlotDataError when the filter matches nothing, a non-axis dimension
    still spans several values, or a design has duplicate x entries.

    One exemption: with n_rf on the x axis, n_r may vary as long as each
    chain count maps to a single array size — that is the fixed-ratio sweep,
    where the two grow in lockstep.
    """
    rows = load_rows(spec.csv_path)
    for key, value in spec.fixed.items():
        rows = [row for row in rows if _matches(row, key, value)]
    if not rows:
        pinned = ", ".join(f"{k}={v}" for k, v in spec.fixed.items()) or "(none)"
        raise PlotDataError(f"filter matched no rows: {pinned}")

    for col in DIMENSION_COLUMNS:
        if col == spec.x_axis:
            continue
        if col == "n_r" and spec.x_axis == "n_rf":
            by_x: dict = {}
            for row in rows:
                by_x.setdefault(row["n_rf"], set()).add(row["n_r"])
            clashes = {x: sorted(v) for x, v in by_x.items() if len(v) > 1}
            if clashes:
                raise PlotDataError(
                    f"several array sizes share a chain count {clashes}; "
                    f"pin one with --fix n_r=<value>"
                )
            continue
        values = sorted({row[col] for row in rows})
        if len(values) > 1:
            raise PlotDataError(
                f"column {col!r} spans several values {values}; pin it with "
                f"--fix {col}=<value>"
            )

    series: dict[str, dict[str, np.ndarray]] = {}
    for design in sorted({row["design"] for row in rows}):
        picked = sorted(
            (row for row in rows if row["design"] == design),
            key=lambda row: row[spec.x_axis],
        )
        xs = [row[spec.x_axis] for row in picked]
        if len(set(xs)) != len(xs):
            raise PlotDataError(
                f"design {design!r} has duplicate {spec.x_axis} entries"
            )
        series[design] = {
            "x": np.array(xs),
            "mi_mean": np.array([row["mi_mean"] for row in picked]),
            "mi_sem": np.array([row["mi_sem"] for row in picked]),
        }
    return series


def render(spec: PlotSpec) -> Figure:
    """Draw the chart and write it to spec.out_path.

    One errorbar line per design (error bars are the standard error of the
    mean), optional horizontal rate-cap overlay, fixed style and dpi so a
    given input always produces the same bytes.
    """
    series = series_for(spec)
    fig = Figure(figsize=(7.0, 4.5))
    ax = fig.subplots()
    for design, data in series.items():
        ax.errorbar(
            data["x"],
            data["mi_mean"],
            yerr=data["mi_sem"],
            marker="o",
            markersize=4,
            capsize=3,
            label=design,
        )
    if spec.bound is not None:
        ax.axhline(
            spec.bound, color="black", linestyle="--", linewidth=1.0,
            label="saturation cap",
        )
    ax.set_xlabel(_AXIS_LABELS[spec.x_axis])
    ax.set_ylabel("mutual information (bits)")
    pinned = ", ".join(f"{k}={v}" for k, v in spec.fixed.items())
    if pinned:
        ax.set_title(pinned, fontsize=10)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(
        spec.out_path, dpi=150, metadata={"Software": "quantmimo-plot"}
    )
    return fig
