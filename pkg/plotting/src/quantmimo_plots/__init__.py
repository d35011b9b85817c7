"""Plotting companion for quantmimo sweep CSVs."""

from .render import (
    CSV_COLUMNS,
    DIMENSION_COLUMNS,
    PlotDataError,
    PlotSpec,
    X_AXIS_CHOICES,
    load_rows,
    render,
    series_for,
)

__all__ = [
    "CSV_COLUMNS",
    "DIMENSION_COLUMNS",
    "PlotDataError",
    "PlotSpec",
    "X_AXIS_CHOICES",
    "load_rows",
    "render",
    "series_for",
]
