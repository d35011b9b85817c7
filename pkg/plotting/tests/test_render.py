"""Data-slicing and rendering tests against synthetic and generated CSVs."""

import csv
from pathlib import Path

import numpy as np
import pytest

from quantmimo_plots import (
    PlotDataError,
    PlotSpec,
    load_rows,
    render,
    series_for,
)

FIXTURE = Path(__file__).parent / "data" / "design_ordering_sample.csv"
HEADER = "design,n_r,n_rf,snr_db,bits,trials,mi_mean,mi_std,mi_sem"


def _write_csv(path, rows):
    path.write_text("\n".join([HEADER, *rows]) + "\n")
    return path


def _spec(tmp_path, **kwargs):
    defaults = dict(
        csv_path=FIXTURE, x_axis="snr_db", out_path=tmp_path / "out.png"
    )
    defaults.update(kwargs)
    return PlotSpec(**defaults)


def test_plotspec_validation(tmp_path):
    with pytest.raises(PlotDataError):
        _spec(tmp_path, x_axis="bits")
    with pytest.raises(PlotDataError):
        _spec(tmp_path, fixed={"snr_db": "0"})
    with pytest.raises(PlotDataError):
        _spec(tmp_path, fixed={"mystery": "1"})


def test_load_rows_types_and_count():
    rows = load_rows(FIXTURE)
    assert len(rows) == 25
    assert {row["design"] for row in rows} == {
        "ARV", "ARV_TSAC", "GREEDY_MI", "SVD", "SVD_DFT"
    }
    first = rows[0]
    assert isinstance(first["n_r"], int)
    assert isinstance(first["snr_db"], float)
    assert isinstance(first["mi_mean"], float)


def test_load_rows_rejects_wrong_header(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("design,snr,mi\nSVD,0,1\n")
    with pytest.raises(PlotDataError):
        load_rows(bad)


def test_load_rows_rejects_short_and_non_numeric_rows(tmp_path):
    short = _write_csv(tmp_path / "short.csv", ["SVD,64,22,0,2,50,1.0,0.1"])
    with pytest.raises(PlotDataError):
        load_rows(short)
    garbled = _write_csv(
        tmp_path / "garbled.csv", ["SVD,64,22,zero,2,50,1.0,0.1,0.01"]
    )
    with pytest.raises(PlotDataError):
        load_rows(garbled)


def test_load_rows_rejects_empty_data(tmp_path):
    empty = _write_csv(tmp_path / "empty.csv", [])
    with pytest.raises(PlotDataError):
        load_rows(empty)


def test_series_values_equal_csv_text_exactly(tmp_path):
    series = series_for(_spec(tmp_path))
    with open(FIXTURE, newline="") as handle:
        raw = list(csv.DictReader(handle))
    for design, data in series.items():
        expected_rows = sorted(
            (r for r in raw if r["design"] == design),
            key=lambda r: float(r["snr_db"]),
        )
        np.testing.assert_array_equal(
            data["mi_mean"], [float(r["mi_mean"]) for r in expected_rows]
        )
        np.testing.assert_array_equal(
            data["mi_sem"], [float(r["mi_sem"]) for r in expected_rows]
        )
        np.testing.assert_array_equal(
            data["x"], [float(r["snr_db"]) for r in expected_rows]
        )


def test_series_sorted_by_x(tmp_path):
    shuffled = _write_csv(
        tmp_path / "shuffled.csv",
        [
            "SVD,8,4,10,2,3,3.0,0.1,0.05",
            "SVD,8,4,-10,2,3,1.0,0.1,0.05",
            "SVD,8,4,0,2,3,2.0,0.1,0.05",
        ],
    )
    series = series_for(_spec(tmp_path, csv_path=shuffled))
    np.testing.assert_array_equal(series["SVD"]["x"], [-10.0, 0.0, 10.0])
    np.testing.assert_array_equal(series["SVD"]["mi_mean"], [1.0, 2.0, 3.0])


def test_design_filter_subsets_series(tmp_path):
    series = series_for(_spec(tmp_path, fixed={"design": "SVD"}))
    assert list(series) == ["SVD"]


def test_numeric_filter_accepts_equivalent_literals(tmp_path):
    for literal in ("64", "64.0"):
        series = series_for(_spec(tmp_path, fixed={"n_r": literal}))
        assert len(series) == 5
    with pytest.raises(PlotDataError):
        series_for(_spec(tmp_path, fixed={"n_r": "lots"}))


def test_empty_filter_is_an_error(tmp_path):
    with pytest.raises(PlotDataError) as err:
        series_for(_spec(tmp_path, fixed={"design": "NOPE"}))
    assert "matched no rows" in str(err.value)


def test_unpinned_dimension_is_an_error(tmp_path):
    two_sizes = _write_csv(
        tmp_path / "two_sizes.csv",
        [
            "SVD,8,4,0,2,3,1.0,0.1,0.05",
            "SVD,16,4,0,2,3,2.0,0.1,0.05",
        ],
    )
    with pytest.raises(PlotDataError) as err:
        series_for(_spec(tmp_path, csv_path=two_sizes))
    assert "n_r" in str(err.value) and "--fix" in str(err.value)
    series = series_for(
        _spec(tmp_path, csv_path=two_sizes, fixed={"n_r": "16"})
    )
    np.testing.assert_array_equal(series["SVD"]["mi_mean"], [2.0])


def test_duplicate_x_is_an_error(tmp_path):
    doubled = _write_csv(
        tmp_path / "doubled.csv",
        [
            "SVD,8,4,0,2,3,1.0,0.1,0.05",
            "SVD,8,4,0,2,3,1.5,0.1,0.05",
        ],
    )
    with pytest.raises(PlotDataError) as err:
        series_for(_spec(tmp_path, csv_path=doubled))
    assert "duplicate" in str(err.value)


def test_chain_count_axis_allows_lockstep_array_size(tmp_path):
    # fixed-ratio sweep: n_r grows with n_rf, one value per chain count
    scaling = _write_csv(
        tmp_path / "scaling.csv",
        [
            "SVD_DFT,48,16,0,2,3,9.0,0.1,0.05",
            "SVD_DFT,96,32,0,2,3,13.0,0.1,0.05",
        ],
    )
    series = series_for(_spec(tmp_path, csv_path=scaling, x_axis="n_rf"))
    np.testing.assert_array_equal(series["SVD_DFT"]["x"], [16, 32])
    np.testing.assert_array_equal(series["SVD_DFT"]["mi_mean"], [9.0, 13.0])


def test_chain_count_axis_rejects_clashing_array_sizes(tmp_path):
    mixed = _write_csv(
        tmp_path / "mixed.csv",
        [
            "SVD_DFT,48,16,0,2,3,9.0,0.1,0.05",
            "SVD_DFT,96,16,0,2,3,10.0,0.1,0.05",
        ],
    )
    with pytest.raises(PlotDataError) as err:
        series_for(_spec(tmp_path, csv_path=mixed, x_axis="n_rf"))
    assert "n_r" in str(err.value)


def test_chain_count_axis_with_fixed_array(tmp_path):
    scaling = _write_csv(
        tmp_path / "scaling.csv",
        [
            "SVD_DFT,96,16,0,2,3,9.0,0.1,0.05",
            "SVD_DFT,96,32,0,2,3,13.0,0.1,0.05",
            "SVD,96,16,0,2,3,8.0,0.1,0.05",
            "SVD,96,32,0,2,3,8.5,0.1,0.05",
        ],
    )
    series = series_for(_spec(tmp_path, csv_path=scaling, x_axis="n_rf"))
    assert set(series) == {"SVD_DFT", "SVD"}
    np.testing.assert_array_equal(series["SVD_DFT"]["x"], [16, 32])


def test_render_draws_one_series_per_design(tmp_path):
    spec = _spec(tmp_path, bound=24.714138704776698)
    fig = render(spec)
    ax = fig.axes[0]
    assert [c.get_label() for c in ax.containers] == [
        "ARV", "ARV_TSAC", "GREEDY_MI", "SVD", "SVD_DFT"
    ]
    assert spec.out_path.exists()
    assert spec.out_path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_render_line_data_matches_series(tmp_path):
    spec = _spec(tmp_path)
    fig = render(spec)
    series = series_for(spec)
    ax = fig.axes[0]
    for container in ax.containers:
        data = series[container.get_label()]
        line = container[0]
        np.testing.assert_array_equal(line.get_xdata(), data["x"])
        np.testing.assert_array_equal(line.get_ydata(), data["mi_mean"])


def test_render_overlay_and_labels(tmp_path):
    bound = 24.714138704776698
    fig = render(_spec(tmp_path, bound=bound, fixed={"n_r": "64"}))
    ax = fig.axes[0]
    overlay = [
        line for line in ax.lines if line.get_label() == "saturation cap"
    ]
    assert len(overlay) == 1
    np.testing.assert_array_equal(overlay[0].get_ydata(), [bound, bound])
    assert ax.get_xlabel() == "SNR (dB)"
    assert ax.get_ylabel() == "mutual information (bits)"
    assert ax.get_title() == "n_r=64"
    legend_texts = [t.get_text() for t in ax.get_legend().get_texts()]
    assert "saturation cap" in legend_texts
    assert "SVD_DFT" in legend_texts


def test_render_without_bound_has_no_overlay(tmp_path):
    fig = render(_spec(tmp_path))
    ax = fig.axes[0]
    assert not [
        line for line in ax.lines if line.get_label() == "saturation cap"
    ]


def test_render_is_byte_deterministic(tmp_path):
    first = _spec(tmp_path, out_path=tmp_path / "a.png", bound=24.71)
    second = _spec(tmp_path, out_path=tmp_path / "b.png", bound=24.71)
    render(first)
    render(second)
    assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()
