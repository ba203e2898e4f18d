"""Dashboard figures built from report frames."""

import pandas as pd
import pytest

from ui.charts import create_fraction_gauge, create_map_curve, create_rho_histogram


@pytest.fixture
def summary():
    rows = []
    for direction in ("a_to_b", "b_to_a", "average"):
        for size, mean in ((6, 0.2), (10, 0.3)):
            rows.append({
                "method": "SSM", "direction": direction, "train_size": size,
                "map_mean": mean, "map_std": 0.01,
            })
    return pd.DataFrame(rows)


def test_map_curve_one_line_per_direction(summary):
    fig = create_map_curve(summary)
    assert len(fig.data) == 3
    assert list(fig.data[0].x) == [6, 10]


def test_map_curve_baselines(summary):
    fig = create_map_curve(summary, baseline={"average": 0.12})
    assert len(fig.layout.shapes) == 1
    assert fig.layout.shapes[0].y0 == 0.12


def test_rho_histogram_marks_analytic_value():
    fig = create_rho_histogram([0.5, 0.6, 0.7], analytic=0.6)
    assert len(fig.data) == 1
    assert len(fig.layout.shapes) == 2


def test_rho_histogram_without_analytic_value():
    fig = create_rho_histogram([0.5, 0.6])
    assert len(fig.layout.shapes) == 1


def test_fraction_gauge():
    fig = create_fraction_gauge(0.97)
    assert fig.data[0].value == pytest.approx(97.0)
