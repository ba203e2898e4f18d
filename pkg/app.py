"""Space Structure Matching report viewer.

Plots experiment and correlation reports written by the command line tool.
"""

from pathlib import Path

import pandas as pd
import streamlit as st

from config import APP_TITLE, APP_VERSION, METHOD_TAG
from services.evaluate import REPORT_COLUMNS, SUMMARY_COLUMNS, summarize_report, summary_path_for
from ui import (
    MODERN_CSS,
    render_status_badge, render_stat_card, render_lift_card,
    create_map_curve, create_rho_histogram, create_fraction_gauge,
)
from utils import format_map, format_rho, format_fraction, direction_display_name


st.set_page_config(
    page_title=APP_TITLE,
    page_icon=None,
    layout="wide",
    initial_sidebar_state="expanded"
)

st.markdown(MODERN_CSS, unsafe_allow_html=True)


def _read_csv(source) -> pd.DataFrame:
    if source is None:
        return pd.DataFrame()
    if isinstance(source, (str, Path)) and not Path(source).exists():
        return pd.DataFrame()
    return pd.read_csv(source)


@st.cache_data(show_spinner=False)
def load_report(source) -> pd.DataFrame:
    """Load a per-cell experiment report."""
    try:
        frame = _read_csv(source)
    except Exception as e:
        st.error(f"Failed to read report: {type(e).__name__}: {e}")
        return pd.DataFrame(columns=REPORT_COLUMNS)
    missing = [c for c in REPORT_COLUMNS if c not in frame.columns]
    if not frame.empty and missing:
        st.error(f"Report is missing columns: {', '.join(missing)}")
        return pd.DataFrame(columns=REPORT_COLUMNS)
    return frame


@st.cache_data(show_spinner=False)
def load_summary(source) -> pd.DataFrame:
    """Load a per-train-size summary."""
    try:
        return _read_csv(source)
    except Exception as e:
        st.error(f"Failed to read summary: {type(e).__name__}: {e}")
        return pd.DataFrame(columns=SUMMARY_COLUMNS)


@st.cache_data(show_spinner=False)
def load_correlation(source) -> pd.DataFrame:
    """Load a correlation harness report."""
    try:
        return _read_csv(source)
    except Exception as e:
        st.error(f"Failed to read correlation report: {type(e).__name__}: {e}")
        return pd.DataFrame()


def render_experiment_tab(report: pd.DataFrame, summary: pd.DataFrame) -> None:
    st.header("Retrieval Experiment")

    if report.empty:
        st.info("Load an experiment report from the sidebar.")
        return

    if summary.empty:
        summary = summarize_report(report)

    ok = report[report["status"] == "ok"]
    largest = int(report["train_size"].max())
    at_largest = ok[(ok["train_size"] == largest) & (ok["direction"] == "average")]

    col1, col2, col3, col4 = st.columns(4)
    with col1:
        st.markdown(render_stat_card(
            "Cells",
            str(report[["train_size", "seed"]].drop_duplicates().shape[0]),
            f"{report['seed'].nunique()} seeds",
        ), unsafe_allow_html=True)
    with col2:
        st.markdown(render_stat_card(
            "Largest train size",
            str(largest),
            f"{report['train_size'].nunique()} sizes",
            "#8b5cf6",
        ), unsafe_allow_html=True)
    with col3:
        st.markdown(render_stat_card(
            "Average mAP",
            format_map(at_largest["map"].mean() if not at_largest.empty else None),
            f"at {largest} pairs",
            "#06b6d4",
        ), unsafe_allow_html=True)
    with col4:
        if not at_largest.empty:
            st.markdown(render_lift_card(
                float(at_largest["map"].mean()),
                float(at_largest["baseline"].mean()),
            ), unsafe_allow_html=True)

    st.divider()

    directions = sorted(summary["direction"].unique()) if not summary.empty else []
    shown = st.multiselect(
        "Directions",
        options=directions,
        default=[d for d in directions if d != "average"] or directions,
        format_func=direction_display_name,
    )
    curve = summary[summary["direction"].isin(shown)]
    baseline = ok[ok["direction"].isin(shown)].groupby("direction")["baseline"].mean().to_dict()
    st.plotly_chart(create_map_curve(curve, baseline), use_container_width=True)

    for direction in shown:
        last = curve[curve["direction"] == direction].sort_values("train_size").tail(1)
        if last.empty:
            continue
        row = last.iloc[0]
        st.markdown(
            f'<div class="direction-{direction}">{direction_display_name(direction)}: '
            f'mAP {format_map(row["map_mean"])} +/- {format_map(row["map_std"])} '
            f'at {int(row["train_size"])} pairs</div>',
            unsafe_allow_html=True,
        )

    skipped = report[report["status"] != "ok"]
    if not skipped.empty:
        st.markdown(render_status_badge("empty_test", f"{len(skipped)} rows without test objects"),
                    unsafe_allow_html=True)

    with st.expander("Per-cell records"):
        st.dataframe(report, use_container_width=True, hide_index=True)


def render_correlation_tab(correlation: pd.DataFrame) -> None:
    st.header("Structure Correlation")

    if correlation.empty or "record" not in correlation.columns:
        st.info("Load a correlation report from the sidebar.")
        return

    trials = correlation[correlation["record"] == "trial"]
    summary = correlation[correlation["record"] == "summary"]
    fraction = float(summary["fraction_positive"].iloc[0]) if not summary.empty else float(
        (trials["empirical_rho"] > 0).mean()
    )
    analytic = None
    if not summary.empty and pd.notna(summary["analytic_rho"].iloc[0]):
        analytic = float(summary["analytic_rho"].iloc[0])

    col1, col2, col3 = st.columns(3)
    with col1:
        st.markdown(render_stat_card("Trials", str(len(trials))), unsafe_allow_html=True)
    with col2:
        st.markdown(render_stat_card(
            "Mean empirical rho",
            format_rho(float(trials["empirical_rho"].mean())),
            f"{format_fraction(fraction)} positive",
            "#8b5cf6",
        ), unsafe_allow_html=True)
    with col3:
        st.markdown(render_stat_card(
            "Analytic rho",
            format_rho(analytic),
            "linear mapping only",
            "#10b981",
        ), unsafe_allow_html=True)

    st.divider()

    col1, col2 = st.columns([2, 1])
    with col1:
        st.plotly_chart(
            create_rho_histogram(trials["empirical_rho"].tolist(), analytic),
            use_container_width=True,
        )
    with col2:
        st.plotly_chart(create_fraction_gauge(fraction), use_container_width=True)


def main():
    """Main application entry point."""

    st.title(APP_TITLE)
    st.caption(f"v{APP_VERSION} · method {METHOD_TAG}")

    with st.sidebar:
        st.header("Reports")

        report_path = st.text_input("Experiment report", value="report.csv")
        report_upload = st.file_uploader("or upload a report", type=["csv"])

        st.divider()

        correlation_path = st.text_input("Correlation report", value="correlation.csv")
        correlation_upload = st.file_uploader("or upload a correlation report", type=["csv"])

        st.divider()

        if st.button("Reload", use_container_width=True):
            st.cache_data.clear()
            st.rerun()

    report = load_report(report_upload or report_path)
    summary = pd.DataFrame(columns=SUMMARY_COLUMNS)
    if report_upload is None and report_path:
        summary = load_summary(str(summary_path_for(report_path)))
    correlation = load_correlation(correlation_upload or correlation_path)

    tabs = st.tabs(["Experiment", "Correlation"])

    with tabs[0]:
        render_experiment_tab(report, summary)

    with tabs[1]:
        render_correlation_tab(correlation)


if __name__ == "__main__":
    main()
