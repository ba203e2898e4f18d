"""Plotly chart generators for experiment and correlation reports."""

from typing import Dict, List, Optional

import pandas as pd
import plotly.graph_objects as go

from config.settings import DIRECTION_COLORS
from utils.formatting import direction_display_name

CHART_COLORS = {
    'primary': '#3b82f6',
    'secondary': '#8b5cf6',
    'accent': '#06b6d4',
    'text': '#f8fafc',
    'text_secondary': '#94a3b8',
    'bg': '#1e293b',
    'grid': 'rgba(71,85,105,0.3)',
    'positive': '#10b981',
    'negative': '#ef4444',
    'baseline': 'rgba(148, 163, 184, 0.7)',
}

FONT = dict(color=CHART_COLORS['text'], size=12, family='Inter')
AXIS_FONT = dict(color=CHART_COLORS['text_secondary'], size=11, family='Inter')


def _title(text: str) -> Dict:
    return dict(
        text=text,
        font=dict(color=CHART_COLORS['text'], size=16, family='Inter'),
        x=0.5,
    )


def create_map_curve(
    summary: pd.DataFrame,
    baseline: Optional[Dict[str, float]] = None,
) -> go.Figure:
    """
    Line chart of mean mAP against train size, one line per query direction.

    Args:
        summary: Summary frame with direction, train_size, map_mean, map_std
        baseline: Optional random-baseline mAP per direction, drawn dashed
    """
    fig = go.Figure()

    for direction, group in summary.groupby('direction', sort=True):
        group = group.sort_values('train_size')
        color = DIRECTION_COLORS.get(direction, CHART_COLORS['primary'])
        fig.add_trace(go.Scatter(
            x=group['train_size'].tolist(),
            y=group['map_mean'].tolist(),
            error_y=dict(type='data', array=group['map_std'].tolist(), visible=True),
            mode='lines+markers',
            name=direction_display_name(direction),
            line=dict(color=color, width=3),
            marker=dict(size=8, color=color, line=dict(width=1, color='white')),
            hovertemplate='<b>%{x} pairs</b><br>mAP: %{y:.4f}<extra></extra>'
        ))

    for direction, value in (baseline or {}).items():
        fig.add_hline(
            y=value,
            line_dash="dash",
            line_color=DIRECTION_COLORS.get(direction, CHART_COLORS['baseline']),
            annotation_text=f"random ({direction_display_name(direction)})",
            annotation_position="right",
            annotation_font=dict(color=CHART_COLORS['text_secondary'], size=10, family='Inter')
        )

    fig.update_layout(
        title=_title("mAP by Number of Matched Pairs"),
        xaxis=dict(
            title="Training pairs",
            title_font=AXIS_FONT,
            tickfont=AXIS_FONT,
            gridcolor=CHART_COLORS['grid'],
        ),
        yaxis=dict(
            title="mAP",
            title_font=AXIS_FONT,
            tickfont=AXIS_FONT,
            gridcolor=CHART_COLORS['grid'],
            rangemode='tozero',
        ),
        legend=dict(font=FONT),
        height=420,
        margin=dict(l=50, r=50, t=60, b=50),
        paper_bgcolor='rgba(0,0,0,0)',
        plot_bgcolor='rgba(0,0,0,0)',
    )

    return fig


def create_rho_histogram(rhos: List[float], analytic: Optional[float] = None) -> go.Figure:
    """Histogram of per-trial empirical correlations, with the analytic value marked."""
    fig = go.Figure(data=[
        go.Histogram(
            x=list(rhos),
            nbinsx=30,
            marker_color=CHART_COLORS['accent'],
            marker_line_color=CHART_COLORS['bg'],
            marker_line_width=1,
            hovertemplate='rho: %{x}<br>Trials: %{y}<extra></extra>'
        )
    ])

    fig.add_vline(x=0, line_color=CHART_COLORS['negative'], line_dash="dot")
    if analytic is not None:
        fig.add_vline(
            x=analytic,
            line_color=CHART_COLORS['positive'],
            line_dash="dash",
            annotation_text=f"analytic {analytic:.3f}",
            annotation_font=dict(color=CHART_COLORS['text_secondary'], size=10, family='Inter')
        )

    fig.update_layout(
        title=_title("Empirical Correlation per Trial"),
        xaxis=dict(
            title="Pearson rho of S_X and S_Y",
            title_font=AXIS_FONT,
            tickfont=AXIS_FONT,
            gridcolor=CHART_COLORS['grid'],
        ),
        yaxis=dict(
            title="Trials",
            title_font=AXIS_FONT,
            tickfont=AXIS_FONT,
            gridcolor=CHART_COLORS['grid'],
        ),
        height=380,
        margin=dict(l=50, r=30, t=60, b=50),
        paper_bgcolor='rgba(0,0,0,0)',
        plot_bgcolor='rgba(0,0,0,0)',
        showlegend=False,
    )

    return fig


def create_fraction_gauge(fraction: float) -> go.Figure:
    """Gauge of the share of trials with positive correlation."""
    percent = fraction * 100
    if percent >= 99:
        bar_color = CHART_COLORS['positive']
    elif percent >= 90:
        bar_color = '#f59e0b'
    else:
        bar_color = CHART_COLORS['negative']

    fig = go.Figure(go.Indicator(
        mode="gauge+number",
        value=percent,
        number=dict(suffix="%", font=dict(color=CHART_COLORS['text'], size=36, family='Inter')),
        gauge=dict(
            axis=dict(range=[0, 100], tickfont=AXIS_FONT),
            bar=dict(color=bar_color),
            bgcolor=CHART_COLORS['bg'],
            borderwidth=0,
        ),
        title=dict(text="Positive Trials", font=FONT),
    ))

    fig.update_layout(
        height=280,
        margin=dict(l=30, r=30, t=60, b=20),
        paper_bgcolor='rgba(0,0,0,0)',
    )

    return fig
