"""HTML components for report display."""

from typing import Optional

from .styles import THEME

STATUS_STYLES = {
    'ok': ('OK', '#10b981'),
    'empty_test': ('Empty test', '#f59e0b'),
}
UNKNOWN_STATUS = ('Unknown', '#6b7280')

LIFT_GOOD = '#10b981'
LIFT_MARGINAL = '#f59e0b'
LIFT_NONE = '#ef4444'
LIFT_GOOD_MARGIN = 0.05


def _style(**props: str) -> str:
    return ";".join(f"{name.replace('_', '-')}:{value}" for name, value in props.items())


def _tint(hex_color: str, alpha: float = 0.15) -> str:
    r, g, b = (int(hex_color[i:i + 2], 16) for i in (1, 3, 5))
    return f"rgba({r},{g},{b},{alpha})"


def render_status_badge(status: str, label: Optional[str] = None) -> str:
    """Pill badge for a report row status ('ok', 'empty_test')."""
    text, color = STATUS_STYLES.get(status.lower(), UNKNOWN_STATUS)
    style = _style(
        display="inline-block", padding="4px 12px", border_radius="9999px",
        background=_tint(color), color=color, font_family=THEME['font'],
        font_size="0.75rem",
    )
    return f'<span style="{style}">{label or text}</span>'


def render_stat_card(
    title: str,
    value: str,
    subtitle: Optional[str] = None,
    color: str = THEME['accent'],
) -> str:
    card = _style(
        background=THEME['panel'], border=f"1px solid {THEME['border']}",
        border_radius="12px", padding="20px", text_align="center",
        font_family=THEME['font'],
    )
    parts = [
        f'<div style="{_style(color=THEME["text_secondary"], font_size="0.75rem", text_transform="uppercase")}">{title}</div>',
        f'<div style="{_style(color=color, font_size="1.5rem", font_weight="700")}">{value}</div>',
    ]
    if subtitle:
        parts.append(f'<div style="{_style(color=THEME["muted"], font_size="0.75rem")}">{subtitle}</div>')
    return f'<div style="{card}">{"".join(parts)}</div>'


def render_lift_card(map_value: float, baseline: float) -> str:
    """mAP minus the random baseline, green above a clear margin and red at or below zero."""
    lift = map_value - baseline
    if lift > LIFT_GOOD_MARGIN:
        color = LIFT_GOOD
    elif lift > 0:
        color = LIFT_MARGINAL
    else:
        color = LIFT_NONE

    return render_stat_card(
        "Lift over random",
        f"{lift:+.4f}",
        f"mAP {map_value:.4f} vs baseline {baseline:.4f}",
        color,
    )
