"""CSS styling for the report viewer."""

from typing import Dict, Optional

from config.settings import DIRECTION_COLORS

THEME = {
    'bg': '#0f172a',
    'panel': '#1e293b',
    'border': '#334155',
    'text': '#f8fafc',
    'text_secondary': '#94a3b8',
    'muted': '#64748b',
    'accent': '#3b82f6',
    'font': "'Inter', sans-serif",
}


def _direction_rules(colors: Dict[str, str]) -> str:
    # one left-border accent per report direction, used by the summary tables
    return "\n".join(
        f".direction-{name} {{ border-left: 3px solid {color}; padding-left: 8px; }}"
        for name, color in sorted(colors.items())
    )


def build_css(theme: Optional[Dict[str, str]] = None) -> str:
    """Render the viewer stylesheet for a palette (defaults to THEME)."""
    t = {**THEME, **(theme or {})}
    return f"""
<style>
.stApp {{
    background: {t['bg']};
    font-family: {t['font']};
}}

[data-testid="stSidebar"] {{
    background: {t['panel']};
    border-right: 1px solid {t['border']};
}}

.stApp h1, .stApp h2, .stApp h3 {{
    font-family: {t['font']} !important;
    color: {t['text']} !important;
}}

.stTabs [data-baseweb="tab"] {{
    color: {t['text_secondary']} !important;
    border-radius: 8px;
}}

.stTabs [aria-selected="true"] {{
    background: {t['accent']} !important;
    color: white !important;
}}

[data-testid="stDataFrame"] {{
    border: 1px solid {t['border']};
    border-radius: 12px;
}}

.stCaption {{
    color: {t['muted']} !important;
}}

{_direction_rules(DIRECTION_COLORS)}
</style>
"""


MODERN_CSS = build_css()
