"""UI components, charts, and styles."""

from .styles import MODERN_CSS
from .components import (
    render_status_badge,
    render_stat_card,
    render_lift_card,
)
from .charts import (
    create_map_curve,
    create_rho_histogram,
    create_fraction_gauge,
    CHART_COLORS,
)

__all__ = [
    'MODERN_CSS',
    'render_status_badge',
    'render_stat_card',
    'render_lift_card',
    'create_map_curve',
    'create_rho_histogram',
    'create_fraction_gauge',
    'CHART_COLORS',
]
