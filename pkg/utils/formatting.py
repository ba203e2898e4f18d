"""Formatting utilities."""

import math
from typing import Optional


def format_map(value: Optional[float], decimals: int = 4) -> str:
    """Format a mAP score; missing values (empty test split) show as n/a."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "n/a"
    return f"{value:.{decimals}f}"


def format_rho(value: Optional[float]) -> str:
    """Format a correlation coefficient with explicit sign."""
    if value is None or math.isnan(value):
        return "n/a"
    return f"{value:+.4f}"


def format_fraction(value: float, decimals: int = 1) -> str:
    """Format a fraction in [0, 1] as a percentage."""
    if value is None:
        return "0%"
    return f"{value * 100:.{decimals}f}%"


def format_duration(seconds: float) -> str:
    """Format elapsed wall time."""
    if seconds is None:
        return "0s"

    if seconds >= 60:
        return f"{int(seconds // 60)}m {seconds % 60:.0f}s"
    elif seconds >= 1:
        return f"{seconds:.1f}s"
    else:
        return f"{seconds * 1000:.0f}ms"


def format_shape(rows: int, cols: int) -> str:
    """Format a matrix shape as 'rows x cols'."""
    return f"{rows} x {cols}"


def direction_display_name(direction: str) -> str:
    """Convert a report direction to a display name."""
    names = {
        "a_to_b": "Image query (A -> B)",
        "b_to_a": "Text query (B -> A)",
        "average": "Average",
    }

    return names.get(direction, direction.replace("_", " ").title())
