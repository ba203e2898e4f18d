"""Formatting helpers and the shared exception hierarchy."""

from .formatting import (
    format_map,
    format_rho,
    format_fraction,
    format_duration,
    format_shape,
    direction_display_name,
)

__all__ = [
    'format_map',
    'format_rho',
    'format_fraction',
    'format_duration',
    'format_shape',
    'direction_display_name',
]
