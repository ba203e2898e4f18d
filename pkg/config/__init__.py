"""Application configuration."""

from .settings import (
    APP_VERSION,
    APP_TITLE,
    APP_ICON,
    METHOD_TAG,
    LOG_FORMAT,
    DEFAULT_DIRECTION,
    DEFAULT_METRIC,
    DEFAULT_LAMBDA,
    DEFAULT_GAMMA,
    DEFAULT_TRAIN_SIZES,
    DEFAULT_SEEDS,
    DEFAULT_CORRELATION_RUN,
    SIF_A,
    DIRECTION_COLORS,
)

__all__ = [
    'APP_VERSION',
    'APP_TITLE',
    'APP_ICON',
    'METHOD_TAG',
    'LOG_FORMAT',
    'DEFAULT_DIRECTION',
    'DEFAULT_METRIC',
    'DEFAULT_LAMBDA',
    'DEFAULT_GAMMA',
    'DEFAULT_TRAIN_SIZES',
    'DEFAULT_SEEDS',
    'DEFAULT_CORRELATION_RUN',
    'SIF_A',
    'DIRECTION_COLORS',
]
