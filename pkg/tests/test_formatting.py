import math

from utils.formatting import (
    direction_display_name,
    format_duration,
    format_fraction,
    format_map,
    format_rho,
    format_shape,
)


def test_format_map():
    assert format_map(0.123456) == "0.1235"
    assert format_map(float("nan")) == "n/a"
    assert format_map(None) == "n/a"


def test_format_rho_is_signed():
    assert format_rho(0.5) == "+0.5000"
    assert format_rho(-0.25) == "-0.2500"
    assert format_rho(math.nan) == "n/a"


def test_format_fraction():
    assert format_fraction(0.99) == "99.0%"
    assert format_fraction(1.0, decimals=0) == "100%"


def test_format_duration():
    assert format_duration(0.25) == "250ms"
    assert format_duration(2.5) == "2.5s"
    assert format_duration(125) == "2m 5s"


def test_format_shape():
    assert format_shape(300, 64) == "300 x 64"


def test_direction_names():
    assert direction_display_name("average") == "Average"
    assert direction_display_name("b_to_a") == "Text query (B -> A)"
    assert direction_display_name("other_side") == "Other Side"
