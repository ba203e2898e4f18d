from ui.components import render_lift_card, render_stat_card, render_status_badge
from ui.styles import MODERN_CSS, build_css


def test_status_badge_labels():
    assert ">OK<" in render_status_badge("ok")
    assert ">Empty test<" in render_status_badge("EMPTY_TEST")
    assert ">Unknown<" in render_status_badge("failed")
    assert ">3 skipped<" in render_status_badge("empty_test", "3 skipped")


def test_stat_card_subtitle_is_optional():
    assert "0.4100" in render_stat_card("mAP", "0.4100")
    assert "10 seeds" in render_stat_card("mAP", "0.4100", "10 seeds")
    assert "10 seeds" not in render_stat_card("mAP", "0.4100")


def test_lift_card_colors_by_margin():
    assert "#10b981" in render_lift_card(0.40, 0.10)
    assert "#f59e0b" in render_lift_card(0.12, 0.10)
    assert "#ef4444" in render_lift_card(0.08, 0.10)
    assert "+0.3000" in render_lift_card(0.40, 0.10)


def test_stylesheet_has_direction_accents():
    assert ".direction-average" in MODERN_CSS
    assert "#123456" in build_css({"accent": "#123456"})
