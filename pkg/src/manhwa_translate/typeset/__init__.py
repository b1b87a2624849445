"""Clearing original lettering and typesetting translated text into bubbles."""

from .fonts import FontMetrics, LinearMetrics, TrueTypeFont
from .layout import FitConstraints, TypesetPlan, fit_text, wrap_words
from .render import clear_region, estimate_bubble_mask, render_plan

__all__ = [
    "FitConstraints",
    "FontMetrics",
    "LinearMetrics",
    "TrueTypeFont",
    "TypesetPlan",
    "clear_region",
    "estimate_bubble_mask",
    "fit_text",
    "render_plan",
    "wrap_words",
]
