"""Deterministic page composition: flow layout, tables, bounding boxes."""

from docsynth.layout.boxes import (
    CATEGORIES,
    CATEGORY_IDS,
    ChartPayload,
    ComposedDocument,
    ImagePayload,
    LayoutElement,
    LineSeg,
    PageBox,
    PageCanvas,
    RectFill,
    RectOutline,
    TextRun,
)
from docsynth.layout.compose import compose, hex_to_rgb, layout_table
from docsynth.layout.measure import MeasuredLine, MeasuredText, line_height, measure_text

__all__ = [
    "CATEGORIES",
    "CATEGORY_IDS",
    "ChartPayload",
    "ComposedDocument",
    "ImagePayload",
    "LayoutElement",
    "LineSeg",
    "MeasuredLine",
    "MeasuredText",
    "PageBox",
    "PageCanvas",
    "RectFill",
    "RectOutline",
    "TextRun",
    "compose",
    "hex_to_rgb",
    "layout_table",
    "line_height",
    "measure_text",
]
