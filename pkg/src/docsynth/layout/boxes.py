"""Geometry types: page boxes, ground-truth elements, render payloads.

Coordinates are integer pixels, top-left origin, y growing downward.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = [
    "PageBox",
    "LayoutElement",
    "PageCanvas",
    "ComposedDocument",
    "TextRun",
    "RectFill",
    "RectOutline",
    "LineSeg",
    "ChartPayload",
    "ImagePayload",
    "CATEGORIES",
    "CATEGORY_IDS",
]

# Stable category registry; ids dense from 1 and declared, not discovered.
CATEGORIES = [
    "title",
    "section",
    "table",
    "table_cell",
    "figure",
    "header_footer",
    "paragraph",
    "bullet",
    "equation",
    "caption",
]
CATEGORY_IDS = {name: i + 1 for i, name in enumerate(CATEGORIES)}


@dataclass(frozen=True)
class PageBox:
    page_index: int
    x: int
    y: int
    w: int
    h: int
    kind: str = ""

    def validate(self, page_w: int, page_h: int) -> "PageBox":
        assert self.w > 0 and self.h > 0, f"degenerate box {self}"
        assert 0 <= self.x and 0 <= self.y, f"negative origin {self}"
        assert self.x + self.w <= page_w and self.y + self.h <= page_h, (
            f"box {self} exceeds page {page_w}x{page_h}"
        )
        return self

    @property
    def x1(self) -> int:
        return self.x + self.w

    @property
    def y1(self) -> int:
        return self.y + self.h

    def intersection_area(self, other: "PageBox") -> int:
        if self.page_index != other.page_index:
            return 0
        iw = min(self.x1, other.x1) - max(self.x, other.x)
        ih = min(self.y1, other.y1) - max(self.y, other.y)
        return max(iw, 0) * max(ih, 0)


@dataclass
class LayoutElement:
    """One ground-truth annotation: category plus pixel bounding box."""

    category: str
    box: PageBox
    element_id: int
    parent_id: int | None = None
    fragment_index: int = 0


@dataclass
class PageCanvas:
    width: int
    height: int
    background: tuple[int, int, int]


# --- render payloads ---------------------------------------------------------


@dataclass
class TextRun:
    page: int
    x: int  # top-left layout origin (PIL anchor "la")
    y: int
    text: str
    font_path: str
    px: int
    color: tuple[int, int, int]
    element_id: int


@dataclass
class RectFill:
    page: int
    x: int
    y: int
    w: int
    h: int
    color: tuple[int, int, int]
    element_id: int


@dataclass
class RectOutline:
    page: int
    x: int
    y: int
    w: int
    h: int
    color: tuple[int, int, int]
    width: int
    element_id: int


@dataclass
class LineSeg:
    page: int
    x0: int
    y0: int
    x1: int
    y1: int
    color: tuple[int, int, int]
    width: int
    element_id: int


@dataclass
class ChartPayload:
    page: int
    x: int
    y: int
    w: int
    h: int
    subplots: list  # ChartSubplot plans
    palette: list[tuple[int, int, int]]
    axis_color: tuple[int, int, int]
    element_id: int


@dataclass
class ImagePayload:
    page: int
    x: int
    y: int
    w: int
    h: int
    path: str
    element_id: int


@dataclass
class ComposedDocument:
    """Positioned payloads plus the ground truth for one document."""

    pages: list[PageCanvas]
    placed: list
    element_boxes: list[LayoutElement]

    def payloads_for(self, element_id: int) -> list:
        return [p for p in self.placed if p.element_id == element_id]
