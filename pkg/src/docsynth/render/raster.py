"""Rasterization of composed documents to RGB pixel buffers.

Self-contained: glyphs come only from the font files named by payloads (no
system font services), so identical inputs produce bit-identical buffers.
Payloads draw in placement order over the background fill.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image, ImageDraw

from docsynth.errors import FontGlyphMissing, ImageDecodeError
from docsynth.fonts import FontSet
from docsynth.fonts import _cmap as _font_cmap
from docsynth.layout.boxes import (
    ChartPayload,
    ComposedDocument,
    ImagePayload,
    LineSeg,
    RectFill,
    RectOutline,
    TextRun,
)
from docsynth.render.charts import render_chart

__all__ = ["RasterPage", "render", "render_glyph_run", "render_payload"]


@dataclass
class RasterPage:
    width: int
    height: int
    pixels: np.ndarray  # uint8, shape (height, width, 3), row-major

    @classmethod
    def from_image(cls, image: Image.Image) -> "RasterPage":
        arr = np.asarray(image.convert("RGB"), dtype=np.uint8)
        return cls(width=image.width, height=image.height, pixels=arr)

    def to_image(self) -> Image.Image:
        return Image.fromarray(self.pixels, "RGB")

    def validate(self) -> "RasterPage":
        assert self.pixels.shape == (self.height, self.width, 3)
        assert self.pixels.dtype == np.uint8
        return self


def render_glyph_run(draw: ImageDraw.ImageDraw, run: TextRun) -> None:
    """Draw one baseline-aligned glyph run at its layout origin.

    Raises :class:`FontGlyphMissing` for codepoints outside the font's
    character map (composition normally guarantees coverage via fallback).
    """
    cmap = _font_cmap(run.font_path)
    for ch in run.text:
        if not ch.isspace() and ord(ch) not in cmap:
            raise FontGlyphMissing(ch)
    font = FontSet.load(run.font_path, run.px)
    draw.text((run.x, run.y), run.text, font=font, fill=run.color)


def _paste_image(image: Image.Image, payload: ImagePayload) -> None:
    try:
        with Image.open(payload.path) as src:
            src = src.convert("RGB")
            resized = src.resize((payload.w, payload.h), Image.LANCZOS)
    except FileNotFoundError:
        raise
    except OSError as exc:
        raise ImageDecodeError(f"{payload.path}: {exc}") from exc
    image.paste(resized, (payload.x, payload.y))


def render_payload(image: Image.Image, draw: ImageDraw.ImageDraw,
                   payload) -> None:
    """Draw a single payload; exposed so tests can raster element subsets."""
    if isinstance(payload, TextRun):
        render_glyph_run(draw, payload)
    elif isinstance(payload, RectFill):
        draw.rectangle(
            [payload.x, payload.y, payload.x + payload.w - 1,
             payload.y + payload.h - 1],
            fill=payload.color)
    elif isinstance(payload, RectOutline):
        draw.rectangle(
            [payload.x, payload.y, payload.x + payload.w - 1,
             payload.y + payload.h - 1],
            outline=payload.color, width=payload.width)
    elif isinstance(payload, LineSeg):
        draw.line([(payload.x0, payload.y0), (payload.x1, payload.y1)],
                  fill=payload.color, width=payload.width)
    elif isinstance(payload, ChartPayload):
        render_chart(draw, payload)
    elif isinstance(payload, ImagePayload):
        _paste_image(image, payload)
    else:
        raise TypeError(f"unknown payload {type(payload)}")


def render(composed: ComposedDocument) -> list[RasterPage]:
    """Rasterize all pages: background fill first, then payloads in order."""
    images = [
        Image.new("RGB", (p.width, p.height), p.background)
        for p in composed.pages
    ]
    draws = [ImageDraw.Draw(im) for im in images]
    for payload in composed.placed:
        render_payload(images[payload.page], draws[payload.page], payload)
    return [RasterPage.from_image(im).validate() for im in images]
