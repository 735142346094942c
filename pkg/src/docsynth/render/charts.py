"""Synthetic chart drawing: bar, line, scatter, pie and heatmap primitives.

Subplots tile their target box in a near-square grid.  Data values arrive
uniform on [0, 1] and are scaled per chart type; the tallest bar always
reaches the full plot height.  Strokes default to 1px.
"""

from __future__ import annotations

import math

from PIL import ImageDraw

from docsynth.errors import BoxTooSmall

__all__ = ["render_chart", "subplot_grid"]

_MIN_SIDE = 32


def subplot_grid(n: int) -> tuple[int, int]:
    rows = max(1, int(math.floor(math.sqrt(n))))
    cols = int(math.ceil(n / rows))
    return rows, cols


def _lerp_color(c0, c1, t: float):
    return tuple(round(a + (b - a) * t) for a, b in zip(c0, c1))


def _axes(draw, x0, y0, x1, y1, color):
    draw.line([(x0, y0), (x0, y1)], fill=color, width=1)
    draw.line([(x0, y1), (x1, y1)], fill=color, width=1)


def _bar(draw, x0, y0, x1, y1, values, palette, axis_color):
    _axes(draw, x0, y0, x1, y1, axis_color)
    plot_w = x1 - x0 - 2
    plot_h = y1 - y0 - 1
    k = len(values)
    vmax = max(values) or 1.0
    slot = plot_w / k
    bar_w = max(2, int(slot * 0.66))
    for i, v in enumerate(values):
        h = round(v / vmax * plot_h)
        if h <= 0:
            continue
        bx0 = x0 + 2 + round(i * slot + (slot - bar_w) / 2)
        draw.rectangle([bx0, y1 - h, bx0 + bar_w - 1, y1 - 1],
                       fill=palette[i % len(palette)])


def _line(draw, x0, y0, x1, y1, values, palette, axis_color):
    _axes(draw, x0, y0, x1, y1, axis_color)
    k = len(values)
    vmax = max(values) or 1.0
    pts = []
    for i, v in enumerate(values):
        px = x0 + 2 + round(i * (x1 - x0 - 4) / max(k - 1, 1))
        py = y1 - 1 - round(v / vmax * (y1 - y0 - 2))
        pts.append((px, py))
    draw.line(pts, fill=palette[0], width=1)


def _scatter(draw, x0, y0, x1, y1, values, palette, axis_color):
    _axes(draw, x0, y0, x1, y1, axis_color)
    k = len(values)
    vmax = max(values) or 1.0
    r = 2
    for i, v in enumerate(values):
        px = x0 + 3 + round(i * (x1 - x0 - 6) / max(k - 1, 1))
        py = y1 - 2 - round(v / vmax * (y1 - y0 - 5))
        draw.ellipse([px - r, py - r, px + r, py + r],
                     fill=palette[i % len(palette)])


def _pie(draw, x0, y0, x1, y1, values, palette, axis_color):
    total = sum(values)
    if total <= 0:
        values = [1.0] * len(values)
        total = float(len(values))
    cx, cy = (x0 + x1) / 2.0, (y0 + y1) / 2.0
    r = min(x1 - x0, y1 - y0) / 2.0 - 1
    bbox = [cx - r, cy - r, cx + r, cy + r]
    start = -90.0
    for i, v in enumerate(values):
        sweep = 360.0 * v / total
        if i == len(values) - 1:
            end = 270.0  # close the disc exactly despite rounding
        else:
            end = start + sweep
        draw.pieslice(bbox, start, end, fill=palette[i % len(palette)],
                      outline=axis_color, width=1)
        start = end


def _heatmap(draw, x0, y0, x1, y1, grid, palette, axis_color):
    rows = len(grid)
    cols = len(grid[0])
    light = (245, 245, 245)
    dark = palette[0]
    cw = (x1 - x0) / cols
    ch = (y1 - y0) / rows
    for r in range(rows):
        for c in range(cols):
            cx0 = x0 + round(c * cw)
            cy0 = y0 + round(r * ch)
            cx1 = x0 + round((c + 1) * cw) - 1
            cy1 = y0 + round((r + 1) * ch) - 1
            draw.rectangle([cx0, cy0, cx1, cy1],
                           fill=_lerp_color(light, dark, grid[r][c]))


def render_chart(draw: ImageDraw.ImageDraw, payload) -> None:
    """Render all subplots of a chart payload into its box."""
    if payload.w < _MIN_SIDE or payload.h < _MIN_SIDE:
        raise BoxTooSmall(f"chart box {payload.w}x{payload.h}")
    n = len(payload.subplots)
    rows, cols = subplot_grid(n)
    cell_w = payload.w // cols
    cell_h = payload.h // rows
    pad = max(3, round(min(cell_w, cell_h) * 0.08))
    for i, sub in enumerate(payload.subplots):
        r, c = divmod(i, cols)
        x0 = payload.x + c * cell_w + pad
        y0 = payload.y + r * cell_h + pad
        x1 = payload.x + (c + 1) * cell_w - pad
        y1 = payload.y + (r + 1) * cell_h - pad
        if x1 - x0 < 8 or y1 - y0 < 8:
            raise BoxTooSmall(f"subplot cell {x1 - x0}x{y1 - y0}")
        kind = sub.chart_type
        if kind == "bar":
            _bar(draw, x0, y0, x1, y1, sub.values, payload.palette,
                 payload.axis_color)
        elif kind == "line":
            _line(draw, x0, y0, x1, y1, sub.values, payload.palette,
                  payload.axis_color)
        elif kind == "scatter":
            _scatter(draw, x0, y0, x1, y1, sub.values, payload.palette,
                     payload.axis_color)
        elif kind == "pie":
            _pie(draw, x0, y0, x1, y1, sub.values, payload.palette,
                 payload.axis_color)
        elif kind == "heatmap":
            _heatmap(draw, x0, y0, x1, y1, sub.grid, payload.palette,
                     payload.axis_color)
        else:
            raise ValueError(f"unknown chart type {kind!r}")
