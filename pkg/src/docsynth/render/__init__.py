"""Rasterization of composed documents: glyph runs, shapes, charts, images."""

from docsynth.render.charts import render_chart, subplot_grid
from docsynth.render.raster import RasterPage, render, render_glyph_run, render_payload

__all__ = [
    "RasterPage",
    "render",
    "render_chart",
    "render_glyph_run",
    "render_payload",
    "subplot_grid",
]
