"""Canonical catalog of network nodes referenced by the subnetworks.

The catalog fixes each node's identity, family, parent links and category
labels; templates supply the hyperparameters.  ``build_registry`` marries the
two, expanding resource-dependent dimensions (palettes, font list, vocabulary,
watermark texts) and validating coverage, so a template that loads is
guaranteed to drive every subnetwork.

Node ids double as rng path components via their stable catalog position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

from docsynth.errors import InvalidHyperparam, MissingNodeParams
from docsynth.probnet import DistributionSpec, Family, NodeRef, Registry

__all__ = [
    "CatalogNode",
    "NODE_CATALOG",
    "catalog_position",
    "build_registry",
    "BODY_CATEGORIES",
    "FONT_STYLE_VALUES",
    "ALIGN_VALUES",
    "BORDER_TYPE_VALUES",
    "TABLE_BORDER_VALUES",
    "HEADER_CONTENT_VALUES",
    "CHART_TYPE_VALUES",
    "BULLET_GLYPHS",
    "OCCLUSION_COLORS",
    "MAX_TABLE_COLS",
]

BODY_CATEGORIES = ["section", "table", "figure", "paragraph", "bullet", "equation"]
FONT_STYLE_VALUES = ["regular", "bold", "italic", "bold_italic"]
ALIGN_VALUES = ["left", "center", "right"]
BORDER_TYPE_VALUES = ["none", "underline", "box"]
TABLE_BORDER_VALUES = ["none", "rows", "columns", "header", "grid", "cells"]
HEADER_CONTENT_VALUES = ["logo_text", "page_number", "running_title", "empty"]
CHART_TYPE_VALUES = ["bar", "line", "scatter", "pie", "heatmap"]
FIGURE_SOURCE_VALUES = ["chart", "image"]
CAPTION_POSITION_VALUES = ["above", "below"]
BULLET_GLYPHS = ["•", "◦", "▪", "–"]
OCCLUSION_COLORS = ["#101010", "#ffffff", "#9e9e9e"]
MAX_TABLE_COLS = 5


@dataclass
class CatalogNode:
    id: str
    family: Family
    parents: tuple[str, ...] = ()
    # fixed category labels, or a resource key resolved at build time
    values: list | None = None
    values_from: str | None = None  # "fonts", "vocab", "watermark_texts", "palette.*"
    support: tuple[float, float] | None = None
    integer: bool = False
    scalar_alpha: bool = False  # template gives one concentration, expanded


def _n(id, family, parents=(), **kw):
    return CatalogNode(id=id, family=family, parents=tuple(parents), **kw)


_D = Family.DIRICHLET_CATEGORICAL
_B = Family.BETA_BERNOULLI
_N = Family.NORMAL_NIG
_E = Family.SHIFTED_EXPONENTIAL
_P = Family.POISSON
_C = Family.TRUNCATED_CAUCHY
_U = Family.UNIFORM_CONTINUOUS
_UD = Family.UNIFORM_DISCRETE

NODE_CATALOG: list[CatalogNode] = [
    # document-level
    _n("doc.margin", _N, support=(0.02, 0.22)),
    _n("doc.columns", _D, values=[1, 2, 3]),
    _n("doc.background", _D, values_from="palette.background"),
    # document-shared style
    _n("style.font_name", _D, values_from="fonts"),
    _n("style.font_size", _E, support=(6.0, 22.0)),
    _n("style.text_color", _D, values_from="palette.text"),
    _n("vocab.token", _D, values_from="vocab", scalar_alpha=True),
    # single-instance gates
    _n("header.present", _B),
    _n("footer.present", _B),
    _n("title.present", _B),
    # body composition
    _n("body.count", _P, support=(1, 60)),
    _n("body.category", _D, values=BODY_CATEGORIES, parents=("body.count",)),
    # pan-section shared variables
    _n("section.font_style", _D, values=FONT_STYLE_VALUES, parents=("body.category",)),
    _n("section.align", _D, values=ALIGN_VALUES, parents=("body.category",)),
    _n("section.fore_color", _D, values_from="palette.text", parents=("body.category",)),
    _n("section.back_color", _D, values_from="palette.highlight", parents=("body.category",)),
    _n("section.border_type", _D, values=BORDER_TYPE_VALUES, parents=("body.category",)),
    _n("section.border_color", _D, values_from="palette.accent", parents=("body.category",)),
    _n("section.font_scale", _U, parents=("body.category",)),
    _n("section.pre_space", _U, parents=("body.category",)),
    _n("section.post_space", _U, parents=("body.category",)),
    _n("section.line_count", _D, values=[1, 2, 3], parents=("body.category",)),
    _n("section.words_per_line", _N, support=(1, 30), integer=True,
       parents=("body.category",)),
    # title (single instance, own parameters)
    _n("title.line_count", _D, values=[1, 2], parents=("title.present",)),
    _n("title.words_per_line", _N, support=(1, 24), integer=True,
       parents=("title.present",)),
    _n("title.font_style", _D, values=FONT_STYLE_VALUES, parents=("title.present",)),
    _n("title.align", _D, values=ALIGN_VALUES, parents=("title.present",)),
    _n("title.fore_color", _D, values_from="palette.text", parents=("title.present",)),
    _n("title.back_color", _D, values_from="palette.highlight", parents=("title.present",)),
    _n("title.border_type", _D, values=BORDER_TYPE_VALUES, parents=("title.present",)),
    _n("title.border_color", _D, values_from="palette.accent", parents=("title.present",)),
    _n("title.font_scale", _U, parents=("title.present",)),
    _n("title.pre_space", _U, parents=("title.present",)),
    _n("title.post_space", _U, parents=("title.present",)),
    # table subnetwork
    _n("table.width_fraction", _N, support=(0.4, 1.0), parents=("body.category",)),
    _n("table.alignment", _D, values=ALIGN_VALUES, parents=("body.category",)),
    _n("table.borders", _D, values=TABLE_BORDER_VALUES, parents=("body.category",)),
    _n("table.h_pad", _E, support=(0.0, 8.0), parents=("body.category",)),
    _n("table.v_pad", _E, support=(0.0, 8.0), parents=("body.category",)),
    _n("table.pre_space", _U, parents=("body.category",)),
    _n("table.post_space", _U, parents=("body.category",)),
    _n("table.rows", _C, support=(1, 40), integer=True, parents=("body.category",)),
    _n("table.cols", _D, values=list(range(1, MAX_TABLE_COLS + 1)),
       parents=("body.category",)),
    _n("table.cell_widths", _D, values=list(range(MAX_TABLE_COLS)),
       parents=("table.cols",)),
    _n("table.cell_lines", _D, values=[0, 1, 2], parents=("table.cols",)),
    _n("table.cell_words", _N, support=(1, 8), integer=True, parents=("table.cols",)),
    _n("table.cell_align", _D, values=ALIGN_VALUES, parents=("table.cols",)),
    _n("table.cell_font_style", _D, values=FONT_STYLE_VALUES, parents=("table.cols",)),
    _n("table.header_style", _D, values=["regular", "bold", "bold_italic"],
       parents=("table.cols",)),
    _n("table.style_override", _B, parents=("table.cols",)),
    # figure subnetwork
    _n("figure.source", _D, values=FIGURE_SOURCE_VALUES, parents=("body.category",)),
    _n("figure.subplot_count", _D, values=[1, 2, 3, 4], parents=("figure.source",)),
    _n("figure.chart_type", _D, values=CHART_TYPE_VALUES, parents=("figure.source",)),
    _n("figure.width_fraction", _N, support=(0.4, 1.0), parents=("body.category",)),
    _n("figure.height_fraction", _N, support=(0.12, 0.45), parents=("body.category",)),
    # caption subnet shared by table and figure hosts
    _n("caption.present", _B, parents=("body.category",)),
    _n("caption.position", _D, values=CAPTION_POSITION_VALUES,
       parents=("caption.present",)),
    _n("caption.line_count", _D, values=[1, 2, 3], parents=("caption.present",)),
    _n("caption.words_per_line", _N, support=(2, 14), integer=True,
       parents=("caption.present",)),
    # paragraph subnetwork
    _n("paragraph.line_count", _UD, parents=("body.category",)),
    _n("paragraph.line_spacing", _U, parents=("body.category",)),
    _n("paragraph.block_spacing", _U, parents=("body.category",)),
    # bullet subnetwork
    _n("bullet.item_count", _UD, parents=("body.category",)),
    _n("bullet.type", _D, values=BULLET_GLYPHS, parents=("body.category",)),
    _n("bullet.margin_offset", _U, parents=("body.category",)),
    _n("bullet.line_spacing", _U, parents=("body.category",)),
    _n("bullet.block_spacing", _U, parents=("body.category",)),
    # equation subnetwork
    _n("equation.group_count", _UD, parents=("body.category",)),
    _n("equation.script_rate", _B, parents=("body.category",)),
    _n("equation.pre_space", _U, parents=("body.category",)),
    _n("equation.post_space", _U, parents=("body.category",)),
    # header / footer content
    _n("header.columns", _D, values=[1, 2, 3], parents=("header.present",)),
    _n("header.content", _D, values=HEADER_CONTENT_VALUES, parents=("header.present",)),
    _n("header.font_scale", _U, parents=("header.present",)),
    _n("header.color", _D, values_from="palette.text", parents=("header.present",)),
    _n("footer.columns", _D, values=[1, 2, 3], parents=("footer.present",)),
    _n("footer.content", _D, values=HEADER_CONTENT_VALUES, parents=("footer.present",)),
    _n("footer.font_scale", _U, parents=("footer.present",)),
    _n("footer.color", _D, values_from="palette.text", parents=("footer.present",)),
    # defect subnetwork
    _n("defect.bleed.present", _B),
    _n("defect.bleed.strength", _U, parents=("defect.bleed.present",)),
    _n("defect.shadow.present", _B),
    _n("defect.shadow.edge", _UD, parents=("defect.shadow.present",)),
    _n("defect.shadow.width", _U, parents=("defect.shadow.present",)),
    _n("defect.shadow.darkness", _U, parents=("defect.shadow.present",)),
    _n("defect.dark_corner.present", _B),
    _n("defect.dark_corner.corner", _UD, parents=("defect.dark_corner.present",)),
    _n("defect.dark_corner.radius", _U, parents=("defect.dark_corner.present",)),
    _n("defect.dark_corner.darkness", _U, parents=("defect.dark_corner.present",)),
    _n("defect.watermark.present", _B),
    _n("defect.watermark.text", _D, values_from="watermark_texts",
       parents=("defect.watermark.present",)),
    _n("defect.watermark.angle", _U, parents=("defect.watermark.present",)),
    _n("defect.watermark.opacity", _U, parents=("defect.watermark.present",)),
    _n("defect.watermark.x", _U, parents=("defect.watermark.present",)),
    _n("defect.watermark.y", _U, parents=("defect.watermark.present",)),
    _n("defect.occlusion.present", _B),
    _n("defect.occlusion.x", _U, parents=("defect.occlusion.present",)),
    _n("defect.occlusion.y", _U, parents=("defect.occlusion.present",)),
    _n("defect.occlusion.w", _U, parents=("defect.occlusion.present",)),
    _n("defect.occlusion.h", _U, parents=("defect.occlusion.present",)),
    _n("defect.occlusion.color", _D, values=OCCLUSION_COLORS,
       parents=("defect.occlusion.present",)),
    _n("defect.blur.present", _B),
    _n("defect.blur.radius", _U, parents=("defect.blur.present",)),
]

_POSITIONS = {node.id: i for i, node in enumerate(NODE_CATALOG)}


def catalog_position(node_id: str) -> int:
    """Stable integer used as this node's rng path component."""
    return _POSITIONS[node_id]


def _resolve_values(node: CatalogNode, resources) -> list | None:
    if node.values is not None:
        return list(node.values)
    if node.values_from is None:
        return None
    key = node.values_from
    if key == "fonts":
        return [fam.name for fam in resources.fonts.families]
    if key == "vocab":
        return list(range(len(resources.vocabulary)))
    if key == "watermark_texts":
        return list(resources.watermark_texts)
    if key.startswith("palette."):
        return list(resources.palette[key.split(".", 1)[1]])
    raise KeyError(key)


def build_registry(params: dict[str, dict], resources) -> Registry:
    """Build a validated per-template registry from raw node hyperparams.

    ``params`` maps node id to the hyperparameter record from the template
    file; ``resources`` supplies the dimension-defining assets.  Missing
    nodes raise :class:`MissingNodeParams` listing every absent id.
    """
    missing = [n.id for n in NODE_CATALOG if n.id not in params]
    if missing:
        raise MissingNodeParams(getattr(resources, "template_id", "<template>"),
                                missing)

    nodes = []
    for cat in NODE_CATALOG:
        raw = dict(params[cat.id])
        support = cat.support
        if "support" in raw:
            lo, hi = raw.pop("support")
            support = (float(lo), float(hi))
        values = _resolve_values(cat, resources)
        if cat.scalar_alpha:
            if "concentration" not in raw:
                raise InvalidHyperparam(cat.id, "concentration", "missing")
            conc = float(raw.pop("concentration"))
            raw["alpha"] = [conc] * len(values)
        if cat.family is Family.DIRICHLET_CATEGORICAL and values is not None:
            alpha = raw.get("alpha", ())
            if len(alpha) != len(values):
                raise InvalidHyperparam(
                    cat.id, "alpha",
                    f"{len(alpha)} concentrations for {len(values)} categories",
                )
        spec = DistributionSpec(
            family=cat.family, params=raw, support=support,
            values=values, integer=cat.integer,
        )
        nodes.append(NodeRef(cat.id, spec, parent_ids=cat.parents))
    return Registry.from_nodes(nodes)
