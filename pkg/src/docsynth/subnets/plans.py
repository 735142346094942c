"""Fully realized document plans.

A plan records every observed value and every realized intermediate
parameter drawn while instantiating the network for one document, which
makes composition and rendering pure functions of the plan.  Plans
serialize to JSON and round-trip losslessly.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

PLAN_SCHEMA_VERSION = 1


@dataclass
class TextStyle:
    """Pan-element style bundle shared by all sections (or the title)."""

    font_style: str
    align: str
    fore_color: str
    back_color: str
    border_type: str
    border_color: str
    font_scale: float
    pre_space: float
    post_space: float


@dataclass
class CaptionPlan:
    position: str  # above | below
    line_count: int
    words_per_line: list[int]
    tokens: list[list[int]]


@dataclass
class SectionPlan:
    kind = "section"
    line_count: int
    words_per_line: list[int]
    tokens: list[list[int]]
    style: TextStyle


@dataclass
class TitlePlan:
    kind = "title"
    line_count: int
    words_per_line: list[int]
    tokens: list[list[int]]
    style: TextStyle


@dataclass
class CellPlan:
    line_count: int
    tokens: list[int]
    font_style: str
    align: str
    qa_role: str | None = None  # question | answer for form-style tables
    qa_index: int | None = None


@dataclass
class TablePlan:
    kind = "table"
    width_fraction: float
    alignment: str
    borders: str
    h_pad: float
    v_pad: float
    pre_space: float
    post_space: float
    rows: int
    cols: int
    cell_width_fractions: list[float]
    header_style: str
    cells: list[list[CellPlan]]
    caption: CaptionPlan | None = None


@dataclass
class ChartSubplot:
    chart_type: str
    values: list[float]
    grid: list[list[float]] | None = None  # heatmap payload


@dataclass
class FigurePlan:
    kind = "figure"
    source: str  # chart | image
    width_fraction: float
    height_fraction: float
    subplots: list[ChartSubplot] = field(default_factory=list)
    image_index: int | None = None
    caption: CaptionPlan | None = None


@dataclass
class ParagraphPlan:
    kind = "paragraph"
    line_count: int
    line_spacing: float
    block_spacing: float
    sentence_indices: list[int]


@dataclass
class BulletPlan:
    kind = "bullet"
    item_count: int
    glyph: str
    margin_offset: float
    line_spacing: float
    block_spacing: float
    sentence_indices: list[int]


@dataclass
class EquationGroup:
    base: str
    script: str | None = None  # sup | sub
    script_text: str = ""


@dataclass
class EquationPlan:
    kind = "equation"
    groups: list[EquationGroup]
    pre_space: float
    post_space: float


@dataclass
class HeaderColumn:
    content_type: str  # logo_text | page_number | running_title | empty
    text: str = ""
    align: str = "left"


@dataclass
class HeaderPlan:
    columns: int
    cells: list[HeaderColumn]
    font_scale: float
    color: str


@dataclass
class DefectOp:
    op_kind: str  # bleed_through | shadow | dark_corner | watermark | occlusion | blur
    params: dict


@dataclass
class DefectPlan:
    ops: list[DefectOp] = field(default_factory=list)


@dataclass
class PageGeometry:
    width: int
    height: int
    dpi: int


@dataclass
class DocumentPlan:
    seed: int
    doc_index: int
    template_index: int
    template_id: str
    template_probs: list[float]
    page: PageGeometry
    margin: float
    columns: int
    background: str
    font_name: str
    font_size: float
    text_color: str
    vocab_probs: list[float]
    header: HeaderPlan | None
    footer: HeaderPlan | None
    title: TitlePlan | None
    body: list
    realized: dict[str, dict]  # node id -> intermediate parameter record
    defects: DefectPlan | None = None
    schema: int = PLAN_SCHEMA_VERSION

    @property
    def seed_path(self) -> tuple[int, int]:
        return (self.seed, self.doc_index)


_BODY_KINDS = {
    "section": SectionPlan,
    "table": TablePlan,
    "figure": FigurePlan,
    "paragraph": ParagraphPlan,
    "bullet": BulletPlan,
    "equation": EquationPlan,
}


def _encode(obj):
    if dataclasses.is_dataclass(obj):
        out = {}
        kind = getattr(obj, "kind", None)
        if isinstance(kind, str):
            out["kind"] = kind
        for f in dataclasses.fields(obj):
            out[f.name] = _encode(getattr(obj, f.name))
        return out
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    return obj


def plan_to_dict(plan: DocumentPlan) -> dict:
    return _encode(plan)


def _caption_from(d):
    return None if d is None else CaptionPlan(
        position=d["position"], line_count=d["line_count"],
        words_per_line=list(d["words_per_line"]),
        tokens=[list(t) for t in d["tokens"]],
    )


def _style_from(d):
    return TextStyle(**d)


def _body_from(d):
    kind = d["kind"]
    if kind == "section":
        return SectionPlan(
            line_count=d["line_count"],
            words_per_line=list(d["words_per_line"]),
            tokens=[list(t) for t in d["tokens"]],
            style=_style_from(d["style"]),
        )
    if kind == "table":
        return TablePlan(
            width_fraction=d["width_fraction"], alignment=d["alignment"],
            borders=d["borders"], h_pad=d["h_pad"], v_pad=d["v_pad"],
            pre_space=d["pre_space"], post_space=d["post_space"],
            rows=d["rows"], cols=d["cols"],
            cell_width_fractions=list(d["cell_width_fractions"]),
            header_style=d["header_style"],
            cells=[[CellPlan(**c) for c in row] for row in d["cells"]],
            caption=_caption_from(d.get("caption")),
        )
    if kind == "figure":
        return FigurePlan(
            source=d["source"], width_fraction=d["width_fraction"],
            height_fraction=d["height_fraction"],
            subplots=[ChartSubplot(**s) for s in d.get("subplots", [])],
            image_index=d.get("image_index"),
            caption=_caption_from(d.get("caption")),
        )
    if kind == "paragraph":
        return ParagraphPlan(
            line_count=d["line_count"], line_spacing=d["line_spacing"],
            block_spacing=d["block_spacing"],
            sentence_indices=list(d["sentence_indices"]),
        )
    if kind == "bullet":
        return BulletPlan(
            item_count=d["item_count"], glyph=d["glyph"],
            margin_offset=d["margin_offset"], line_spacing=d["line_spacing"],
            block_spacing=d["block_spacing"],
            sentence_indices=list(d["sentence_indices"]),
        )
    if kind == "equation":
        return EquationPlan(
            groups=[EquationGroup(**g) for g in d["groups"]],
            pre_space=d["pre_space"], post_space=d["post_space"],
        )
    raise ValueError(f"unknown body element kind {kind!r}")


def _header_from(d):
    return None if d is None else HeaderPlan(
        columns=d["columns"],
        cells=[HeaderColumn(**c) for c in d["cells"]],
        font_scale=d["font_scale"], color=d["color"],
    )


def plan_from_dict(d: dict) -> DocumentPlan:
    title = d.get("title")
    defects = d.get("defects")
    return DocumentPlan(
        seed=d["seed"], doc_index=d["doc_index"],
        template_index=d["template_index"], template_id=d["template_id"],
        template_probs=list(d["template_probs"]),
        page=PageGeometry(**d["page"]),
        margin=d["margin"], columns=d["columns"], background=d["background"],
        font_name=d["font_name"], font_size=d["font_size"],
        text_color=d["text_color"], vocab_probs=list(d["vocab_probs"]),
        header=_header_from(d.get("header")),
        footer=_header_from(d.get("footer")),
        title=None if title is None else TitlePlan(
            line_count=title["line_count"],
            words_per_line=list(title["words_per_line"]),
            tokens=[list(t) for t in title["tokens"]],
            style=_style_from(title["style"]),
        ),
        body=[_body_from(b) for b in d["body"]],
        realized={k: dict(v) for k, v in d["realized"].items()},
        defects=None if defects is None else DefectPlan(
            ops=[DefectOp(op_kind=o["op_kind"], params=dict(o["params"]))
                 for o in defects["ops"]]
        ),
        schema=d.get("schema", PLAN_SCHEMA_VERSION),
    )


def save_plan(plan: DocumentPlan, path) -> None:
    Path(path).write_text(
        json.dumps(plan_to_dict(plan), ensure_ascii=False, separators=(",", ":")),
        encoding="utf-8",
    )


def load_plan(path) -> DocumentPlan:
    return plan_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
