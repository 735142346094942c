"""Ancestral sampling of complete document plans.

The per-document stream tree keyed on (seed, doc index) assigns every node
draw its own sub-stream, so any subset of the network can be resampled or
skipped (e.g. defects off) without perturbing the rest, and documents can be
generated in any order across workers with identical results.

Stream path layout under the document root:

* ``(0, 0)``            template choice
* ``(1, pos)``          document-level node at catalog position ``pos``
* ``(2, i, pos, ...)``  body element ``i``
* ``(3, s, ...)``       header (0) / footer (1) / title (2) content
* ``(4, pos)``          defect nodes (see :mod:`docsynth.defects`)
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from docsynth.errors import EmptyImageLibrary
from docsynth.probnet import RngStream, draw_value, realize_params
from docsynth.subnets.catalog import catalog_position
from docsynth.subnets.plans import (
    BulletPlan,
    CaptionPlan,
    CellPlan,
    ChartSubplot,
    DocumentPlan,
    EquationGroup,
    EquationPlan,
    FigurePlan,
    HeaderColumn,
    HeaderPlan,
    PageGeometry,
    ParagraphPlan,
    SectionPlan,
    TablePlan,
    TextStyle,
    TitlePlan,
)

if TYPE_CHECKING:
    from docsynth.templates.spec import TemplateMixture, TemplateSpec

__all__ = [
    "sample_document_plan",
    "sample_section",
    "sample_table",
    "sample_figure",
    "sample_header",
]

# auxiliary path components that cannot collide with catalog positions
_AUX_TOKENS = 1000
_AUX_DATA = 1001
_AUX_SENTENCES = 1002
_AUX_TEXT = 1003

_GREEK = "αβγδεζηθλμνξπρστφχψω"
_OPERATORS = ["=", "+", "−", "×", "/", "≤", "≥", "≈"]
_BIG_OPERATORS = ["∑", "∫", "√", "∂"]


class _DocContext:
    """Realized document-shared state handed to the element samplers."""

    def __init__(self, template: "TemplateSpec", root: RngStream):
        self.template = template
        self.specs = template.node_specs
        self.root = root
        self.realized: dict[str, dict] = {}

    # -- document-level draws -------------------------------------------------

    def node_stream(self, node_id: str) -> RngStream:
        return self.root.child(1, catalog_position(node_id))

    def doc_sample(self, node_id: str, label=True):
        """Two-stage sample of a document-level node; realization recorded."""
        spec = self.specs[node_id]
        gen = self.node_stream(node_id).generator
        realized = realize_params(spec, gen)
        value = draw_value(spec, realized, gen)
        self.realized[node_id] = realized
        if label and spec.values is not None:
            return spec.label(value)
        return value

    def doc_realize(self, node_id: str) -> dict:
        """Realize a node's intermediates only (for repeated later draws)."""
        spec = self.specs[node_id]
        realized = realize_params(spec, self.node_stream(node_id).generator)
        self.realized[node_id] = realized
        return realized

    # -- instance-level draws ---------------------------------------------------

    def draw(self, node_id: str, rng: RngStream, realized=None, size=None,
             label=True):
        spec = self.specs[node_id]
        rel = realized if realized is not None else self.realized[node_id]
        gen = rng.generator if isinstance(rng, RngStream) else rng
        value = draw_value(spec, rel, gen, size=size)
        if label and spec.values is not None and size is None:
            return spec.label(value)
        return value

    def sample_instance(self, node_id: str, rng: RngStream, label=True):
        """Full two-stage sample scoped to one element instance."""
        spec = self.specs[node_id]
        gen = rng.generator
        realized = realize_params(spec, gen)
        value = draw_value(spec, realized, gen)
        if label and spec.values is not None:
            return spec.label(value), realized
        return value, realized


def _token_grid(ctx: _DocContext, rng: RngStream, widths) -> list[list[int]]:
    total = int(sum(widths))
    if total == 0:
        return [[] for _ in widths]
    flat = draw_value(ctx.specs["vocab.token"],
                      {"probs": ctx.realized["vocab.token"]["probs"]},
                      rng.generator, size=total)
    flat = [int(t) for t in np.atleast_1d(flat)]
    grid, at = [], 0
    for w in widths:
        grid.append(flat[at:at + int(w)])
        at += int(w)
    return grid


def _sample_caption(ctx: _DocContext, elem: RngStream) -> CaptionPlan | None:
    present, _ = ctx.sample_instance("caption.present",
                                     elem.child(catalog_position("caption.present")))
    if not present:
        return None
    position, _ = ctx.sample_instance(
        "caption.position", elem.child(catalog_position("caption.position")))
    line_count, _ = ctx.sample_instance(
        "caption.line_count", elem.child(catalog_position("caption.line_count")))
    wspec = ctx.specs["caption.words_per_line"]
    wgen = elem.child(catalog_position("caption.words_per_line")).generator
    wreal = realize_params(wspec, wgen)
    widths = [int(v) for v in
              np.atleast_1d(draw_value(wspec, wreal, wgen, size=line_count))]
    tokens = _token_grid(ctx, elem.child(_AUX_TOKENS, 1), widths)
    return CaptionPlan(position=position, line_count=int(line_count),
                       words_per_line=widths, tokens=tokens)


def sample_section(ctx: _DocContext, elem: RngStream) -> SectionPlan:
    """One section: line count, words per line, then vocabulary tokens."""
    line_count = ctx.draw("section.line_count",
                          elem.child(catalog_position("section.line_count")))
    wgen = elem.child(catalog_position("section.words_per_line")).generator
    widths = [int(v) for v in np.atleast_1d(
        ctx.draw("section.words_per_line", wgen, size=int(line_count)))]
    tokens = _token_grid(ctx, elem.child(_AUX_TOKENS, 0), widths)
    return SectionPlan(line_count=int(line_count), words_per_line=widths,
                       tokens=tokens, style=ctx.section_style)


def sample_table(ctx: _DocContext, elem: RngStream) -> TablePlan:
    """One table instance; cell content follows the section token pattern."""
    val = lambda nid: ctx.sample_instance(nid, elem.child(catalog_position(nid)))[0]

    width_fraction = val("table.width_fraction")
    alignment = val("table.alignment")
    borders = val("table.borders")
    h_pad = val("table.h_pad")
    v_pad = val("table.v_pad")
    pre_space = val("table.pre_space")
    post_space = val("table.post_space")
    rows = int(val("table.rows"))
    cols = int(val("table.cols"))
    header_style = val("table.header_style")

    # cell widths: Dirichlet realization over the first `cols` slots
    wspec = ctx.specs["table.cell_widths"]
    alpha = np.asarray(wspec.params["alpha"], dtype=float)[:cols]
    wgen = elem.child(catalog_position("table.cell_widths")).generator
    if cols == 1:
        fractions = [1.0]
    else:
        fractions = wgen.dirichlet(alpha).tolist()

    lines_spec = ctx.specs["table.cell_lines"]
    lines_gen = elem.child(catalog_position("table.cell_lines")).generator
    lines_probs = realize_params(lines_spec, lines_gen)

    words_spec = ctx.specs["table.cell_words"]
    words_gen = elem.child(catalog_position("table.cell_words")).generator
    words_real = realize_params(words_spec, words_gen)

    align_base, align_real = ctx.sample_instance(
        "table.cell_align", elem.child(catalog_position("table.cell_align")))
    style_base, style_real = ctx.sample_instance(
        "table.cell_font_style", elem.child(catalog_position("table.cell_font_style")))
    override_p = realize_params(
        ctx.specs["table.style_override"],
        elem.child(catalog_position("table.style_override")).generator,
    )

    qa_mode = ctx.template.table_content == "qa"
    n_questions = len(ctx.template.resources.questions)
    n_answers = len(ctx.template.resources.answers)

    cells: list[list[CellPlan]] = []
    for r in range(rows):
        row = []
        for c in range(cols):
            cgen = elem.child(catalog_position("table.cell_lines"), r, c).generator
            line_count = int(ctx.specs["table.cell_lines"].label(
                draw_value(lines_spec, lines_probs, cgen)))
            font_style = style_base if r > 0 else header_style
            align = align_base
            if draw_value(ctx.specs["table.style_override"], override_p, cgen):
                font_style = ctx.specs["table.cell_font_style"].label(
                    draw_value(ctx.specs["table.cell_font_style"], style_real, cgen))
                align = ctx.specs["table.cell_align"].label(
                    draw_value(ctx.specs["table.cell_align"], align_real, cgen))
            qa_role = qa_index = None
            tokens: list[int] = []
            if qa_mode and line_count > 0:
                qa_role = "question" if (c if cols > 1 else r) % 2 == 0 else "answer"
                pool = n_questions if qa_role == "question" else n_answers
                qa_index = int(cgen.integers(0, pool))
                if qa_role == "question":
                    font_style = "bold"
            elif line_count > 0:
                n_words = int(draw_value(words_spec, words_real, cgen)) * line_count
                tokens = [int(t) for t in np.atleast_1d(draw_value(
                    ctx.specs["vocab.token"],
                    {"probs": ctx.realized["vocab.token"]["probs"]},
                    cgen, size=n_words))]
            row.append(CellPlan(line_count=line_count, tokens=tokens,
                                font_style=font_style, align=align,
                                qa_role=qa_role, qa_index=qa_index))
        cells.append(row)

    return TablePlan(
        width_fraction=float(width_fraction), alignment=alignment,
        borders=borders, h_pad=float(h_pad), v_pad=float(v_pad),
        pre_space=float(pre_space), post_space=float(post_space),
        rows=rows, cols=cols,
        cell_width_fractions=[float(f) for f in fractions],
        header_style=header_style, cells=cells,
        caption=_sample_caption(ctx, elem),
    )


def sample_figure(ctx: _DocContext, elem: RngStream) -> FigurePlan:
    """One figure: a library image or a multi-subplot synthetic chart."""
    val = lambda nid: ctx.sample_instance(nid, elem.child(catalog_position(nid)))[0]
    source = val("figure.source")
    width_fraction = float(val("figure.width_fraction"))
    height_fraction = float(val("figure.height_fraction"))

    image_index = None
    subplots: list[ChartSubplot] = []
    if source == "image":
        library = ctx.template.resources.images
        if not library:
            raise EmptyImageLibrary(
                f"template {ctx.template.template_id!r} has no library images"
            )
        image_index = int(elem.child(_AUX_DATA, 0).generator.integers(0, len(library)))
    else:
        n_sub = int(val("figure.subplot_count"))
        tgen = elem.child(catalog_position("figure.chart_type")).generator
        tspec = ctx.specs["figure.chart_type"]
        treal = realize_params(tspec, tgen)
        dgen = elem.child(_AUX_DATA, 1).generator
        for k in range(n_sub):
            ctype = tspec.label(draw_value(tspec, treal, tgen))
            if ctype == "heatmap":
                r = int(dgen.integers(3, 7))
                c = int(dgen.integers(3, 7))
                grid = dgen.random((r, c)).tolist()
                subplots.append(ChartSubplot(chart_type=ctype, values=[], grid=grid))
            else:
                n = int(dgen.integers(4, 10))
                subplots.append(ChartSubplot(
                    chart_type=ctype, values=dgen.random(n).tolist()))

    return FigurePlan(source=source, width_fraction=width_fraction,
                      height_fraction=height_fraction, subplots=subplots,
                      image_index=image_index, caption=_sample_caption(ctx, elem))


def _paragraph_like(ctx, elem, prefix):
    count_id = f"{prefix}.line_count" if prefix == "paragraph" else f"{prefix}.item_count"
    n, _ = ctx.sample_instance(count_id, elem.child(catalog_position(count_id)))
    line_spacing, _ = ctx.sample_instance(
        f"{prefix}.line_spacing", elem.child(catalog_position(f"{prefix}.line_spacing")))
    block_spacing, _ = ctx.sample_instance(
        f"{prefix}.block_spacing", elem.child(catalog_position(f"{prefix}.block_spacing")))
    sgen = elem.child(_AUX_SENTENCES).generator
    n_sentences = len(ctx.template.resources.sentences)
    idx = [int(v) for v in sgen.integers(0, n_sentences, size=int(n))]
    return int(n), float(line_spacing), float(block_spacing), idx


def sample_paragraph(ctx: _DocContext, elem: RngStream) -> ParagraphPlan:
    n, ls, bs, idx = _paragraph_like(ctx, elem, "paragraph")
    return ParagraphPlan(line_count=n, line_spacing=ls, block_spacing=bs,
                         sentence_indices=idx)


def sample_bullet(ctx: _DocContext, elem: RngStream) -> BulletPlan:
    n, ls, bs, idx = _paragraph_like(ctx, elem, "bullet")
    glyph, _ = ctx.sample_instance("bullet.type",
                                   elem.child(catalog_position("bullet.type")))
    offset, _ = ctx.sample_instance(
        "bullet.margin_offset", elem.child(catalog_position("bullet.margin_offset")))
    return BulletPlan(item_count=n, glyph=glyph, margin_offset=float(offset),
                      line_spacing=ls, block_spacing=bs, sentence_indices=idx)


def sample_equation(ctx: _DocContext, elem: RngStream) -> EquationPlan:
    n_groups, _ = ctx.sample_instance(
        "equation.group_count", elem.child(catalog_position("equation.group_count")))
    script_p = realize_params(
        ctx.specs["equation.script_rate"],
        elem.child(catalog_position("equation.script_rate")).generator,
    )
    pre, _ = ctx.sample_instance("equation.pre_space",
                                 elem.child(catalog_position("equation.pre_space")))
    post, _ = ctx.sample_instance("equation.post_space",
                                  elem.child(catalog_position("equation.post_space")))
    g = elem.child(_AUX_TEXT).generator
    groups: list[EquationGroup] = []
    eq_slot = int(g.integers(1, max(2, int(n_groups) - 1)))
    for k in range(int(n_groups)):
        if k == eq_slot:
            groups.append(EquationGroup(base="="))
            continue
        if k % 2 == 1:
            op = _OPERATORS[int(g.integers(1, len(_OPERATORS)))]
            groups.append(EquationGroup(base=op))
            continue
        roll = g.random()
        if roll < 0.2:
            base = _BIG_OPERATORS[int(g.integers(0, len(_BIG_OPERATORS)))]
        elif roll < 0.55:
            base = _GREEK[int(g.integers(0, len(_GREEK)))]
        else:
            base = chr(ord("a") + int(g.integers(0, 26)))
        script = None
        script_text = ""
        if draw_value(ctx.specs["equation.script_rate"], script_p, g):
            script = "sup" if g.random() < 0.5 else "sub"
            script_text = str(int(g.integers(0, 10))) if g.random() < 0.6 else chr(
                ord("i") + int(g.integers(0, 3)))
        groups.append(EquationGroup(base=base, script=script,
                                    script_text=script_text))
    return EquationPlan(groups=groups, pre_space=float(pre), post_space=float(post))


def _short_text(ctx, gen, n_tokens, upper=False, max_chars=None):
    vocab = ctx.template.resources.vocabulary
    probs = np.asarray(ctx.realized["vocab.token"]["probs"])
    idx = gen.choice(len(vocab), size=n_tokens, p=probs)
    words = [vocab[int(i)] for i in np.atleast_1d(idx)]
    text = " ".join(words)
    if upper:
        text = text.upper()
    if max_chars:
        text = text[:max_chars]
    return text


def sample_header(ctx: _DocContext, elem: RngStream, prefix: str) -> HeaderPlan:
    """Header or footer band: column count, then a content type per column."""
    columns, _ = ctx.sample_instance(
        f"{prefix}.columns", elem.child(catalog_position(f"{prefix}.columns")))
    font_scale, _ = ctx.sample_instance(
        f"{prefix}.font_scale", elem.child(catalog_position(f"{prefix}.font_scale")))
    color, _ = ctx.sample_instance(
        f"{prefix}.color", elem.child(catalog_position(f"{prefix}.color")))
    cspec = ctx.specs[f"{prefix}.content"]
    cstream = elem.child(catalog_position(f"{prefix}.content"))
    cgen = cstream.generator
    creal = realize_params(cspec, cgen)
    tgen = elem.child(_AUX_TEXT).generator

    aligns = {1: ["center"], 2: ["left", "right"], 3: ["left", "center", "right"]}
    cells = []
    for c in range(int(columns)):
        ctype = cspec.label(draw_value(cspec, creal, cgen))
        text = ""
        if ctype == "logo_text":
            text = _short_text(ctx, tgen, 1, upper=True, max_chars=8)
        elif ctype == "running_title":
            text = _short_text(ctx, tgen, int(tgen.integers(2, 5)))
        cells.append(HeaderColumn(content_type=ctype, text=text,
                                  align=aligns[int(columns)][c]))
    return HeaderPlan(columns=int(columns), cells=cells,
                      font_scale=float(font_scale), color=color)


_ELEMENT_SAMPLERS = {
    "section": sample_section,
    "table": sample_table,
    "figure": sample_figure,
    "paragraph": sample_paragraph,
    "bullet": sample_bullet,
    "equation": sample_equation,
}


def _sample_text_block(ctx, stream, line_count_id, words_id, style):
    line_count = ctx.draw(line_count_id, stream.child(catalog_position(line_count_id)))
    wgen = stream.child(catalog_position(words_id)).generator
    widths = [int(v) for v in np.atleast_1d(
        ctx.draw(words_id, wgen, size=int(line_count)))]
    tokens = _token_grid(ctx, stream.child(_AUX_TOKENS), widths)
    return int(line_count), widths, tokens


def sample_document_plan(mixture: "TemplateMixture", doc_index: int,
                         seed: int) -> DocumentPlan:
    """Realize the full latent/observed tree for one document."""
    from docsynth.templates.spec import choose_template  # avoids import cycle

    root = RngStream(int(seed)).child(int(doc_index))
    t_index, t_probs = choose_template(mixture, root.child(0, 0))
    template = mixture.templates[t_index]
    ctx = _DocContext(template, root)

    margin = float(ctx.doc_sample("doc.margin"))
    columns = int(ctx.doc_sample("doc.columns"))
    background = ctx.doc_sample("doc.background")
    font_name = ctx.doc_sample("style.font_name")
    font_size = float(ctx.doc_sample("style.font_size"))
    text_color = ctx.doc_sample("style.text_color")
    vocab_real = ctx.doc_realize("vocab.token")

    # pan-section shared style, realized once per document
    ctx.section_style = TextStyle(
        font_style=ctx.doc_sample("section.font_style"),
        align=ctx.doc_sample("section.align"),
        fore_color=ctx.doc_sample("section.fore_color"),
        back_color=ctx.doc_sample("section.back_color"),
        border_type=ctx.doc_sample("section.border_type"),
        border_color=ctx.doc_sample("section.border_color"),
        font_scale=float(ctx.doc_sample("section.font_scale")),
        pre_space=float(ctx.doc_sample("section.pre_space")),
        post_space=float(ctx.doc_sample("section.post_space")),
    )
    ctx.doc_realize("section.line_count")
    ctx.doc_realize("section.words_per_line")

    header = footer = None
    if ctx.doc_sample("header.present"):
        header = sample_header(ctx, root.child(3, 0), "header")
    if ctx.doc_sample("footer.present"):
        footer = sample_header(ctx, root.child(3, 1), "footer")

    title = None
    if ctx.doc_sample("title.present"):
        tstream = root.child(3, 2)
        title_style = TextStyle(
            font_style=ctx.doc_sample("title.font_style"),
            align=ctx.doc_sample("title.align"),
            fore_color=ctx.doc_sample("title.fore_color"),
            back_color=ctx.doc_sample("title.back_color"),
            border_type=ctx.doc_sample("title.border_type"),
            border_color=ctx.doc_sample("title.border_color"),
            font_scale=float(ctx.doc_sample("title.font_scale")),
            pre_space=float(ctx.doc_sample("title.pre_space")),
            post_space=float(ctx.doc_sample("title.post_space")),
        )
        ctx.doc_realize("title.line_count")
        ctx.doc_realize("title.words_per_line")
        lc, widths, tokens = _sample_text_block(
            ctx, tstream, "title.line_count", "title.words_per_line", title_style)
        title = TitlePlan(line_count=lc, words_per_line=widths, tokens=tokens,
                          style=title_style)

    n_body = int(ctx.doc_sample("body.count"))
    ctx.doc_realize("body.category")
    cat_spec = ctx.specs["body.category"]
    cat_gen = ctx.node_stream("body.category").generator
    categories = [
        cat_spec.label(int(i))
        for i in np.atleast_1d(draw_value(
            cat_spec, ctx.realized["body.category"], cat_gen, size=n_body))
    ]

    body = []
    for i, category in enumerate(categories):
        elem = root.child(2, i)
        body.append(_ELEMENT_SAMPLERS[category](ctx, elem))

    return DocumentPlan(
        seed=int(seed), doc_index=int(doc_index),
        template_index=int(t_index), template_id=template.template_id,
        template_probs=[float(p) for p in t_probs],
        page=PageGeometry(width=template.page.width, height=template.page.height,
                          dpi=template.page.dpi),
        margin=margin, columns=columns, background=background,
        font_name=font_name, font_size=font_size, text_color=text_color,
        vocab_probs=[float(p) for p in vocab_real["probs"]],
        header=header, footer=footer, title=title, body=body,
        realized=ctx.realized,
    )
