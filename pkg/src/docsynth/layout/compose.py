"""Deterministic page composition.

Converts a document plan into positioned render payloads plus one ground
truth box per element fragment.  Flow layout runs column by column: blocks
split at line boundaries, tables at row boundaries, figures move whole
(shrinking up to 25% if needed).  Header and footer bands live inside the
page margins and never intersect body flow.

Pure function of (plan, template, geometry); no randomness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from docsynth.errors import ElementTooLargeForPage
from docsynth.fonts import FontSet
from docsynth.layout.boxes import (
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
from docsynth.layout.measure import line_height, measure_text
from docsynth.subnets.plans import (
    BulletPlan,
    CaptionPlan,
    DocumentPlan,
    EquationPlan,
    FigurePlan,
    PageGeometry,
    ParagraphPlan,
    SectionPlan,
    TablePlan,
)

__all__ = ["compose", "layout_table", "hex_to_rgb"]

_MAX_PAGES = 200


def hex_to_rgb(value: str) -> tuple[int, int, int]:
    if value == "none":
        return (255, 255, 255)
    v = value.lstrip("#")
    return (int(v[0:2], 16), int(v[2:4], 16), int(v[4:6], 16))


def _fit_text(text: str, font, max_w: int) -> str:
    """Shed trailing words, then characters, until the ink fits max_w."""
    def ink_w(t):
        bbox = font.getbbox(t)
        return 0 if bbox is None else bbox[2]

    while text and ink_w(text) > max_w:
        if " " in text:
            text = text.rsplit(" ", 1)[0]
        else:
            text = text[:-1]
    return text


@dataclass
class _Unit:
    """Smallest indivisible flow item (a text line, table row, or figure)."""

    height: int
    place: Callable  # (page, x, y) -> (payloads, ink or None, meta)
    meta_kind: str = ""


@dataclass
class _PlacedUnit:
    y: int
    height: int
    ink: tuple | None
    meta: object = None


class _Composer:
    def __init__(self, plan: DocumentPlan, template, geometry: PageGeometry):
        self.plan = plan
        self.template = template
        self.geom = geometry
        self.W, self.H = geometry.width, geometry.height
        self.dpi = geometry.dpi

        self.margin_px = max(8, round(plan.margin * self.W))
        self.base_px = max(7, round(plan.font_size * self.dpi / 72.0))
        self.body_x0 = self.margin_px
        self.body_x1 = self.W - self.margin_px
        self.body_y0 = self.margin_px
        self.body_y1 = self.H - self.margin_px

        n_cols = plan.columns
        gutter = round(0.035 * (self.body_x1 - self.body_x0))
        total = self.body_x1 - self.body_x0
        self.col_w = (total - (n_cols - 1) * gutter) // n_cols
        self.gutter = gutter
        self.n_cols = n_cols

        self.fonts: FontSet = template.resources.fonts
        self.family = self.fonts.family(plan.font_name)
        self.vocab = template.resources.vocabulary
        self.sentences = template.resources.sentences

        self.pages: list[PageCanvas] = []
        self.placed: list = []
        self.elements: list[LayoutElement] = []
        self._next_element_id = 1

        self.page_i = -1
        self.col_i = 0
        self.y = 0
        self.flow_top_page0 = self.body_y0  # overwritten after title placement
        self.figure_counter = 0
        self.table_counter = 0

    # --- structural helpers ---------------------------------------------------

    def new_element_id(self) -> int:
        eid = self._next_element_id
        self._next_element_id += 1
        return eid

    def _new_page(self):
        if len(self.pages) >= _MAX_PAGES:
            raise ElementTooLargeForPage("document exceeds page cap")
        self.pages.append(PageCanvas(
            width=self.W, height=self.H,
            background=hex_to_rgb(self.plan.background),
        ))
        self.page_i = len(self.pages) - 1
        self.col_i = 0
        self.y = self._column_top()

    def _column_top(self) -> int:
        if self.page_i == 0:
            return self.flow_top_page0
        return self.body_y0

    def _column_x(self, col=None) -> int:
        c = self.col_i if col is None else col
        return self.body_x0 + c * (self.col_w + self.gutter)

    def _next_column(self):
        if self.col_i + 1 < self.n_cols:
            self.col_i += 1
            self.y = self._column_top()
        else:
            self._new_page()

    def _remaining(self) -> int:
        return self.body_y1 - self.y

    def _column_height(self) -> int:
        return self.body_y1 - self._column_top()

    def _at_column_top(self) -> bool:
        return self.y == self._column_top()

    def px(self, relative: float) -> int:
        return round(relative * self.base_px)

    def text_px(self, scale: float = 1.0) -> int:
        return max(6, round(self.base_px * scale))

    def font_for(self, style: str, text: str, px: int):
        path = self.fonts.pick_file(self.family, style, text)
        return str(path), px

    def words(self, token_indices) -> list[str]:
        return [self.vocab[t] for t in token_indices]

    # --- flow engine ------------------------------------------------------------

    def flow_element(self, category: str, units: list[_Unit], pre: int, post: int,
                     decorate=None, parent_id=None, element_id=None) -> int:
        """Place units sequentially; one ground-truth box per column fragment."""
        eid = element_id if element_id is not None else self.new_element_id()
        if not self._at_column_top():
            self.y += pre
        fragments: list[tuple[int, int, list[_PlacedUnit]]] = []
        current: list[_PlacedUnit] = []
        cur_page, cur_col = self.page_i, self.col_i

        def close():
            nonlocal current
            if current:
                fragments.append((cur_page, cur_col, current))
                current = []

        for unit in units:
            if unit.height > self._remaining():
                if unit.height > self._column_height():
                    raise ElementTooLargeForPage(
                        f"{category} unit of {unit.height}px exceeds column"
                    )
                close()
                self._next_column()
                cur_page, cur_col = self.page_i, self.col_i
            payloads, ink, meta = unit.place(self.page_i, self._column_x(), self.y)
            self.placed.extend(payloads)
            current.append(_PlacedUnit(y=self.y, height=unit.height,
                                       ink=ink, meta=meta))
            self.y += unit.height
        close()

        for frag_index, (page, col, frag_units) in enumerate(fragments):
            box = self._fragment_box(page, col, frag_units)
            if decorate is not None:
                box = decorate(page, col, frag_units, box, eid, frag_index)
            if box is not None:
                self.elements.append(LayoutElement(
                    category=category,
                    box=box.validate(self.W, self.H),
                    element_id=eid, parent_id=parent_id,
                    fragment_index=frag_index,
                ))
        self.y += post
        if self.y > self.body_y1:
            self._next_column()
        return eid

    def _fragment_box(self, page, col, frag_units) -> PageBox | None:
        xs0, ys0, xs1, ys1 = [], [], [], []
        for u in frag_units:
            if u.ink is None:
                continue
            x0, y0, x1, y1 = u.ink
            xs0.append(x0)
            ys0.append(y0)
            xs1.append(x1)
            ys1.append(y1)
        if not xs0:
            return None
        return PageBox(page_index=page, x=min(xs0), y=min(ys0),
                       w=max(xs1) - min(xs0), h=max(ys1) - min(ys0))

    # --- text blocks ---------------------------------------------------------------

    def _line_units(self, measured, font_path, px, color, align, eid,
                    step=None, indent=0, width=None):
        """One unit per measured line, aligned inside the column band."""
        col_w = self.col_w if width is None else width
        lh = line_height(font_path, px)
        step = step if step is not None else lh
        units = []
        for line in measured:
            def place(page, x, y, line=line):
                ix0, iy0, ix1, iy1 = line.ink
                if align == "center":
                    off = indent + max((col_w - indent - line.ink_w) // 2, 0)
                elif align == "right":
                    off = max(col_w - line.ink_w, indent)
                else:
                    off = indent
                draw_x = x + off - ix0
                run = TextRun(page=page, x=draw_x, y=y, text=line.text,
                              font_path=font_path, px=px, color=color,
                              element_id=eid)
                ink = (draw_x + ix0, y + iy0, draw_x + ix1, y + iy1)
                return [run], ink, None
            units.append(_Unit(height=step, place=place))
        return units

    def _decorated_text(self, category, plan_style, token_lines, parent_id=None):
        """Sections and the title: styled, optionally boxed/underlined text."""
        eid = self.new_element_id()
        px = self.text_px(plan_style.font_scale)
        color = hex_to_rgb(plan_style.fore_color)
        sample = " ".join(" ".join(self.words(t)) for t in token_lines) or "x"
        font_path, _ = self.font_for(plan_style.font_style, sample, px)
        pad = max(3, round(0.22 * self.base_px))
        wrap_w = self.col_w - (2 * pad if plan_style.back_color != "none"
                               or plan_style.border_type == "box" else 0)
        measured = []
        for tokens in token_lines:
            m = measure_text(self.words(tokens), font_path, px, wrap_w)
            measured.extend(m.lines)
        units = self._line_units(
            measured, font_path, px, color, plan_style.align, eid,
            indent=pad if wrap_w != self.col_w else 0)

        style = plan_style

        def decorate(page, col, frag_units, box, eid_, frag_index):
            if box is None:
                return None
            x0, y0, x1, y1 = box.x, box.y, box.x1, box.y1
            extra = []
            boxed = style.back_color != "none" or style.border_type == "box"
            if boxed:
                bx0 = max(self._column_x(col), x0 - pad)
                by0 = max(self.body_y0, y0 - pad)
                bx1 = min(self._column_x(col) + self.col_w, x1 + pad)
                by1 = min(self.body_y1, y1 + pad)
                if style.back_color != "none":
                    extra.append(RectFill(
                        page=page, x=bx0, y=by0, w=bx1 - bx0, h=by1 - by0,
                        color=hex_to_rgb(style.back_color), element_id=eid_))
                if style.border_type == "box":
                    extra.append(RectOutline(
                        page=page, x=bx0, y=by0, w=bx1 - bx0, h=by1 - by0,
                        color=hex_to_rgb(style.border_color), width=1,
                        element_id=eid_))
                x0, y0, x1, y1 = bx0, by0, bx1, by1
            elif style.border_type == "underline":
                uy = min(y1 + 3, self.body_y1 - 2)
                extra.append(LineSeg(
                    page=page, x0=x0, y0=uy, x1=x1, y1=uy,
                    color=hex_to_rgb(style.border_color), width=2,
                    element_id=eid_))
                y1 = uy + 2
            # background/border render beneath the glyph runs
            self.placed[0:0] = extra
            return PageBox(page_index=page, x=x0, y=y0, w=x1 - x0, h=y1 - y0)

        self.flow_element(category, units, pre=self.px(style.pre_space),
                          post=self.px(style.post_space), decorate=decorate,
                          parent_id=parent_id, element_id=eid)
        return eid

    # --- element emitters -------------------------------------------------------------

    def add_section(self, plan: SectionPlan):
        self._decorated_text("section", plan.style, plan.tokens)

    def add_paragraph(self, plan: ParagraphPlan):
        eid = self.new_element_id()
        px = self.text_px(1.0)
        color = hex_to_rgb(self.plan.text_color)
        font_path, _ = self.font_for("regular", "x", px)
        step = round(line_height(font_path, px) * plan.line_spacing)
        measured = []
        for idx in plan.sentence_indices:
            m = measure_text(self.sentences[idx].split(), font_path, px,
                             self.col_w)
            measured.extend(m.lines)
        units = self._line_units(measured, font_path, px, color, "left", eid,
                                 step=step)
        space = self.px(plan.block_spacing)
        self.flow_element("paragraph", units, pre=space, post=space,
                          element_id=eid)

    def add_bullet(self, plan: BulletPlan):
        eid = self.new_element_id()
        px = self.text_px(1.0)
        color = hex_to_rgb(self.plan.text_color)
        indent = max(6, self.px(plan.margin_offset * 0.5))
        glyph_sample = plan.glyph + " x"
        font_path, _ = self.font_for("regular", glyph_sample, px)
        step = round(line_height(font_path, px) * plan.line_spacing)
        units = []
        for idx in plan.sentence_indices:
            text_w = self.col_w - indent
            m = measure_text([plan.glyph] + self.sentences[idx].split(),
                             font_path, px, text_w)
            units.extend(self._line_units(m.lines, font_path, px, color,
                                          "left", eid, step=step,
                                          indent=indent))
        space = self.px(plan.block_spacing)
        self.flow_element("bullet", units, pre=space, post=space,
                          element_id=eid)

    def add_equation(self, plan: EquationPlan):
        eid = self.new_element_id()
        px = self.text_px(1.0)
        script_px = max(5, round(px * 0.7))
        color = hex_to_rgb(self.plan.text_color)
        sample = "".join(g.base + g.script_text for g in plan.groups)
        font_path, _ = self.font_for("regular", sample, px)
        italic_path, _ = self.font_for("italic", sample, px)
        ascent, _ = FontSet.load(font_path, px).getmetrics()
        lh = line_height(font_path, px)
        sup_rise = round(0.38 * ascent)
        sub_drop = round(0.22 * ascent)
        unit_h = sup_rise + lh + sub_drop
        gap = max(2, round(px * 0.18))

        # assemble positioned runs, wrapping at group boundaries
        lines: list[list[tuple[int, int, str, str, int]]] = [[]]
        cursor = 0
        for g in plan.groups:
            base_font = italic_path if g.base.isalpha() and ord(g.base) < 0x250 \
                else font_path
            base_w = FontSet.load(base_font, px).getlength(g.base)
            script_w = 0.0
            if g.script:
                script_w = FontSet.load(font_path, script_px).getlength(
                    g.script_text)
            total = base_w + script_w
            if cursor > 0 and cursor + gap + total > self.col_w:
                lines.append([])
                cursor = 0
            elif cursor > 0:
                cursor += gap
            runs = lines[-1]
            runs.append((round(cursor), 0, g.base, base_font, px))
            if g.script:
                dy = -sup_rise if g.script == "sup" else sub_drop
                runs.append((round(cursor + base_w), dy, g.script_text,
                             font_path, script_px))
            cursor += total

        units = []
        for runs in lines:
            if not runs:
                continue
            def place(page, x, y, runs=runs):
                payloads, inks = [], []
                widths = []
                for rx, dy, text, fpath, fpx in runs:
                    bbox = FontSet.load(fpath, fpx).getbbox(text)
                    widths.append(rx + (bbox[2] if bbox else 0))
                line_w = max(widths) if widths else 1
                off = max((self.col_w - line_w) // 2, 0)
                for rx, dy, text, fpath, fpx in runs:
                    draw_x = x + off + rx
                    draw_y = y + sup_rise + dy
                    payloads.append(TextRun(
                        page=page, x=draw_x, y=draw_y, text=text,
                        font_path=fpath, px=fpx, color=color, element_id=eid))
                    bbox = FontSet.load(fpath, fpx).getbbox(text)
                    if bbox:
                        inks.append((draw_x + bbox[0], draw_y + bbox[1],
                                     draw_x + bbox[2], draw_y + bbox[3]))
                if inks:
                    ink = (min(i[0] for i in inks), min(i[1] for i in inks),
                           max(i[2] for i in inks), max(i[3] for i in inks))
                else:
                    ink = None
                return payloads, ink, None
            units.append(_Unit(height=unit_h, place=place))

        self.flow_element("equation", units, pre=self.px(plan.pre_space),
                          post=self.px(plan.post_space), element_id=eid)

    def add_caption(self, plan: CaptionPlan, host_kind: str, host_number: int,
                    parent_id: int):
        eid = self.new_element_id()
        px = max(6, round(self.base_px * 0.85))
        color = hex_to_rgb(self.plan.text_color)
        label = ("Figure" if host_kind == "figure" else "Table")
        words = [f"{label}", f"{host_number}:"]
        for line in plan.tokens:
            words.extend(self.words(line))
        font_path, _ = self.font_for("regular", " ".join(words), px)
        measured = measure_text(words, font_path, px, self.col_w)
        # captions never split: one atomic unit containing all lines
        lh = line_height(font_path, px)
        total_h = lh * len(measured.lines)

        def place(page, x, y):
            payloads, inks = [], []
            for i, line in enumerate(measured.lines):
                off = max((self.col_w - line.ink_w) // 2, 0)
                draw_x = x + off - line.ink[0]
                draw_y = y + i * lh
                payloads.append(TextRun(
                    page=page, x=draw_x, y=draw_y, text=line.text,
                    font_path=font_path, px=px, color=color, element_id=eid))
                inks.append((draw_x + line.ink[0], draw_y + line.ink[1],
                             draw_x + line.ink[2], draw_y + line.ink[3]))
            ink = (min(i[0] for i in inks), min(i[1] for i in inks),
                   max(i[2] for i in inks), max(i[3] for i in inks)) \
                if inks else None
            return payloads, ink, None

        self.flow_element("caption", [_Unit(height=total_h, place=place)],
                          pre=self.px(0.3), post=self.px(0.3),
                          parent_id=parent_id, element_id=eid)

    def add_figure(self, plan: FigurePlan):
        self.figure_counter += 1
        number = self.figure_counter
        eid = self.new_element_id()
        fig_w = max(32, round(plan.width_fraction * self.col_w))
        fig_h = max(32, round(plan.height_fraction *
                              (self.body_y1 - self.body_y0)))
        col_h = self._column_height()
        if fig_h > col_h:
            factor = col_h / fig_h
            if factor < 0.75:
                raise ElementTooLargeForPage(
                    f"figure of {fig_h}px cannot fit column of {col_h}px")
            fig_w = max(32, round(fig_w * factor))
            fig_h = max(32, round(fig_h * factor))

        caption_above = plan.caption is not None and plan.caption.position == "above"
        if caption_above:
            self.add_caption(plan.caption, "figure", number, eid)

        if plan.source == "image":
            path = self.template.resources.images[plan.image_index]
            from PIL import Image

            with Image.open(path) as im:
                iw, ih = im.size
            scale = min(fig_w / iw, fig_h / ih)
            draw_w = max(16, round(iw * scale))
            draw_h = max(16, round(ih * scale))

            def place(page, x, y):
                off_x = (self.col_w - draw_w) // 2
                payload = ImagePayload(page=page, x=x + off_x, y=y,
                                       w=draw_w, h=draw_h, path=str(path),
                                       element_id=eid)
                ink = (x + off_x, y, x + off_x + draw_w, y + draw_h)
                return [payload], ink, None

            units = [_Unit(height=draw_h, place=place)]
        else:
            palette = [hex_to_rgb(c) for c in
                       self.template.resources.palette["accent"]]
            axis = hex_to_rgb(self.plan.text_color)

            def place(page, x, y):
                off_x = (self.col_w - fig_w) // 2
                payload = ChartPayload(page=page, x=x + off_x, y=y,
                                       w=fig_w, h=fig_h,
                                       subplots=plan.subplots,
                                       palette=palette, axis_color=axis,
                                       element_id=eid)
                ink = (x + off_x, y, x + off_x + fig_w, y + fig_h)
                return [payload], ink, None

            units = [_Unit(height=fig_h, place=place)]

        self.flow_element("figure", units, pre=self.px(0.6),
                          post=self.px(0.4), element_id=eid)
        if plan.caption is not None and not caption_above:
            self.add_caption(plan.caption, "figure", number, eid)

    def add_table(self, plan: TablePlan):
        self.table_counter += 1
        number = self.table_counter
        eid = self.new_element_id()
        caption_above = plan.caption is not None and plan.caption.position == "above"
        if caption_above:
            self.add_caption(plan.caption, "table", number, eid)
        layout = layout_table(self, plan, eid)
        self.flow_element("table", layout.units, pre=self.px(plan.pre_space),
                          post=self.px(plan.post_space),
                          decorate=layout.decorate, element_id=eid)
        if plan.caption is not None and not caption_above:
            self.add_caption(plan.caption, "table", number, eid)

    # --- title and bands -----------------------------------------------------------

    def place_title(self):
        title = self.plan.title
        if title is None:
            return
        # title spans the full printable width above the column flow
        saved_col_w = self.col_w
        self.col_w = self.body_x1 - self.body_x0
        try:
            self._decorated_text("title", title.style, title.tokens)
        finally:
            self.col_w = saved_col_w
        self.flow_top_page0 = min(self.y, self.body_y1)
        self.col_i = 0
        self.y = self.flow_top_page0

    def place_bands(self):
        for band, plan_band in (("header", self.plan.header),
                                ("footer", self.plan.footer)):
            if plan_band is None:
                continue
            px = max(6, round(self.base_px * plan_band.font_scale))
            color = hex_to_rgb(plan_band.color)
            band_w = self.body_x1 - self.body_x0
            cell_w = band_w // plan_band.columns
            for page in range(len(self.pages)):
                eid = self.new_element_id()
                inks = []
                for c, cell in enumerate(plan_band.cells):
                    if cell.content_type == "empty":
                        continue
                    text = cell.text
                    if cell.content_type == "page_number":
                        text = str(page + 1)
                    if not text:
                        continue
                    font_path, _ = self.font_for("regular", text, px)
                    f = FontSet.load(font_path, px)
                    text = _fit_text(text, f, cell_w)
                    if not text:
                        continue
                    bbox = f.getbbox(text)
                    if bbox is None:
                        continue
                    lh = line_height(font_path, px)
                    x0 = self.body_x0 + c * cell_w
                    if cell.align == "center":
                        off = max((cell_w - (bbox[2] - bbox[0])) // 2, 0)
                    elif cell.align == "right":
                        off = max(cell_w - (bbox[2] - bbox[0]), 0)
                    else:
                        off = 0
                    if band == "header":
                        y = max(2, (self.margin_px - lh) // 2)
                    else:
                        y = self.H - self.margin_px + max(
                            2, (self.margin_px - lh) // 2)
                    draw_x = x0 + off - bbox[0]
                    self.placed.append(TextRun(
                        page=page, x=draw_x, y=y, text=text,
                        font_path=font_path, px=px, color=color,
                        element_id=eid))
                    inks.append((draw_x + bbox[0], y + bbox[1],
                                 draw_x + bbox[2], y + bbox[3]))
                if inks:
                    x0 = min(i[0] for i in inks)
                    y0 = min(i[1] for i in inks)
                    x1 = max(i[2] for i in inks)
                    y1 = max(i[3] for i in inks)
                    self.elements.append(LayoutElement(
                        category="header_footer",
                        box=PageBox(page, x0, y0, x1 - x0, y1 - y0).validate(
                            self.W, self.H),
                        element_id=eid))

    # --- top level ---------------------------------------------------------------------

    def run(self) -> ComposedDocument:
        self._new_page()
        self.place_title()
        for element in self.plan.body:
            if isinstance(element, SectionPlan):
                self.add_section(element)
            elif isinstance(element, TablePlan):
                self.add_table(element)
            elif isinstance(element, FigurePlan):
                self.add_figure(element)
            elif isinstance(element, ParagraphPlan):
                self.add_paragraph(element)
            elif isinstance(element, BulletPlan):
                self.add_bullet(element)
            elif isinstance(element, EquationPlan):
                self.add_equation(element)
            else:
                raise TypeError(f"unknown element {type(element)}")
        self.place_bands()
        return ComposedDocument(pages=self.pages, placed=self.placed,
                                element_boxes=self.elements)


# --- table layout -----------------------------------------------------------------


@dataclass
class _TableLayout:
    units: list[_Unit]
    decorate: Callable


def layout_table(composer: _Composer, plan: TablePlan, eid: int) -> _TableLayout:
    """Build row units and the border/cell decorator for one table.

    Cell boxes tile the table interior exactly: widths are rounded from the
    sampled fractions with the last cell absorbing the remainder, and each
    row's height follows its tallest (possibly wrapped) cell.
    """
    c = composer
    table_w = max(c.px(2.0), round(plan.width_fraction * c.col_w))
    if plan.alignment == "center":
        x_off = (c.col_w - table_w) // 2
    elif plan.alignment == "right":
        x_off = c.col_w - table_w
    else:
        x_off = 0

    h_pad = c.px(plan.h_pad)
    v_pad = c.px(plan.v_pad)
    px = c.text_px(0.95)
    widths = [round(f * table_w) for f in plan.cell_width_fractions]
    widths[-1] = table_w - sum(widths[:-1])
    x_cells = [0]
    for w in widths[:-1]:
        x_cells.append(x_cells[-1] + w)

    resources = c.template.resources

    def cell_text(cell):
        if cell.line_count == 0:
            return []
        if cell.qa_role == "question":
            return resources.questions[cell.qa_index].split()
        if cell.qa_role == "answer":
            return resources.answers[cell.qa_index].split()
        return c.words(cell.tokens)

    units = []
    for r, row in enumerate(plan.cells):
        measured_cells = []
        content_h = 0
        for ci, cell in enumerate(row):
            tokens = cell_text(cell)
            if not tokens:
                measured_cells.append((cell, None, None))
                continue
            font_path, _ = c.font_for(cell.font_style, " ".join(tokens), px)
            avail = max(8, widths[ci] - 2 * h_pad)
            m = measure_text(tokens, font_path, px, avail)
            del m.lines[8:]  # pathologically narrow cells truncate
            measured_cells.append((cell, m, font_path))
            lh = line_height(font_path, px)
            content_h = max(content_h, lh * len(m.lines))
        if content_h == 0:
            content_h = line_height(
                str(c.family.file_for("regular")), px)
        row_h = content_h + 2 * v_pad

        def place(page, x, y, row_h=row_h, measured_cells=measured_cells):
            payloads = []
            tx = x + x_off
            for ci, (cell, m, font_path) in enumerate(measured_cells):
                if m is None:
                    continue
                lh = line_height(font_path, px)
                avail = widths[ci] - 2 * h_pad
                for li, line in enumerate(m.lines):
                    if cell.align == "center":
                        off = max((avail - line.ink_w) // 2, 0)
                    elif cell.align == "right":
                        off = max(avail - line.ink_w, 0)
                    else:
                        off = 0
                    payloads.append(TextRun(
                        page=page,
                        x=tx + x_cells[ci] + h_pad + off - line.ink[0],
                        y=y + v_pad + li * lh,
                        text=line.text, font_path=font_path, px=px,
                        color=hex_to_rgb(c.plan.text_color),
                        element_id=eid))
            ink = (tx, y, tx + table_w, y + row_h)
            meta = {"cells": [
                (tx + x_cells[ci], y, widths[ci], row_h)
                for ci in range(len(widths))
            ]}
            return payloads, ink, meta

        units.append(_Unit(height=row_h, place=place))

    border_color = hex_to_rgb("#4a4a4a")

    def decorate(page, col, frag_units, box, eid_, frag_index):
        if box is None:
            return None
        extra = []
        bx, by, bw, bh = box.x, box.y, box.w, box.h
        mode = plan.borders
        if mode in ("grid", "cells"):
            extra.append(RectOutline(page=page, x=bx, y=by, w=bw, h=bh,
                                     color=border_color, width=1,
                                     element_id=eid_))
        for u in frag_units:
            cells = u.meta["cells"]
            row_bottom = u.y + u.height
            is_first = u is frag_units[0] and frag_index == 0
            if mode in ("rows",) or (mode == "header" and is_first):
                extra.append(LineSeg(page=page, x0=bx, y0=row_bottom - 1,
                                     x1=bx + bw, y1=row_bottom - 1,
                                     color=border_color, width=1,
                                     element_id=eid_))
            if mode in ("grid", "cells") and u is not frag_units[-1]:
                extra.append(LineSeg(page=page, x0=bx, y0=row_bottom - 1,
                                     x1=bx + bw, y1=row_bottom - 1,
                                     color=border_color, width=1,
                                     element_id=eid_))
            for (cx, cy, cw, ch) in cells:
                c.elements.append(LayoutElement(
                    category="table_cell",
                    box=PageBox(page, cx, cy, cw, ch).validate(c.W, c.H),
                    element_id=c.new_element_id(), parent_id=eid_,
                    fragment_index=frag_index))
        if mode in ("columns", "grid", "cells"):
            for cx in x_cells[1:]:
                extra.append(LineSeg(page=page, x0=bx + cx, y0=by,
                                     x1=bx + cx, y1=by + bh,
                                     color=border_color, width=1,
                                     element_id=eid_))
        c.placed.extend(extra)
        return box

    return _TableLayout(units=units, decorate=decorate)


def compose(plan: DocumentPlan, template,
            page_geometry: PageGeometry | None = None) -> ComposedDocument:
    """Compose a plan onto page lattices; see module docstring."""
    geometry = page_geometry if page_geometry is not None else plan.page
    return _Composer(plan, template, geometry).run()
