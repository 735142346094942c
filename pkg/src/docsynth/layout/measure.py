"""Text measurement: greedy line breaking and tight ink extents.

Widths come from the rasterizer's own advance table (so wrap decisions agree
with what rendering produces), and each assembled line is verified against
its ink bounding box, which can exceed the advance sum by a few pixels for
oblique faces.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from docsynth.errors import TokenWiderThanColumn
from docsynth.fonts import FontSet

__all__ = ["MeasuredLine", "MeasuredText", "measure_text", "line_height"]


@dataclass
class MeasuredLine:
    text: str
    advance: float
    ink: tuple[int, int, int, int]  # relative to the "la" layout origin

    @property
    def ink_w(self) -> int:
        return self.ink[2] - self.ink[0]


@dataclass
class MeasuredText:
    lines: list[MeasuredLine]
    extent: tuple[int, int]  # tight ink (w, h) of the stacked lines


@functools.lru_cache(maxsize=65536)
def _advance(font_path: str, px: int, text: str) -> float:
    return FontSet.load(font_path, px).getlength(text)


def _ink_bbox(font_path: str, px: int, text: str):
    return FontSet.load(font_path, px).getbbox(text)


def line_height(font_path: str, px: int) -> int:
    ascent, descent = FontSet.load(font_path, px).getmetrics()
    return ascent + descent


def _force_break(token: str, font_path: str, px: int, max_width: int):
    """Split one over-wide token at glyph boundaries; each piece fits."""
    pieces = []
    rest = token
    while rest:
        n = len(rest)
        while n > 1 and _advance(font_path, px, rest[:n]) > max_width:
            n -= 1
        pieces.append(rest[:n])
        rest = rest[n:]
    return pieces


def measure_text(tokens, font_path, px: int, max_width: int,
                 strict: bool = False) -> MeasuredText:
    """Greedy first-fit line breaking at token boundaries.

    Tokens wider than ``max_width`` raise :class:`TokenWiderThanColumn` when
    ``strict``, otherwise they are force-broken at glyph boundaries.  Returns
    measured lines and the tight ink extent of the stacked block.
    """
    font_path = str(font_path)
    space_w = _advance(font_path, px, " ")

    words: list[str] = []
    for tok in tokens:
        tok = str(tok)
        if not tok:
            continue
        if _advance(font_path, px, tok) > max_width:
            if strict:
                raise TokenWiderThanColumn(tok, max_width)
            words.extend(_force_break(tok, font_path, px, max_width))
        else:
            words.append(tok)

    lines: list[MeasuredLine] = []
    current: list[str] = []
    current_w = 0.0

    def flush():
        nonlocal current, current_w
        if not current:
            return
        text = " ".join(current)
        bbox = _ink_bbox(font_path, px, text)
        # kerning/oblique overhang can push ink past the advance sum; shed
        # trailing tokens until the ink fits the column
        while bbox is not None and bbox[2] > max_width and len(current) > 1:
            words.insert(0, current.pop())
            text = " ".join(current)
            bbox = _ink_bbox(font_path, px, text)
        lines.append(MeasuredLine(
            text=text,
            advance=_advance(font_path, px, text),
            ink=tuple(bbox) if bbox else (0, 0, 0, 0),
        ))
        current = []
        current_w = 0.0

    while words:
        tok = words.pop(0)
        tok_w = _advance(font_path, px, tok)
        add = tok_w if not current else space_w + tok_w
        if current and current_w + add > max_width:
            flush()
            current = [tok]
            current_w = tok_w
        else:
            current.append(tok)
            current_w += add
    flush()

    if not lines:
        return MeasuredText(lines=[], extent=(0, 0))
    lh = line_height(font_path, px)
    w = max(line.ink_w for line in lines)
    h = (len(lines) - 1) * lh + lines[-1].ink[3] - lines[0].ink[1]
    return MeasuredText(lines=lines, extent=(w, max(h, 1)))
