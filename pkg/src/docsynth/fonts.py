"""Font file resolution, glyph coverage and cached raster handles.

Rasterization is self-contained: only font files named by the template are
used, located in the template directory, ``DOCSYNTH_FONT_DIR``, or the
known bundled-font locations (matplotlib ships the DejaVu family).  Coverage
is read from each file's character map so glyph fallback can be decided
before any drawing happens.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass, field
from pathlib import Path

from fontTools.ttLib import TTFont
from PIL import ImageFont

from docsynth.errors import FontGlyphMissing, FontResolutionFailed

__all__ = ["FontFamily", "FontSet", "resolve_font_file", "FONT_STYLES"]

FONT_STYLES = ("regular", "bold", "italic", "bold_italic")


def _candidate_dirs() -> list[Path]:
    dirs = []
    env = os.environ.get("DOCSYNTH_FONT_DIR")
    if env:
        dirs.append(Path(env))
    try:
        import matplotlib

        dirs.append(Path(matplotlib.get_data_path()) / "fonts" / "ttf")
    except ImportError:
        pass
    dirs.extend(
        Path(p)
        for p in (
            "/usr/share/fonts/truetype/dejavu",
            "/usr/local/share/fonts",
        )
    )
    return dirs


def resolve_font_file(ref: str, search_dirs=()) -> Path:
    """Locate a font file by path or bare filename."""
    p = Path(ref)
    if p.is_file():
        return p
    for d in list(search_dirs) + _candidate_dirs():
        cand = Path(d) / ref
        if cand.is_file():
            return cand
    raise FontResolutionFailed(ref)


@dataclass
class FontFamily:
    """A named family with one file per style variant."""

    name: str
    files: dict[str, Path]  # style -> resolved file path

    def file_for(self, style: str) -> Path:
        if style in self.files:
            return self.files[style]
        return self.files["regular"]


@functools.lru_cache(maxsize=512)
def _load_font(path: str, px: int) -> ImageFont.FreeTypeFont:
    return ImageFont.truetype(path, px)


@functools.lru_cache(maxsize=64)
def _cmap(path: str) -> frozenset:
    font = TTFont(path, lazy=True)
    try:
        return frozenset(font.getBestCmap().keys())
    finally:
        font.close()


class FontSet:
    """Ordered fallback list of families for one template."""

    def __init__(self, families: list[FontFamily]):
        if not families:
            raise FontResolutionFailed("<empty font list>")
        self.families = families

    def family(self, index_or_name) -> FontFamily:
        if isinstance(index_or_name, int):
            return self.families[index_or_name]
        for fam in self.families:
            if fam.name == index_or_name:
                return fam
        raise FontResolutionFailed(str(index_or_name))

    def covers(self, path: Path, text: str) -> bool:
        cm = _cmap(str(path))
        return all(ord(ch) in cm or ch.isspace() for ch in text)

    def pick_file(self, preferred: FontFamily, style: str, text: str) -> Path:
        """The preferred family's variant, falling back down the list.

        Raises :class:`FontGlyphMissing` when no configured file covers every
        non-space codepoint of ``text``.
        """
        ordered = [preferred] + [f for f in self.families if f is not preferred]
        for fam in ordered:
            path = fam.file_for(style)
            if self.covers(path, text):
                return path
        for ch in text:
            if not ch.isspace() and not any(
                ord(ch) in _cmap(str(f.file_for(style))) for f in ordered
            ):
                raise FontGlyphMissing(ch)
        raise FontGlyphMissing(text[:1])

    @staticmethod
    def load(path: Path, px: int) -> ImageFont.FreeTypeFont:
        return _load_font(str(path), int(px))
