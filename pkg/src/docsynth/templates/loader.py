"""Template and mixture loading from declarative YAML documents.

A template file may ``extends`` another (bundled presets share most of their
node table this way); node records from the child replace the parent's per
node id.  All resource references are resolved and read at load time so a
loaded template is guaranteed renderable.
"""

from __future__ import annotations

from pathlib import Path

import yaml

from docsynth.errors import (
    InvalidHyperparam,
    ParseError,
    UnresolvedResource,
)
from docsynth.fonts import FontFamily, FontSet, resolve_font_file, FONT_STYLES
from docsynth.subnets.catalog import build_registry
from docsynth.templates.spec import (
    PageSpec,
    TemplateMixture,
    TemplateResources,
    TemplateSpec,
)

__all__ = ["load_template", "load_mixture", "rebuild_template",
           "bundled_preset_path", "BUNDLED_PRESETS"]

_RESOURCE_ROOT = Path(__file__).resolve().parent.parent / "resources"
BUNDLED_PRESETS = ("scientific", "resume", "forms")

_IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp"}


def bundled_preset_path(name: str) -> Path:
    return _RESOURCE_ROOT / "templates" / f"{name}.yaml"


def _resolve_template_file(ref) -> Path:
    p = Path(ref)
    if p.is_file():
        return p
    if isinstance(ref, str) and ref in BUNDLED_PRESETS:
        bundled = bundled_preset_path(ref)
        if bundled.is_file():
            return bundled
    raise ParseError(ref, "template file not found")


def _read_yaml(path: Path) -> dict:
    try:
        with path.open(encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "?"
        raise ParseError(path, f"{where}: {getattr(exc, 'problem', exc)}") from exc
    if not isinstance(doc, dict):
        raise ParseError(path, "top level must be a mapping")
    return doc


def _merge_raw(parent: dict, child: dict) -> dict:
    merged = {k: v for k, v in parent.items() if k != "template_id"}
    for key, value in child.items():
        if key == "extends":
            continue
        if key == "nodes" and isinstance(value, dict):
            nodes = dict(merged.get("nodes", {}))
            for nid, record in value.items():
                nodes[nid] = record
            merged["nodes"] = nodes
        else:
            merged[key] = value
    return merged


def _resolve_resource(ref: str, base_dir: Path | None, template_id: str) -> Path:
    cand = Path(ref)
    if cand.is_file() or cand.is_dir():
        return cand
    for root in filter(None, (base_dir, _RESOURCE_ROOT)):
        c = Path(root) / ref
        if c.is_file() or c.is_dir():
            return c
    raise UnresolvedResource(template_id, ref)


def _read_lines(path: Path) -> list[str]:
    return [ln for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]


def rebuild_template(raw: dict, base_dir: Path | None,
                     source_id: str) -> TemplateSpec:
    """Construct and validate a TemplateSpec from a merged raw document."""
    template_id = raw.get("template_id", source_id)
    for required in ("page", "fonts", "palette", "corpus", "nodes"):
        if required not in raw:
            raise ParseError(source_id, f"missing section {required!r}")

    page = PageSpec(
        width=int(raw["page"]["width"]),
        height=int(raw["page"]["height"]),
        dpi=int(raw["page"]["dpi"]),
    ).validate(template_id)

    families = []
    for fam in raw["fonts"]:
        files = {}
        for style in FONT_STYLES:
            if style in fam:
                try:
                    files[style] = resolve_font_file(
                        fam[style], [base_dir] if base_dir else [])
                except Exception:
                    raise UnresolvedResource(template_id, fam[style]) from None
        if "regular" not in files:
            raise UnresolvedResource(template_id, f"{fam.get('name')}: regular face")
        families.append(FontFamily(name=fam["name"], files=files))
    fonts = FontSet(families)

    palette = {k: list(v) for k, v in raw["palette"].items()}
    for role in ("text", "background", "highlight", "accent"):
        if not palette.get(role):
            raise ParseError(source_id, f"palette.{role} missing or empty")

    corpus_ref = {k: str(v) for k, v in raw["corpus"].items()}
    vocabulary = _read_lines(
        _resolve_resource(corpus_ref["vocabulary"], base_dir, template_id))
    sentences = _read_lines(
        _resolve_resource(corpus_ref["sentences"], base_dir, template_id))
    if len(vocabulary) < 2 or not sentences:
        raise ParseError(source_id, "vocabulary/sentence corpora too small")
    questions = answers = []
    if "questions" in corpus_ref:
        questions = _read_lines(
            _resolve_resource(corpus_ref["questions"], base_dir, template_id))
    if "answers" in corpus_ref:
        answers = _read_lines(
            _resolve_resource(corpus_ref["answers"], base_dir, template_id))

    image_ref = raw.get("images")
    images: list[Path] = []
    if image_ref:
        img_dir = _resolve_resource(str(image_ref), base_dir, template_id)
        if not img_dir.is_dir():
            raise UnresolvedResource(template_id, str(image_ref))
        images = sorted(
            p for p in img_dir.rglob("*")
            if p.suffix.lower() in _IMAGE_SUFFIXES
        )

    table_content = raw.get("table_content", "tokens")
    if table_content not in ("tokens", "qa"):
        raise ParseError(source_id, f"table_content {table_content!r} unknown")
    if table_content == "qa" and (not questions or not answers):
        raise ParseError(source_id, "qa tables need questions/answers corpora")

    resources = TemplateResources(
        template_id=template_id, fonts=fonts, palette=palette,
        vocabulary=vocabulary, sentences=sentences,
        questions=questions, answers=answers, images=images,
        watermark_texts=list(raw.get("watermark_texts", ["DRAFT"])),
    )

    params = {nid: dict(record) for nid, record in raw["nodes"].items()}
    registry = build_registry(params, resources)

    return TemplateSpec(
        template_id=template_id,
        display_name=raw.get("display_name", template_id),
        page=page, params=params, corpus_ref=corpus_ref,
        image_library_ref=str(image_ref) if image_ref else None,
        table_content=table_content, resources=resources,
        registry=registry, raw=raw, base_dir=base_dir,
    )


def load_template(ref, _depth: int = 0) -> TemplateSpec:
    """Load one template file (or bundled preset name), following extends."""
    path = _resolve_template_file(ref)
    raw = _read_yaml(path)
    if _depth > 8:
        raise ParseError(path, "extends chain too deep")
    if raw.get("extends"):
        parent = load_template(
            _relative_ref(raw["extends"], path.parent), _depth + 1)
        raw = _merge_raw(parent.raw, raw)
    return rebuild_template(raw, path.parent, str(path))


def _relative_ref(ref: str, base_dir: Path):
    if Path(ref).is_file() or ref in BUNDLED_PRESETS:
        return ref
    cand = base_dir / ref
    return cand if cand.is_file() else ref


def load_mixture(ref) -> TemplateMixture:
    """Load a mixture file or wrap a single template as a one-template mixture."""
    path = _resolve_template_file(ref)
    raw = _read_yaml(path)
    if "mixture" not in raw:
        template = load_template(ref)
        return TemplateMixture(alpha=[1.0], templates=[template])

    mix = raw["mixture"]
    refs = mix.get("templates", [])
    if not refs:
        raise ParseError(path, "mixture.templates is empty")
    templates = [load_template(_relative_ref(str(r), path.parent)) for r in refs]
    alpha = mix.get("alpha", [1.0] * len(templates))
    try:
        return TemplateMixture(alpha=[float(a) for a in alpha], templates=templates)
    except InvalidHyperparam:
        raise
