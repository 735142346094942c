"""Template data model: hyperparameter bundles, resources, and selection.

A template bundles the hyperparameters of every network node with the
resources (fonts, palettes, corpora, image library) whose sizes fix the
dimensions of the discrete nodes.  A mixture is an ordered list of templates
under a Dirichlet prior over template choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from docsynth.errors import InvalidHyperparam, UnknownOverrideKey
from docsynth.fonts import FontSet
from docsynth.probnet import DistributionSpec, Registry, RngStream

__all__ = [
    "PageSpec",
    "TemplateResources",
    "TemplateSpec",
    "TemplateMixture",
    "choose_template",
    "apply_preset_overrides",
]


@dataclass
class PageSpec:
    width: int
    height: int
    dpi: int

    def validate(self, template_id: str) -> "PageSpec":
        if self.width <= 0 or self.height <= 0:
            raise InvalidHyperparam(template_id, "page", "dimensions must be positive")
        if not (50 <= self.dpi <= 600):
            raise InvalidHyperparam(template_id, "page.dpi",
                                    f"dpi {self.dpi} outside [50, 600]")
        return self


@dataclass
class TemplateResources:
    """Loaded assets that fix discrete node dimensions."""

    template_id: str
    fonts: FontSet
    palette: dict[str, list[str]]
    vocabulary: list[str]
    sentences: list[str]
    questions: list[str]
    answers: list[str]
    images: list[Path]
    watermark_texts: list[str]


@dataclass
class TemplateSpec:
    template_id: str
    display_name: str
    page: PageSpec
    params: dict[str, dict]          # node id -> raw hyperparameter record
    corpus_ref: dict[str, str]       # role -> file reference as written
    image_library_ref: str | None
    table_content: str               # "tokens" | "qa"
    resources: TemplateResources
    registry: Registry
    raw: dict = field(repr=False, default_factory=dict)  # merged source document
    base_dir: Path | None = field(repr=False, default=None)

    @property
    def node_specs(self) -> dict[str, DistributionSpec]:
        return {node.id: node.spec for node in self.registry}


@dataclass
class TemplateMixture:
    alpha: list[float]
    templates: list[TemplateSpec]

    def __post_init__(self):
        n = len(self.templates)
        if n < 1:
            raise InvalidHyperparam("<mixture>", "templates", "needs at least one")
        if len(self.alpha) != n:
            raise InvalidHyperparam(
                "<mixture>", "alpha",
                f"{len(self.alpha)} concentrations for {n} templates")
        if any(not (float(a) > 0) for a in self.alpha):
            raise InvalidHyperparam("<mixture>", "alpha",
                                    "concentrations must be strictly positive")

    @property
    def n_templates(self) -> int:
        return len(self.templates)


def choose_template(mixture: TemplateMixture, rng: RngStream):
    """Draw template probabilities, then the document's template index.

    Returns ``(index, realized_probabilities)``.
    """
    gen = rng.generator if isinstance(rng, RngStream) else rng
    if mixture.n_templates == 1:
        return 0, [1.0]
    probs = gen.dirichlet(np.asarray(mixture.alpha, dtype=float))
    index = int(gen.choice(probs.size, p=probs))
    return index, [float(p) for p in probs]


# Non-node override keys: path into the raw template document.
_RESOURCE_OVERRIDES = {
    "corpus.vocabulary": ("corpus", "vocabulary"),
    "corpus.sentences": ("corpus", "sentences"),
    "corpus.questions": ("corpus", "questions"),
    "corpus.answers": ("corpus", "answers"),
    "images": ("images",),
    "table_content": ("table_content",),
    "watermark_texts": ("watermark_texts",),
    "page.width": ("page", "width"),
    "page.height": ("page", "height"),
    "page.dpi": ("page", "dpi"),
    "display_name": ("display_name",),
}


def _split_node_key(key: str, node_ids) -> tuple[str, str] | None:
    # node ids contain dots; match the longest registered prefix
    parts = key.split(".")
    for cut in range(len(parts) - 1, 0, -1):
        nid = ".".join(parts[:cut])
        if nid in node_ids:
            return nid, ".".join(parts[cut:])
    return None


def apply_preset_overrides(base: TemplateSpec, overrides: dict) -> TemplateSpec:
    """Non-destructively apply dotted-key overrides to a template.

    Keys address either a node hyperparameter (``table.v_pad.scale``) or a
    resource/page entry (``corpus.vocabulary``).  The base template is left
    untouched; the result is fully re-validated.
    """
    from docsynth.templates.loader import rebuild_template  # avoids import cycle

    if not overrides:
        return rebuild_template(base.raw, base.base_dir, base.template_id)

    raw = _deep_copy(base.raw)
    node_ids = set(base.params.keys())
    for key, value in overrides.items():
        if key in _RESOURCE_OVERRIDES:
            path = _RESOURCE_OVERRIDES[key]
            target = raw
            for part in path[:-1]:
                target = target.setdefault(part, {})
            target[path[-1]] = value
            continue
        split = _split_node_key(key, node_ids)
        if split is None:
            raise UnknownOverrideKey(key)
        nid, fld = split
        if fld not in raw["nodes"][nid] and fld != "support":
            raise UnknownOverrideKey(key)
        raw["nodes"][nid][fld] = value
    return rebuild_template(raw, base.base_dir, base.template_id)


def _deep_copy(obj):
    if isinstance(obj, dict):
        return {k: _deep_copy(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_deep_copy(v) for v in obj]
    return obj
