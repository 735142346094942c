"""Stochastic template registry: loading, validation, selection, presets."""

from docsynth.templates.loader import (
    BUNDLED_PRESETS,
    bundled_preset_path,
    load_mixture,
    load_template,
    rebuild_template,
)
from docsynth.templates.spec import (
    PageSpec,
    TemplateMixture,
    TemplateResources,
    TemplateSpec,
    apply_preset_overrides,
    choose_template,
)

__all__ = [
    "BUNDLED_PRESETS",
    "PageSpec",
    "TemplateMixture",
    "TemplateResources",
    "TemplateSpec",
    "apply_preset_overrides",
    "bundled_preset_path",
    "choose_template",
    "load_mixture",
    "load_template",
    "rebuild_template",
]
