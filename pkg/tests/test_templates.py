import numpy as np
import pytest
import yaml

from docsynth.errors import (
    MissingNodeParams,
    ParseError,
    UnknownOverrideKey,
    UnresolvedResource,
)
from docsynth.probnet import RngStream, draw_value, realize_params
from docsynth.templates import (
    BUNDLED_PRESETS,
    apply_preset_overrides,
    bundled_preset_path,
    choose_template,
    load_mixture,
    load_template,
)
from docsynth.subnets import NODE_CATALOG, sample_document_plan


def test_bundled_scientific_loads_with_single_template():
    mix = load_mixture("scientific")
    assert mix.n_templates == 1
    assert mix.alpha == [1.0]
    assert mix.templates[0].template_id == "scientific"


@pytest.mark.parametrize("name", BUNDLED_PRESETS)
def test_every_preset_covers_the_full_catalog(name):
    template = load_template(name)
    assert len(template.registry) == len(NODE_CATALOG)
    for node in NODE_CATALOG:
        assert node.id in template.registry


def test_missing_node_params_lists_ids(tmp_path):
    raw = yaml.safe_load(bundled_preset_path("scientific").read_text())
    del raw["nodes"]["table.rows"]
    raw["extends"] = None
    broken = tmp_path / "broken.yaml"
    broken.write_text(yaml.safe_dump(raw))
    with pytest.raises(MissingNodeParams) as err:
        load_template(broken)
    assert "table.rows" in err.value.node_ids


def test_unresolved_corpus_reference(tmp_path):
    raw = yaml.safe_load(bundled_preset_path("scientific").read_text())
    raw["corpus"]["vocabulary"] = "corpora/no_such_file.txt"
    broken = tmp_path / "broken.yaml"
    broken.write_text(yaml.safe_dump(raw))
    with pytest.raises(UnresolvedResource):
        load_template(broken)


def test_parse_error_carries_location(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("template_id: [unclosed\n")
    with pytest.raises(ParseError):
        load_template(bad)


def test_three_template_mixture_roundtrip(tmp_path):
    mixfile = tmp_path / "mix.yaml"
    mixfile.write_text(
        yaml.safe_dump(
            {
                "mixture": {
                    "alpha": [4.0, 2.0, 1.0],
                    "templates": ["scientific", "resume", "forms"],
                }
            }
        )
    )
    mix = load_mixture(mixfile)
    assert mix.n_templates == 3
    assert mix.alpha == [4.0, 2.0, 1.0]
    assert [t.template_id for t in mix.templates] == ["scientific", "resume", "forms"]


# --- template selection --------------------------------------------------------


def test_single_template_always_selected():
    mix = load_mixture("scientific")
    for i in range(20):
        idx, probs = choose_template(mix, RngStream(3, (i,)))
        assert idx == 0 and probs == [1.0]


def _mixture_with_alpha(alpha, tmp_path):
    mixfile = tmp_path / "m.yaml"
    names = ["scientific", "resume", "forms"][: len(alpha)]
    mixfile.write_text(
        yaml.safe_dump({"mixture": {"alpha": alpha, "templates": names}})
    )
    return load_mixture(mixfile)


def test_lopsided_selection_frequency(tmp_path):
    mix = _mixture_with_alpha([100.0, 1.0], tmp_path)
    n = 10_000
    hits = sum(
        choose_template(mix, RngStream(5, (i,)))[0] == 0 for i in range(n)
    )
    assert abs(hits / n - 100.0 / 101.0) <= 0.02


def test_symmetric_selection_frequency(tmp_path):
    mix = _mixture_with_alpha([1.0, 1.0, 1.0], tmp_path)
    n = 10_000
    counts = np.zeros(3)
    for i in range(n):
        counts[choose_template(mix, RngStream(6, (i,)))[0]] += 1
    assert np.all(np.abs(counts / n - 1.0 / 3.0) <= 0.02)


# --- preset overrides ------------------------------------------------------------


def test_empty_overrides_identity():
    base = load_template("scientific")
    out = apply_preset_overrides(base, {})
    assert out.params == base.params
    assert out.page == base.page
    assert out.table_content == base.table_content
    assert out.resources.vocabulary == base.resources.vocabulary


def test_override_is_non_destructive():
    base = load_template("scientific")
    before = dict(base.params["header.present"])
    out = apply_preset_overrides(
        base, {"header.present.a": 1e-9, "header.present.b": 1e9}
    )
    assert base.params["header.present"] == before
    assert out.params["header.present"]["a"] == 1e-9


def test_override_header_to_zero_suppresses_headers(tmp_path):
    base = load_template("scientific")
    out = apply_preset_overrides(
        base, {"header.present.a": 1e-9, "header.present.b": 1e9}
    )
    from docsynth.templates.spec import TemplateMixture

    mix = TemplateMixture(alpha=[1.0], templates=[out])
    assert all(
        sample_document_plan(mix, i, 17).header is None for i in range(300)
    )


def test_unknown_override_key_rejected():
    base = load_template("scientific")
    with pytest.raises(UnknownOverrideKey):
        apply_preset_overrides(base, {"table.ghost_field.limit": 1})
    with pytest.raises(UnknownOverrideKey):
        apply_preset_overrides(base, {"table.v_pad.nonsense": 1})


def test_doubling_padding_scale_doubles_mean_padding():
    base = load_template("scientific")
    doubled = apply_preset_overrides(
        base, {"table.v_pad.scale": base.params["table.v_pad"]["scale"] * 2}
    )
    n = 10_000

    def mean_pad(template, seed):
        spec = template.node_specs["table.v_pad"]
        g = RngStream(seed, (0,)).generator
        total = 0.0
        for _ in range(n):
            total += draw_value(spec, realize_params(spec, g), g)
        return total / n

    m1 = mean_pad(base, 21)
    m2 = mean_pad(doubled, 22)
    assert abs(m2 / m1 - 2.0) <= 0.05 * 2.0


def test_language_swap_via_corpus_override():
    base = load_template("scientific")
    out = apply_preset_overrides(
        base,
        {
            "corpus.vocabulary": "corpora/greek_vocab.txt",
            "corpus.sentences": "corpora/greek_sentences.txt",
        },
    )
    assert out.resources.vocabulary != base.resources.vocabulary
    assert any(ord(w[0]) > 0x370 for w in out.resources.vocabulary)
