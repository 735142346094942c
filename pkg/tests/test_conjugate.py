import json
import math

import numpy as np
import pytest

from docsynth.errors import (
    DimensionMismatch,
    NegativeCount,
    ObservationBelowLocation,
    ParseError,
    UnknownNode,
    UnsupportedFamily,
)
from docsynth.probnet import (
    DistributionSpec,
    Family,
    NodeRef,
    ObservationSet,
    Registry,
    RngStream,
    posterior_infer,
    posterior_update_beta,
    posterior_update_dirichlet,
    posterior_update_gamma_exponential,
    posterior_update_normal,
    read_observations,
)
from oracles import (
    beta_posterior_moments,
    gamma_exponential_posterior_moments,
    inverse_gamma_posterior_moments,
    normal_mean_posterior_moments,
)


# --- Dirichlet: exact additive updates ----------------------------------------


def test_dirichlet_no_observations_returns_prior():
    assert posterior_update_dirichlet([1, 1, 1], [0, 0, 0]).tolist() == [1, 1, 1]


def test_dirichlet_additive_update():
    assert posterior_update_dirichlet([2, 3], [5, 7]).tolist() == [7.0, 10.0]
    assert posterior_update_dirichlet([0.5, 0.5, 0.5], [10, 0, 2]).tolist() == [
        10.5,
        0.5,
        2.5,
    ]


def test_dirichlet_update_errors():
    with pytest.raises(DimensionMismatch):
        posterior_update_dirichlet([1, 1], [1, 1, 1])
    with pytest.raises(NegativeCount):
        posterior_update_dirichlet([1, 1], [1, -1])
    with pytest.raises(NegativeCount):
        posterior_update_dirichlet([1, 1], [1.5, 0])


def test_dirichlet_exactness_randomized():
    g = RngStream(101, (0,)).generator
    for _ in range(200):
        k = int(g.integers(2, 8))
        alpha = g.uniform(0.1, 20, size=k)
        counts = g.integers(0, 1000, size=k)
        out = posterior_update_dirichlet(alpha, counts)
        assert np.array_equal(out, alpha + counts)


# --- Beta ----------------------------------------------------------------------


def test_beta_no_observations():
    assert posterior_update_beta(1, 1, 0, 0) == (1.0, 1.0)


def test_beta_update_matches_grid_oracle():
    a, b = posterior_update_beta(2, 2, 3, 1)
    assert (a, b) == (5.0, 3.0)
    mean, var = beta_posterior_moments(2, 2, 3, 1)
    assert math.isclose(mean, a / (a + b), rel_tol=1e-6)
    assert math.isclose(var, a * b / ((a + b) ** 2 * (a + b + 1)), rel_tol=1e-5)


def test_beta_lopsided_posterior_mean():
    a, b = posterior_update_beta(1, 1, 1000, 0)
    assert math.isclose(a / (a + b), 1001 / 1002, rel_tol=1e-12)
    mean, _ = beta_posterior_moments(1, 1, 1000, 0)
    assert math.isclose(mean, 1001 / 1002, rel_tol=1e-4)


def test_beta_negative_count():
    with pytest.raises(NegativeCount):
        posterior_update_beta(1, 1, -1, 0)


# --- Gamma-exponential -----------------------------------------------------------


def test_gamma_exponential_empty_keeps_prior():
    assert posterior_update_gamma_exponential(2.0, 0.5, [], 1.0) == (2.0, 0.5)


def test_gamma_exponential_rate_form_example():
    # prior shape 1, stored scale 1 (rate-form rate 1); excesses 1 and 3
    a, scale = posterior_update_gamma_exponential(1.0, 1.0, [1.0, 3.0], 0.0)
    assert a == 3.0
    assert math.isclose(scale, 1.0 / 5.0, rel_tol=1e-12)


def test_gamma_exponential_matches_grid_oracle():
    a0, scale0, loc = 2.0, 0.8, 5.0
    obs = [5.5, 7.0, 6.2, 9.1]
    a, scale = posterior_update_gamma_exponential(a0, scale0, obs, loc)
    excess = sum(v - loc for v in obs)
    mean_o, var_o = gamma_exponential_posterior_moments(a0, scale0, excess, len(obs))
    assert math.isclose(mean_o, a * scale, rel_tol=1e-3)
    assert math.isclose(var_o, a * scale**2, rel_tol=1e-3)


def test_gamma_exponential_predictive_converges_to_sample_mean():
    g = RngStream(55, (1,)).generator
    loc, true_mean_excess = 2.0, 3.5
    obs = loc + g.exponential(true_mean_excess, size=10_000)
    a, scale = posterior_update_gamma_exponential(2.0, 1.0, obs, loc)
    predictive_mean = 1.0 / (scale * (a - 1.0))
    sample_mean = float(np.mean(obs - loc))
    assert math.isclose(predictive_mean, sample_mean, rel_tol=5e-3)


def test_gamma_exponential_rejects_below_location():
    with pytest.raises(ObservationBelowLocation):
        posterior_update_gamma_exponential(1.0, 1.0, [0.5], 1.0)


# --- Normal semi-conjugate --------------------------------------------------------


def test_normal_zero_observations_unchanged():
    assert posterior_update_normal(1.0, 2.0, 3.0, 4.0, []) == (1.0, 2.0, 3.0, 4.0)


def test_normal_flat_prior_tracks_sample_mean():
    g = RngStream(77, (0,)).generator
    sigma = 2.0
    obs = g.normal(10.0, sigma, size=100)
    mu, _, _, _ = posterior_update_normal(0.0, 1e12, 3.0, 2.0 * sigma**2, obs)
    assert abs(mu - float(obs.mean())) <= 3 * sigma / math.sqrt(100)


def test_normal_degenerate_repeated_observation():
    obs = [4.2] * 5000
    mu, s20, a, b = posterior_update_normal(0.0, 1.0, 2.0, 2.0, obs)
    assert math.isclose(mu, 4.2, rel_tol=1e-3)
    assert b / (a - 1) < 1e-2  # posterior variance mean collapses toward zero
    assert s20 < 1e-3


def test_normal_sweep_matches_conditional_grid_oracles():
    g = RngStream(78, (0,)).generator
    for _ in range(5):
        mu0 = float(g.uniform(-5, 5))
        s20 = float(g.uniform(0.5, 4.0))
        a0 = float(g.uniform(2.5, 6.0))
        b0 = float(g.uniform(1.0, 5.0))
        obs = g.normal(mu0 + 1.0, 1.5, size=int(g.integers(5, 40)))
        mu, s20_star, a, b = posterior_update_normal(mu0, s20, a0, b0, obs)

        sigma2_hat = b0 / (a0 - 1.0)
        mean_o, var_o = normal_mean_posterior_moments(mu0, s20, sigma2_hat, obs)
        assert math.isclose(mean_o, mu, rel_tol=1e-2, abs_tol=1e-3)
        assert math.isclose(var_o, s20_star, rel_tol=1e-2)

        vmean_o, vvar_o = inverse_gamma_posterior_moments(a0, b0, mu, obs)
        assert math.isclose(vmean_o, b / (a - 1), rel_tol=1e-2)
        assert math.isclose(vvar_o, b**2 / ((a - 1) ** 2 * (a - 2)), rel_tol=1e-2)


# --- posterior_infer over a registry ----------------------------------------------


def _registry():
    nodes = [
        NodeRef(
            "columns",
            DistributionSpec(
                Family.DIRICHLET_CATEGORICAL, {"alpha": [2.0, 2.0, 2.0]},
                values=[1, 2, 3],
            ),
        ),
        NodeRef(
            "header",
            DistributionSpec(Family.BETA_BERNOULLI, {"a": 2.0, "b": 2.0}),
        ),
        NodeRef(
            "font_size",
            DistributionSpec(
                Family.SHIFTED_EXPONENTIAL, {"loc": 8.0, "shape": 2.0, "scale": 1.0}
            ),
        ),
        NodeRef(
            "margin",
            DistributionSpec(
                Family.NORMAL_NIG,
                {"mu0": 0.1, "sigma2_0": 0.01, "a0": 3.0, "b0": 0.02},
            ),
        ),
        NodeRef(
            "body_count",
            DistributionSpec(Family.POISSON, {"rate": 6.0}, support=(1, math.inf)),
        ),
    ]
    return Registry.from_nodes(nodes)


def test_infer_empty_dataset_is_identity():
    reg = _registry()
    out = posterior_infer([], reg)
    assert set(out) == set(reg.ids())
    for node in reg:
        assert out[node.id].params == node.spec.params


def test_infer_touches_only_observed_nodes():
    reg = _registry()
    out = posterior_infer([ObservationSet("columns", [0, 0, 1])], reg)
    assert out["columns"].params["alpha"] == [4.0, 3.0, 2.0]
    for other in ("header", "font_size", "margin"):
        assert out[other].params == reg[other].spec.params


def test_infer_monte_carlo_round_trip():
    reg = _registry()
    truth = np.array([0.6, 0.3, 0.1])
    g = RngStream(91, (0,)).generator
    draws = g.choice(3, size=1000, p=truth)
    out = posterior_infer([ObservationSet("columns", draws.tolist())], reg)
    alpha = np.asarray(out["columns"].params["alpha"])
    post_mean = alpha / alpha.sum()
    assert np.all(np.abs(post_mean - truth) <= 0.03)


def test_infer_unknown_node_and_unsupported_family():
    reg = _registry()
    with pytest.raises(UnknownNode):
        posterior_infer([ObservationSet("ghost", [1])], reg)
    with pytest.raises(UnsupportedFamily):
        posterior_infer([ObservationSet("body_count", [3, 4])], reg)


def test_infer_registry_not_mutated():
    reg = _registry()
    before = [float(a) for a in reg["columns"].spec.params["alpha"]]
    posterior_infer([ObservationSet("columns", [0, 1, 2, 0])], reg)
    assert reg["columns"].spec.params["alpha"] == before


# --- observation file ingestion -----------------------------------------------------


def test_read_observations_groups_by_node(tmp_path):
    path = tmp_path / "obs.jsonl"
    lines = [
        {"node_id": "columns", "category_index": 1},
        {"node_id": "margin", "value": 0.12},
        {"node_id": "columns", "category_index": 0},
        {"node_id": "margin", "value": 0.09},
    ]
    path.write_text("\n".join(json.dumps(r) for r in lines), encoding="utf-8")
    sets = read_observations(path)
    assert [(s.node_id, s.values) for s in sets] == [
        ("columns", [1, 0]),
        ("margin", [0.12, 0.09]),
    ]


def test_read_observations_parse_errors(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("{not json}\n", encoding="utf-8")
    with pytest.raises(ParseError):
        read_observations(bad)
    missing = tmp_path / "missing.jsonl"
    missing.write_text(json.dumps({"node_id": "x"}) + "\n", encoding="utf-8")
    with pytest.raises(ParseError):
        read_observations(missing)
