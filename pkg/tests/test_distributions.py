import math

import numpy as np
import pytest
from scipy import integrate

from docsynth.errors import InvalidHyperparam, MissingTemplateParam
from docsynth.probnet import (
    DistributionSpec,
    Family,
    RngStream,
    draw_value,
    realize_params,
    sample_hierarchical,
)


def _gen(seed, *path):
    return RngStream(seed, tuple(path)).generator


def _draws(spec, n, seed=11):
    g = _gen(seed, 0)
    realized = realize_params(spec, g)
    return np.asarray(draw_value(spec, realized, g, size=n), dtype=float)


# --- spec'd sampling examples -------------------------------------------------


def test_dirichlet_huge_concentration_pins_category():
    spec = DistributionSpec(
        Family.DIRICHLET_CATEGORICAL, {"alpha": [1e9, 1.0, 1.0]}
    ).validate()
    g = _gen(3, 1)
    freq0 = 0
    for _ in range(100):
        realized = realize_params(spec, g)
        draws = draw_value(spec, realized, g, size=100)
        freq0 += int(np.sum(draws == 0))
    assert freq0 / 10_000 >= 0.999


def test_symmetric_beta_bernoulli_is_fair():
    spec = DistributionSpec(Family.BETA_BERNOULLI, {"a": 3.0, "b": 3.0}).validate()
    g = _gen(5, 2)
    hits = 0
    n = 100_000
    for _ in range(n // 1000):
        realized = realize_params(spec, g)
        hits += int(np.sum(draw_value(spec, realized, g, size=1000)))
    assert abs(hits / n - 0.5) <= 0.01


def test_shifted_exponential_respects_location():
    theta = 8.0
    spec = DistributionSpec(
        Family.SHIFTED_EXPONENTIAL, {"loc": theta, "shape": 4.0, "scale": 0.5}
    ).validate()
    draws = _draws(spec, 50_000)
    assert np.all(draws >= theta)


def test_normal_nig_prior_collapse_onto_point_mass():
    spec = DistributionSpec(
        Family.NORMAL_NIG,
        {"mu0": 4.0, "sigma2_0": 1e-12, "a0": 1e8, "b0": 1.0},
    ).validate()
    draws = _draws(spec, 20_000)
    assert abs(float(draws.mean()) - 4.0) < 1e-2
    assert float(draws.std()) < 1e-2


# --- moment matching against independent oracles ------------------------------


_FLAT_FAMILIES = {
    Family.POISSON,
    Family.TRUNCATED_CAUCHY,
    Family.UNIFORM_CONTINUOUS,
    Family.UNIFORM_DISCRETE,
}


def _sample_moments(spec, n, seed=23):
    """Empirical mean/var of n independent marginal draws.

    Hierarchical families re-realize their intermediates for every draw so
    the sample follows the prior-predictive marginal whose analytic moments
    the oracles below compute (and each draw is independent, which the
    3-standard-error bound assumes).
    """
    g = _gen(seed, 9)
    if spec.family in _FLAT_FAMILIES:
        x = np.asarray(draw_value(spec, {}, g, size=n), dtype=float)
    else:
        x = np.empty(n)
        for i in range(n):
            x[i] = draw_value(spec, realize_params(spec, g), g)
    return float(x.mean()), float(x.var()), x


def _check_within_3se(spec, mean, var, mu4, n=100_000, seed=23):
    emp_mean, emp_var, _ = _sample_moments(spec, n, seed)
    se_mean = math.sqrt(var / n)
    se_var = math.sqrt(max(mu4 - var**2, 0.0) / n)
    assert abs(emp_mean - mean) <= 3 * se_mean, (emp_mean, mean, se_mean)
    assert abs(emp_var - var) <= 3 * se_var, (emp_var, var, se_var)


def _discrete_moments(values, probs):
    values = np.asarray(values, float)
    probs = np.asarray(probs, float)
    mean = float(np.sum(values * probs))
    var = float(np.sum((values - mean) ** 2 * probs))
    mu4 = float(np.sum((values - mean) ** 4 * probs))
    return mean, var, mu4


def test_moments_dirichlet_categorical():
    alpha = np.array([2.0, 5.0, 3.0])
    spec = DistributionSpec(Family.DIRICHLET_CATEGORICAL, {"alpha": alpha.tolist()})
    probs = alpha / alpha.sum()  # marginal category law of the two-stage draw
    mean, var, mu4 = _discrete_moments([0, 1, 2], probs)
    _check_within_3se(spec.validate(), mean, var, mu4)


def test_moments_beta_bernoulli():
    a, b = 2.0, 6.0
    spec = DistributionSpec(Family.BETA_BERNOULLI, {"a": a, "b": b}).validate()
    p = a / (a + b)
    mean, var, mu4 = _discrete_moments([0, 1], [1 - p, p])
    _check_within_3se(spec, mean, var, mu4)


def test_moments_normal_nig():
    mu0, s20, a0, b0 = 10.0, 4.0, 5.0, 8.0
    spec = DistributionSpec(
        Family.NORMAL_NIG, {"mu0": mu0, "sigma2_0": s20, "a0": a0, "b0": b0}
    ).validate()
    e_s2 = b0 / (a0 - 1)
    e_s4 = b0**2 / ((a0 - 1) * (a0 - 2))
    var = s20 + e_s2
    # X - mu0 = A + eps with A ~ N(0, s20), eps | s2 ~ N(0, s2)
    mu4 = 3 * s20**2 + 6 * s20 * e_s2 + 3 * e_s4
    _check_within_3se(spec, mu0, var, mu4)


def test_moments_shifted_exponential():
    loc, a, b = 2.0, 4.0, 0.5
    spec = DistributionSpec(
        Family.SHIFTED_EXPONENTIAL, {"loc": loc, "shape": a, "scale": b}
    ).validate()
    # raw moments of the excess via E[Y^k | lam] = k! lam^k and Gamma moments
    e_lam = [1.0]
    for k in range(1, 5):
        e_lam.append(e_lam[-1] * (a + k - 1) * b)
    ey = [math.factorial(k) * e_lam[k] for k in range(5)]
    mean = ey[1]
    var = ey[2] - mean**2
    mu4 = ey[4] - 4 * mean * ey[3] + 6 * mean**2 * ey[2] - 3 * mean**4
    _check_within_3se(spec, loc + mean, var, mu4)


def test_moments_poisson():
    rate = 6.5
    spec = DistributionSpec(Family.POISSON, {"rate": rate}).validate()
    _check_within_3se(spec, rate, rate, rate * (1 + 3 * rate))


def test_moments_uniform_continuous():
    lo, hi = 1.0, 3.0
    spec = DistributionSpec(Family.UNIFORM_CONTINUOUS, {"low": lo, "high": hi})
    width = hi - lo
    _check_within_3se(spec.validate(), (lo + hi) / 2, width**2 / 12, width**4 / 80)


def test_moments_uniform_discrete():
    spec = DistributionSpec(Family.UNIFORM_DISCRETE, {"low": 3, "high": 12})
    vals = list(range(3, 13))
    mean, var, mu4 = _discrete_moments(vals, [1 / len(vals)] * len(vals))
    _check_within_3se(spec.validate(), mean, var, mu4)


def test_moments_truncated_cauchy_by_quadrature():
    loc, scale, lo, hi = 6.0, 2.0, 1.0, 60.0
    spec = DistributionSpec(
        Family.TRUNCATED_CAUCHY, {"loc": loc, "scale": scale}, support=(lo, hi)
    ).validate()

    def dens(x):
        return 1.0 / (math.pi * scale * (1 + ((x - loc) / scale) ** 2))

    z, _ = integrate.quad(dens, lo, hi)
    mean, _ = integrate.quad(lambda x: x * dens(x) / z, lo, hi)
    var, _ = integrate.quad(lambda x: (x - mean) ** 2 * dens(x) / z, lo, hi)
    mu4, _ = integrate.quad(lambda x: (x - mean) ** 4 * dens(x) / z, lo, hi)
    _check_within_3se(spec, mean, var, mu4)


# --- heavy tail & support ------------------------------------------------------


def test_cauchy_tail_heavier_than_normal_control():
    loc, scale = 6.0, 2.0
    spec = DistributionSpec(
        Family.TRUNCATED_CAUCHY, {"loc": loc, "scale": scale}, support=(-1e4, 1e4)
    ).validate()
    n = 100_000
    draws = _draws(spec, n, seed=31)
    control = _gen(31, 7).normal(loc, scale, size=n)
    thresh = loc + 3 * scale
    assert np.sum(draws > thresh) > np.sum(control > thresh)


def test_support_fuzz_all_families_in_bounds():
    g = _gen(17, 0)
    total = 0
    cases = []
    for _ in range(40):
        lo = float(g.uniform(-5, 5))
        hi = lo + float(g.uniform(0.5, 10))
        cases.extend(
            [
                DistributionSpec(
                    Family.NORMAL_NIG,
                    {"mu0": lo, "sigma2_0": 9.0, "a0": 2.0, "b0": 4.0},
                    support=(lo, hi),
                ),
                DistributionSpec(
                    Family.SHIFTED_EXPONENTIAL,
                    {"loc": lo, "shape": 2.0, "scale": 2.0},
                    support=(lo, hi),
                ),
                DistributionSpec(
                    Family.TRUNCATED_CAUCHY,
                    {"loc": lo, "scale": 3.0},
                    support=(lo, hi),
                ),
                DistributionSpec(
                    Family.TRUNCATED_CAUCHY,
                    {"loc": lo, "scale": 2.0},
                    support=(max(1.0, lo), max(1.0, lo) + 50),
                    integer=True,
                ),
                DistributionSpec(
                    Family.POISSON, {"rate": 4.0}, support=(1, math.inf)
                ),
            ]
        )
    per_spec = 1_000_000 // len(cases) + 1
    for spec in cases:
        spec.validate()
        draws = _draws(spec, per_spec, seed=int(g.integers(1 << 30)))
        lo, hi = spec.support
        assert np.all(draws >= lo) and np.all(draws <= hi)
        total += draws.size
    assert total >= 1_000_000


def test_integer_rounding_half_up_and_clamp():
    spec = DistributionSpec(
        Family.NORMAL_NIG,
        {"mu0": 0.2, "sigma2_0": 1e-12, "a0": 1e8, "b0": 1e-4},
        support=(1, 30),
        integer=True,
    ).validate()
    draws = _draws(spec, 1000)
    assert np.all(draws == 1)  # 0.2 rounds to 0, clamps to support min


# --- validation & plumbing -----------------------------------------------------


def test_zero_dirichlet_concentration_rejected():
    with pytest.raises(InvalidHyperparam):
        DistributionSpec(
            Family.DIRICHLET_CATEGORICAL, {"alpha": [1.0, 0.0, 1.0]}
        ).validate("columns")


@pytest.mark.parametrize(
    "family,params",
    [
        (Family.BETA_BERNOULLI, {"a": -1.0, "b": 2.0}),
        (Family.NORMAL_NIG, {"mu0": 0.0, "sigma2_0": 0.0, "a0": 1.0, "b0": 1.0}),
        (Family.SHIFTED_EXPONENTIAL, {"loc": math.nan, "shape": 1.0, "scale": 1.0}),
        (Family.POISSON, {"rate": 0.0}),
        (Family.TRUNCATED_CAUCHY, {"loc": 0.0, "scale": 1.0}),  # missing support
        (Family.UNIFORM_CONTINUOUS, {"low": 2.0, "high": 1.0}),
    ],
)
def test_invalid_hyperparams_rejected(family, params):
    with pytest.raises(InvalidHyperparam):
        DistributionSpec(family, params).validate()


def test_sample_hierarchical_returns_value_and_intermediates():
    params = {
        "margin": DistributionSpec(
            Family.NORMAL_NIG,
            {"mu0": 0.08, "sigma2_0": 1e-4, "a0": 8.0, "b0": 1e-3},
            support=(0.01, 0.45),
        ).validate()
    }
    value, realized = sample_hierarchical("margin", params, RngStream(3, (0,)))
    assert 0.01 <= value <= 0.45
    assert set(realized) == {"mu", "sigma2"}
    # reproducible given the same stream identity
    value2, realized2 = sample_hierarchical("margin", params, RngStream(3, (0,)))
    assert value == value2 and realized == realized2


def test_sample_hierarchical_missing_params():
    with pytest.raises(MissingTemplateParam):
        sample_hierarchical("nope", {}, RngStream(0, (0,)))


def test_categorical_labels():
    spec = DistributionSpec(
        Family.DIRICHLET_CATEGORICAL,
        {"alpha": [1.0, 1.0, 1.0]},
        values=[1, 2, 3],
    ).validate()
    assert spec.label(2) == 3
