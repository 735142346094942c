"""Distribution kernels for network nodes.

Each node family follows the same two-stage pattern: ``realize`` draws the
intermediate parameters from their priors (e.g. a probability vector from a
Dirichlet, or a mean/variance pair), and ``draw`` produces observed values
conditioned on those intermediates.  Families without a hierarchical prior
(Poisson, truncated Cauchy, uniforms) realize an empty record and draw
directly from their hyperparameters.

Support bounds are enforced by rejection resampling (up to
``MAX_REJECTION_ATTEMPTS`` rounds, then clamping) for continuous draws, and
by round-to-nearest-then-clamp for integer-valued draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from docsynth.errors import InvalidHyperparam, MissingTemplateParam

__all__ = [
    "Family",
    "DistributionSpec",
    "realize_params",
    "draw_value",
    "sample_hierarchical",
    "MAX_REJECTION_ATTEMPTS",
]

MAX_REJECTION_ATTEMPTS = 100


class Family(str, Enum):
    DIRICHLET_CATEGORICAL = "dirichlet_categorical"
    BETA_BERNOULLI = "beta_bernoulli"
    NORMAL_NIG = "normal_nig"
    SHIFTED_EXPONENTIAL = "shifted_exponential"
    POISSON = "poisson"
    TRUNCATED_CAUCHY = "truncated_cauchy"
    UNIFORM_CONTINUOUS = "uniform_continuous"
    UNIFORM_DISCRETE = "uniform_discrete"


# Hyperparameter fields required by each family.
_REQUIRED_FIELDS = {
    Family.DIRICHLET_CATEGORICAL: ("alpha",),
    Family.BETA_BERNOULLI: ("a", "b"),
    Family.NORMAL_NIG: ("mu0", "sigma2_0", "a0", "b0"),
    Family.SHIFTED_EXPONENTIAL: ("loc", "shape", "scale"),
    Family.POISSON: ("rate",),
    Family.TRUNCATED_CAUCHY: ("loc", "scale"),
    Family.UNIFORM_CONTINUOUS: ("low", "high"),
    Family.UNIFORM_DISCRETE: ("low", "high"),
}


@dataclass
class DistributionSpec:
    """One node's family, hyperparameters and optional support bounds.

    ``values`` optionally labels the categories of a discrete node (same
    length as ``alpha``); ``integer`` marks continuous draws that represent
    counts and are rounded half-up before clamping.
    """

    family: Family
    params: dict[str, Any]
    support: tuple[float, float] | None = None
    values: list[Any] | None = None
    integer: bool = False

    def validate(self, node_id: str = "<anon>") -> "DistributionSpec":
        fam = self.family
        p = self.params
        for name in _REQUIRED_FIELDS[fam]:
            if name not in p:
                raise InvalidHyperparam(node_id, name, "missing")

        def positive(name):
            v = float(p[name])
            if not (v > 0.0) or not math.isfinite(v):
                raise InvalidHyperparam(node_id, name, f"must be > 0, got {p[name]}")
            return v

        if fam is Family.DIRICHLET_CATEGORICAL:
            alpha = np.asarray(p["alpha"], dtype=float)
            if alpha.ndim != 1 or alpha.size < 2:
                raise InvalidHyperparam(node_id, "alpha", "needs dimension >= 2")
            if not np.all(alpha > 0.0) or not np.all(np.isfinite(alpha)):
                raise InvalidHyperparam(
                    node_id, "alpha", "concentrations must all be strictly positive"
                )
            if self.values is not None and len(self.values) != alpha.size:
                raise InvalidHyperparam(
                    node_id, "values",
                    f"{len(self.values)} labels for {alpha.size} concentrations",
                )
        elif fam is Family.BETA_BERNOULLI:
            positive("a")
            positive("b")
        elif fam is Family.NORMAL_NIG:
            if not math.isfinite(float(p["mu0"])):
                raise InvalidHyperparam(node_id, "mu0", "must be finite")
            positive("sigma2_0")
            positive("a0")
            positive("b0")
        elif fam is Family.SHIFTED_EXPONENTIAL:
            if not math.isfinite(float(p["loc"])):
                raise InvalidHyperparam(node_id, "loc", "must be finite")
            positive("shape")
            positive("scale")
        elif fam is Family.POISSON:
            positive("rate")
        elif fam is Family.TRUNCATED_CAUCHY:
            if not math.isfinite(float(p["loc"])):
                raise InvalidHyperparam(node_id, "loc", "must be finite")
            positive("scale")
            if self.support is None:
                raise InvalidHyperparam(
                    node_id, "support", "truncation bounds are required"
                )
        elif fam is Family.UNIFORM_CONTINUOUS or fam is Family.UNIFORM_DISCRETE:
            lo, hi = float(p["low"]), float(p["high"])
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise InvalidHyperparam(node_id, "low", f"invalid range [{lo}, {hi}]")

        if self.support is not None:
            lo, hi = self.support
            if not (float(lo) < float(hi)):
                raise InvalidHyperparam(node_id, "support", f"min {lo} not < max {hi}")
        return self

    def label(self, index: int):
        """Category label for a discrete draw, or the raw index."""
        if self.values is None:
            return int(index)
        return self.values[int(index)]


def realize_params(spec: DistributionSpec, rng: np.random.Generator) -> dict[str, Any]:
    """Draw the node's intermediate parameters from their priors.

    Returns the realized record that ``draw_value`` conditions on; empty for
    families without a hierarchical stage.
    """
    fam = spec.family
    p = spec.params
    if fam is Family.DIRICHLET_CATEGORICAL:
        probs = rng.dirichlet(np.asarray(p["alpha"], dtype=float))
        return {"probs": probs.tolist()}
    if fam is Family.BETA_BERNOULLI:
        return {"p": float(rng.beta(float(p["a"]), float(p["b"])))}
    if fam is Family.NORMAL_NIG:
        mu = float(rng.normal(float(p["mu0"]), math.sqrt(float(p["sigma2_0"]))))
        # InverseGamma(a, b) via 1 / Gamma(a, scale=1/b)
        sigma2 = float(1.0 / rng.gamma(float(p["a0"]), 1.0 / float(p["b0"])))
        return {"mu": mu, "sigma2": sigma2}
    if fam is Family.SHIFTED_EXPONENTIAL:
        lam = float(rng.gamma(float(p["shape"]), float(p["scale"])))
        return {"lam": lam}
    return {}


def _bounded_continuous(one_draw, lo: float, hi: float, rng, size: int | None):
    """Rejection-resample into [lo, hi]; clamp whatever still escapes."""
    n = 1 if size is None else size
    out = one_draw(rng, n)
    bad = (out < lo) | (out > hi)
    attempts = 0
    while bad.any() and attempts < MAX_REJECTION_ATTEMPTS:
        out[bad] = one_draw(rng, int(bad.sum()))
        bad = (out < lo) | (out > hi)
        attempts += 1
    np.clip(out, lo, hi, out=out)
    return out


def _round_half_up(x):
    return np.floor(x + 0.5)


def draw_value(
    spec: DistributionSpec,
    realized: dict[str, Any],
    rng: np.random.Generator,
    size: int | None = None,
):
    """Draw observed value(s) conditioned on the realized intermediates.

    Scalar when ``size`` is None, else a numpy array of length ``size``.
    """
    fam = spec.family
    p = spec.params
    lo, hi = spec.support if spec.support is not None else (-math.inf, math.inf)

    if fam is Family.DIRICHLET_CATEGORICAL:
        probs = np.asarray(realized["probs"], dtype=float)
        out = rng.choice(probs.size, size=size, p=probs)
        return int(out) if size is None else out.astype(int)

    if fam is Family.BETA_BERNOULLI:
        prob = float(realized["p"])
        out = (rng.random(size=1 if size is None else size) < prob).astype(int)
        return int(out[0]) if size is None else out

    if fam is Family.NORMAL_NIG:
        mu, sd = float(realized["mu"]), math.sqrt(float(realized["sigma2"]))
        out = _bounded_continuous(
            lambda g, n: g.normal(mu, sd, size=n), lo, hi, rng, size
        )
    elif fam is Family.SHIFTED_EXPONENTIAL:
        loc, lam = float(p["loc"]), float(realized["lam"])
        out = _bounded_continuous(
            lambda g, n: loc + g.exponential(lam, size=n), max(lo, loc), hi, rng, size
        )
    elif fam is Family.POISSON:
        out = rng.poisson(float(p["rate"]), size=1 if size is None else size)
        if spec.support is not None:
            out = np.clip(out, math.ceil(lo) if math.isfinite(lo) else None,
                          math.floor(hi) if math.isfinite(hi) else None)
        out = out.astype(int)
        return int(out[0]) if size is None else out
    elif fam is Family.TRUNCATED_CAUCHY:
        c_loc, c_scale = float(p["loc"]), float(p["scale"])
        out = _bounded_continuous(
            lambda g, n: c_loc + c_scale * g.standard_cauchy(size=n), lo, hi, rng, size
        )
    elif fam is Family.UNIFORM_CONTINUOUS:
        out = rng.uniform(float(p["low"]), float(p["high"]),
                          size=1 if size is None else size)
    elif fam is Family.UNIFORM_DISCRETE:
        out = rng.integers(int(p["low"]), int(p["high"]) + 1,
                           size=1 if size is None else size)
        return int(out[0]) if size is None else out.astype(int)
    else:
        raise AssertionError(f"unhandled family {fam}")

    if spec.integer:
        lo_i = math.ceil(lo) if math.isfinite(lo) else lo
        hi_i = math.floor(hi) if math.isfinite(hi) else hi
        out = np.clip(_round_half_up(out), lo_i, hi_i).astype(int)
        return int(out[0]) if size is None else out
    return float(out[0]) if size is None else out


def sample_hierarchical(node, template_params, rng) -> tuple[Any, dict[str, Any]]:
    """Full two-stage sample for one node: priors, then the observed value.

    ``node`` may be a node id or anything with an ``id`` attribute;
    ``template_params`` maps node id to its :class:`DistributionSpec` for the
    selected template.  Returns ``(value, realized)`` so callers can record
    the intermediate parameters alongside the draw.
    """
    node_id = node if isinstance(node, str) else node.id
    try:
        spec = template_params[node_id]
    except KeyError:
        raise MissingTemplateParam(node_id) from None
    gen = rng.generator if hasattr(rng, "generator") else rng
    realized = realize_params(spec, gen)
    value = draw_value(spec, realized, gen)
    return value, realized
