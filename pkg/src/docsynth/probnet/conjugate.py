"""Closed-form conjugate posterior updates.

Implemented families and their sufficient statistics:

* Dirichlet-categorical: per-category counts, additive concentration update.
* Beta-Bernoulli: success/failure counts.
* Exponential excess with a Gamma prior: the update runs in rate form
  (shape += n, rate += sum of excesses over the location) and is converted
  back to the stored shape/scale parameterization at the boundary.
* Gaussian with a normal prior on the mean and an inverse-gamma prior on the
  variance: one fixed-point sweep; the mean is updated with the variance
  pinned at its prior posterior-mean, then the variance is updated from
  residuals about the updated mean.

Poisson, Cauchy and uniform nodes have no implemented update.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from docsynth.errors import (
    DimensionMismatch,
    NegativeCount,
    ObservationBelowLocation,
    ParseError,
    UnknownNode,
    UnsupportedFamily,
)
from docsynth.probnet.distributions import DistributionSpec, Family
from docsynth.probnet.registry import Registry

__all__ = [
    "ObservationSet",
    "posterior_update_dirichlet",
    "posterior_update_beta",
    "posterior_update_gamma_exponential",
    "posterior_update_normal",
    "posterior_infer",
    "read_observations",
]


@dataclass
class ObservationSet:
    """Observed draws for one node: category indices or continuous values."""

    node_id: str
    values: list


def posterior_update_dirichlet(alpha0, counts) -> np.ndarray:
    """alpha*_k = alpha0_k + N_k, exactly."""
    alpha0 = np.asarray(alpha0, dtype=float)
    counts = np.asarray(counts)
    if alpha0.shape != counts.shape:
        raise DimensionMismatch(
            f"alpha has {alpha0.shape} but counts have {counts.shape}"
        )
    if np.any(counts < 0) or not np.all(counts == np.floor(counts)):
        raise NegativeCount(f"counts must be non-negative integers: {counts}")
    return alpha0 + counts.astype(float)


def posterior_update_beta(a0: float, b0: float, successes: int, failures: int):
    """(a*, b*) = (a0 + successes, b0 + failures)."""
    if successes < 0 or failures < 0:
        raise NegativeCount(f"successes={successes}, failures={failures}")
    return float(a0) + int(successes), float(b0) + int(failures)


def posterior_update_gamma_exponential(a0, b0, observations, loc):
    """Update the Gamma prior of an exponential node from observed values.

    ``(a0, b0)`` are the stored shape/scale hyperparameters; internally the
    update is performed on the rate-form prior Gamma(shape=a0, rate=1/b0)
    over the excess rate: shape gains one per observation and the rate gains
    the accumulated excess ``sum(x - loc)``.  Returns the posterior in the
    stored (shape, scale) form.
    """
    a0, b0, loc = float(a0), float(b0), float(loc)
    observations = [float(v) for v in observations]
    for v in observations:
        if v < loc:
            raise ObservationBelowLocation(v, loc)
    if not observations:
        return a0, b0
    n = len(observations)
    excess = sum(v - loc for v in observations)
    rate = 1.0 / b0 + excess
    return a0 + n, 1.0 / rate


def posterior_update_normal(mu0, sigma2_0, a0, b0, observations):
    """One fixed-point sweep of the semi-conjugate Gaussian updates.

    The mean's normal prior is updated assuming the observation variance
    equals the inverse-gamma prior mean (b0 / (a0 - 1), falling back to
    b0 / a0 when the mean is undefined); the variance's inverse-gamma prior
    is then updated with residuals about the updated mean.
    """
    mu0, sigma2_0, a0, b0 = map(float, (mu0, sigma2_0, a0, b0))
    x = np.asarray(list(observations), dtype=float)
    n = x.size
    if n == 0:
        return mu0, sigma2_0, a0, b0

    sigma2_hat = b0 / (a0 - 1.0) if a0 > 1.0 else b0 / a0
    prec = 1.0 / sigma2_0 + n / sigma2_hat
    sigma2_0_star = 1.0 / prec
    mu_star = sigma2_0_star * (mu0 / sigma2_0 + x.sum() / sigma2_hat)

    a_star = a0 + n / 2.0
    b_star = b0 + 0.5 * float(np.sum((x - mu_star) ** 2))
    return mu_star, sigma2_0_star, a_star, b_star


def _counts_from_values(values, k: int, node_id: str) -> np.ndarray:
    counts = np.zeros(k)
    for v in values:
        idx = int(v)
        if idx != v or idx < 0 or idx >= k:
            raise DimensionMismatch(
                f"node {node_id!r}: category index {v} outside 0..{k - 1}"
            )
        counts[idx] += 1
    return counts


def posterior_infer(dataset, registry: Registry) -> dict[str, DistributionSpec]:
    """Apply the matching closed-form update to every observed node.

    Returns a fresh node-id -> spec mapping covering the whole registry;
    unobserved nodes keep their prior hyperparameters.  The registry itself
    is never mutated.
    """
    updated: dict[str, DistributionSpec] = {}
    for node in registry:
        updated[node.id] = DistributionSpec(
            family=node.spec.family,
            params=dict(node.spec.params),
            support=node.spec.support,
            values=node.spec.values,
            integer=node.spec.integer,
        )

    for obs in dataset:
        if obs.node_id not in registry:
            raise UnknownNode(obs.node_id)
        spec = updated[obs.node_id]
        fam = spec.family
        if fam is Family.DIRICHLET_CATEGORICAL:
            alpha = np.asarray(spec.params["alpha"], dtype=float)
            counts = _counts_from_values(obs.values, alpha.size, obs.node_id)
            spec.params["alpha"] = posterior_update_dirichlet(alpha, counts).tolist()
        elif fam is Family.BETA_BERNOULLI:
            vals = [int(v) for v in obs.values]
            if any(v not in (0, 1) for v in vals):
                raise DimensionMismatch(
                    f"node {obs.node_id!r}: Bernoulli observations must be 0/1"
                )
            s = sum(vals)
            a, b = posterior_update_beta(
                spec.params["a"], spec.params["b"], s, len(vals) - s
            )
            spec.params["a"], spec.params["b"] = a, b
        elif fam is Family.SHIFTED_EXPONENTIAL:
            a, b = posterior_update_gamma_exponential(
                spec.params["shape"], spec.params["scale"],
                obs.values, spec.params["loc"],
            )
            spec.params["shape"], spec.params["scale"] = a, b
        elif fam is Family.NORMAL_NIG:
            mu, s2, a, b = posterior_update_normal(
                spec.params["mu0"], spec.params["sigma2_0"],
                spec.params["a0"], spec.params["b0"], obs.values,
            )
            spec.params.update(mu0=mu, sigma2_0=s2, a0=a, b0=b)
        else:
            raise UnsupportedFamily(obs.node_id, fam.value)
    return updated


def read_observations(path) -> list[ObservationSet]:
    """Read line-delimited JSON observation records.

    Each record is ``{"node_id": ..., "value": ...}`` for continuous nodes or
    ``{"node_id": ..., "category_index": ...}`` for discrete ones.  Records
    are grouped per node in first-seen order.
    """
    path = Path(path)
    grouped: dict[str, ObservationSet] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, f"line {lineno}: {exc}") from exc
            if "node_id" not in rec:
                raise ParseError(path, f"line {lineno}: missing node_id")
            if "value" in rec:
                val = rec["value"]
            elif "category_index" in rec:
                val = int(rec["category_index"])
            else:
                raise ParseError(
                    path, f"line {lineno}: needs value or category_index"
                )
            grouped.setdefault(rec["node_id"], ObservationSet(rec["node_id"], []))
            grouped[rec["node_id"]].values.append(val)
    return list(grouped.values())
