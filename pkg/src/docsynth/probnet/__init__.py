"""Probabilistic core: distribution kernels, node registry, seeded streams,
and closed-form conjugate posterior updates."""

from docsynth.probnet.conjugate import (
    ObservationSet,
    posterior_infer,
    posterior_update_beta,
    posterior_update_dirichlet,
    posterior_update_gamma_exponential,
    posterior_update_normal,
    read_observations,
)
from docsynth.probnet.distributions import (
    DistributionSpec,
    Family,
    draw_value,
    realize_params,
    sample_hierarchical,
)
from docsynth.probnet.registry import NodeRef, Registry
from docsynth.probnet.rng import RngStream

__all__ = [
    "DistributionSpec",
    "Family",
    "NodeRef",
    "ObservationSet",
    "Registry",
    "RngStream",
    "draw_value",
    "posterior_infer",
    "posterior_update_beta",
    "posterior_update_dirichlet",
    "posterior_update_gamma_exponential",
    "posterior_update_normal",
    "read_observations",
    "realize_params",
    "sample_hierarchical",
]
