"""Deterministic splittable random streams.

A stream is identified by ``(seed, path)`` where ``path`` is a hierarchical
index sequence (document index, subnetwork index, instance index, ...).  The
underlying bit generator is counter-based (Philox) keyed by a hash of the
identity, so

* two streams with the same identity produce bit-identical draw sequences,
* streams with distinct paths are statistically independent, and
* creating or skipping a sibling branch never perturbs any other branch,
  which makes batch output invariant to worker count and scheduling order.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

__all__ = ["RngStream"]


def _philox_key(seed: int, path: tuple[int, ...]) -> int:
    ident = ("%d|" % (seed & 0xFFFFFFFFFFFFFFFF) + ",".join(map(str, path))).encode()
    return int.from_bytes(hashlib.sha256(ident).digest()[:16], "little")


@dataclass
class RngStream:
    """One addressable stream in the (seed, path) tree."""

    seed: int
    path: tuple[int, ...] = ()
    _gen: np.random.Generator | None = field(default=None, repr=False, compare=False)

    def child(self, *indices: int) -> "RngStream":
        """Derive the sub-stream at ``path + indices``."""
        return RngStream(self.seed, self.path + tuple(int(i) for i in indices))

    @property
    def generator(self) -> np.random.Generator:
        """The stream's generator; draws consume state in call order."""
        if self._gen is None:
            self._gen = np.random.Generator(
                np.random.Philox(key=_philox_key(self.seed, self.path))
            )
        return self._gen
