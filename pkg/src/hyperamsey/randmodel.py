"""Seeded sampling of the binomial random hypergraph H^k(n, p).

Each trial draws from its own PCG64 stream, seeded by
``SeedSequence(entropy=seed, spawn_key=(trial_index,))``.  One uniform
variate is drawn per candidate edge in lexicographic order and the edge
is kept when the variate is below p, so samples at different p built
from the same stream are nested.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .hypercore import Hypergraph

GENERATOR = "numpy.random.PCG64 via SeedSequence(entropy=seed, spawn_key=(trial,))"


@dataclass(frozen=True)
class SampleSpec:
    k: int
    n: int
    p: float | Fraction
    seed: int
    trial_index: int = 0

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.trial_index < 0:
            raise ValueError("trial_index must be non-negative")
        if self.n < self.k:
            raise ValueError(f"need n >= k, got n={self.n}, k={self.k}")


def candidate_edges(n: int, k: int) -> np.ndarray:
    """All k-subsets of range(n) in lexicographic order, shape (C(n,k), k)."""
    count = comb(n, k)
    out = np.fromiter((x for e in combinations(range(n), k) for x in e), dtype=np.int32,
                      count=count * k)
    return out.reshape(count, k)


_CANDIDATES: dict[tuple[int, int], np.ndarray] = {}


def _cached_candidates(n: int, k: int) -> np.ndarray:
    key = (n, k)
    if key not in _CANDIDATES:
        _CANDIDATES[key] = candidate_edges(n, k)
    return _CANDIDATES[key]


def uniforms(spec: SampleSpec) -> np.ndarray:
    """The per-edge uniform draws of this trial."""
    ss = np.random.SeedSequence(entropy=spec.seed, spawn_key=(spec.trial_index,))
    rng = np.random.Generator(np.random.PCG64(ss))
    return rng.random(comb(spec.n, spec.k))


def from_uniforms(n: int, k: int, u: np.ndarray, p) -> Hypergraph:
    keep = u < float(p)
    chosen = _cached_candidates(n, k)[keep]
    return Hypergraph(k, n, tuple(map(tuple, chosen.tolist())))


def sample(spec: SampleSpec) -> Hypergraph:
    if spec.p == 0:
        return Hypergraph(spec.k, spec.n, ())
    return from_uniforms(spec.n, spec.k, uniforms(spec), spec.p)


def sample_pair(spec: SampleSpec, p_low, p_high) -> tuple[Hypergraph, Hypergraph]:
    """Nested samples H1 at p_low and H2 at p_high sharing every draw."""
    if p_low > p_high:
        raise ValueError("need p_low <= p_high")
    u = uniforms(spec)
    return from_uniforms(spec.n, spec.k, u, p_low), from_uniforms(spec.n, spec.k, u, p_high)
