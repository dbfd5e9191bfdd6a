"""Exact density functionals and balancedness predicates.

Every value is a ``fractions.Fraction``.  Maximisation over subgraphs
runs exhaustively over nonempty edge subsets (vectorised, grouped by
(edge count, vertex count) so the final comparison is exact) when the
edge count allows it, and otherwise by Dinkelbach iteration with an
integer-capacity minimum cut.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np

from .hypercore import Hypergraph, iter_bits

DEFAULT_SUBSET_BOUND = 1 << 20


class DensityError(ValueError):
    pass


class DegenerateDensityError(DensityError):
    """d_k is undefined: at least two edges on exactly k vertices."""


class EmptyHypergraphError(DensityError):
    pass


class DensityOrderError(DensityError):
    """The asymmetric density needs m_k(F1) >= m_k(F2) > 0; swap the arguments."""


@dataclass(frozen=True)
class DensityReport:
    value: Fraction
    witness: tuple[int, ...]
    maximizer_proper: bool

    def to_dict(self) -> dict:
        return {
            "value": f"{self.value.numerator}/{self.value.denominator}",
            "witness_edges": list(self.witness),
            "maximizer_proper": self.maximizer_proper,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


def d_k(H: Hypergraph) -> Fraction:
    e, v, k = H.e, H.vertex_count, H.k
    if e == 0:
        return Fraction(0)
    if e == 1 and v == k:
        return Fraction(1, k)
    if v == k:
        raise DegenerateDensityError(f"{e} edges on {k} vertices")
    return Fraction(e - 1, v - k)


# A ratio (a1*e + a0) / (b1*v + b0) over subgraphs with e >= 1 edges.
@dataclass(frozen=True)
class _Ratio:
    a1: int
    a0: int
    b1: int
    b0: int
    single_edge: Fraction | None = None  # override for e = 1 (d_k's base case)

    def value(self, e: int, v: int) -> Fraction | None:
        if e == 1 and self.single_edge is not None:
            return self.single_edge
        den = self.b1 * v + self.b0
        if den <= 0:
            return None
        return Fraction(self.a1 * e + self.a0, den)


def _subset_tables(H: Hypergraph) -> tuple[np.ndarray, np.ndarray]:
    """Edge and vertex counts of every edge subset, indexed by bitmask."""
    if H.vertex_count > 64:
        raise DensityError("exhaustive route supports at most 64 vertices")
    vmask = np.zeros(1, dtype=np.uint64)
    ecount = np.zeros(1, dtype=np.uint8)
    for edge in H.edges:
        bits = np.uint64(sum(1 << x for x in edge))
        vmask = np.concatenate([vmask, vmask | bits])
        ecount = np.concatenate([ecount, ecount + np.uint8(1)])
    return ecount.astype(np.int64), np.bitwise_count(vmask).astype(np.int64)


def _exhaustive(H: Hypergraph, ratio: _Ratio) -> DensityReport:
    ecount, vcount = _subset_tables(H)
    ecount, vcount = ecount[1:], vcount[1:]  # drop the empty subset
    stride = H.vertex_count + 1
    codes = ecount * stride + vcount
    uniq, first = np.unique(codes, return_index=True)
    best, best_codes = None, []
    for code in uniq.tolist():
        val = ratio.value(code // stride, code % stride)
        if val is None:
            continue
        if best is None or val > best:
            best, best_codes = val, [code]
        elif val == best:
            best_codes.append(code)
    full_index = len(codes) - 1  # subset mask 2^e - 1, shifted by the dropped empty set
    hits = np.flatnonzero(np.isin(codes, best_codes))
    witness_mask = int(hits[0]) + 1
    proper = bool(len(hits) > 1 or hits[0] != full_index)
    if not proper and int(vcount[full_index]) < H.vertex_count:
        proper = True  # the full edge set without the isolated vertices
    if int(hits[0]) == full_index and len(hits) > 1:
        witness_mask = int(hits[1]) + 1
    return DensityReport(best, tuple(iter_bits(witness_mask)), proper)


def _best_closure(H: Hypergraph, ratio: _Ratio, lam: Fraction, seed: int | None,
                  banned: frozenset[int]) -> tuple[int, frozenset[int]]:
    """max of  q*(a1 e(U) + a0) - p*(b1 |U| + b0)  over U containing edge ``seed``
    (any U, possibly empty, when seed is None), where lam = p/q and e(U)
    counts induced edges; returns (value, U)."""
    p, q = lam.numerator, lam.denominator
    G = nx.DiGraph()
    G.add_node("s")
    G.add_node("t")
    for j, edge in enumerate(H.edges):
        if banned.intersection(edge):
            continue
        node = ("e", j)
        G.add_edge("s", node, capacity=q * ratio.a1)
        for x in edge:
            G.add_edge(node, ("v", x))  # no capacity attribute: infinite
    for x in range(H.vertex_count):
        if x not in banned:
            G.add_edge(("v", x), "t", capacity=p * ratio.b1)
    if seed is not None:
        for x in H.edges[seed]:
            G.add_edge("s", ("v", x))
    _, (source_side, _) = nx.minimum_cut(G, "s", "t")
    U = frozenset(node[1] for node in source_side if isinstance(node, tuple) and node[0] == "v")
    e_u = sum(1 for edge in H.edges if U.issuperset(edge))
    return q * (ratio.a1 * e_u + ratio.a0) - p * (ratio.b1 * len(U) + ratio.b0), U


def _induced_ids(H: Hypergraph, U: frozenset[int]) -> tuple[int, ...]:
    return tuple(j for j, edge in enumerate(H.edges) if U.issuperset(edge))


def _flow_max(H: Hypergraph, ratio: _Ratio, banned: frozenset[int] = frozenset()):
    """Dinkelbach iteration; returns (value, witness edge ids) or (None, ())."""
    seeds = [j for j, edge in enumerate(H.edges) if not banned.intersection(edge)]
    if not seeds:
        return None, ()
    U = frozenset(x for i in seeds for x in H.edges[i])
    best, witness = ratio.value(len(seeds), len(U)), tuple(seeds)
    if ratio.single_edge is not None and (best is None or ratio.single_edge > best):
        best, witness = ratio.single_edge, (seeds[0],)
    while True:
        improved = None
        # the offset q*a0 - p*b0 is the same for every U, so one unseeded cut
        # finds the maximiser unless it comes back empty
        gain, U = _best_closure(H, ratio, best, None, banned)
        if U:
            improved = U if gain > 0 else None
        elif best.denominator * ratio.a0 - best.numerator * ratio.b0 > 0:
            for j in seeds:
                gain, U = _best_closure(H, ratio, best, j, banned)
                if gain > 0:
                    improved = U
                    break
        if improved is None:
            return best, witness
        ids = _induced_ids(H, improved)
        best = ratio.value(len(ids), len(improved))
        witness = ids


def _flow_report(H: Hypergraph, ratio: _Ratio) -> DensityReport:
    value, witness = _flow_max(H, ratio)
    proper = set(witness) != set(range(H.e)) or len(
        {x for j in witness for x in H.edges[j]}) < H.vertex_count
    if not proper:
        for x in range(H.vertex_count):
            other, _ = _flow_max(H, ratio, frozenset([x]))
            if other is not None and other == value:
                proper = True
                break
    return DensityReport(value, tuple(sorted(witness)), proper)


def _maximise(H: Hypergraph, ratio: _Ratio, method: str, bound: int) -> DensityReport:
    if method == "auto":
        method = "exhaustive" if (1 << H.e) <= bound and H.vertex_count <= 64 else "flow"
    if method == "exhaustive":
        return _exhaustive(H, ratio)
    if method == "flow":
        return _flow_report(H, ratio)
    raise ValueError(f"unknown method {method!r}")


def _dk_ratio(k: int) -> _Ratio:
    return _Ratio(1, -1, 1, -k, single_edge=Fraction(1, k))


def m_k(F: Hypergraph, method: str = "auto", bound: int = DEFAULT_SUBSET_BOUND) -> DensityReport:
    if F.e == 0:
        raise EmptyHypergraphError("m_k needs at least one edge")
    return _maximise(F, _dk_ratio(F.k), method, bound)


def m(F: Hypergraph, method: str = "auto", bound: int = DEFAULT_SUBSET_BOUND) -> DensityReport:
    """Maximum edge/vertex ratio over subgraphs."""
    if F.vertex_count == 0:
        raise EmptyHypergraphError("m needs at least one vertex")
    if F.e == 0:
        return DensityReport(Fraction(0), (), F.vertex_count > 1)
    return _maximise(F, _Ratio(1, 0, 1, 0), method, bound)


def _asym_ratio(F1: Hypergraph, F2: Hypergraph) -> _Ratio:
    m1 = m_k(F1).value
    m2 = m_k(F2).value
    if F1.k != F2.k:
        raise DensityError("both patterns must have the same uniformity")
    if not (m1 >= m2 > 0):
        raise DensityOrderError(
            f"need m_k(F1) >= m_k(F2) > 0, got {m1} and {m2}; swap F1 and F2")
    a, b = m2.numerator, m2.denominator
    # e / (v - k + b/a) = a e / (a v - a k + b)
    return _Ratio(a, 0, a, b - a * F1.k)


def m_k_asym(F1: Hypergraph, F2: Hypergraph, method: str = "auto",
             bound: int = DEFAULT_SUBSET_BOUND) -> DensityReport:
    return _maximise(F1, _asym_ratio(F1, F2), method, bound)


def is_strictly_k_balanced(F: Hypergraph) -> bool:
    report = m_k(F)
    return report.value == d_k(F) and not report.maximizer_proper


def is_strictly_balanced_wrt(F1: Hypergraph, F2: Hypergraph) -> bool:
    return not m_k_asym(F1, F2).maximizer_proper


def ratio_on(H: Hypergraph, edge_ids, kind: str, F2: Hypergraph | None = None) -> Fraction:
    """Recompute a density ratio on the subgraph spanned by ``edge_ids``."""
    ids = list(edge_ids)
    v = len({x for j in ids for x in H.edges[j]})
    if kind == "m_k":
        ratio = _dk_ratio(H.k)
    elif kind == "m":
        ratio = _Ratio(1, 0, 1, 0)
    elif kind == "asym":
        ratio = _asym_ratio(H, F2)
    else:
        raise ValueError(kind)
    if not ids:
        return Fraction(0)
    return ratio.value(len(ids), v)
