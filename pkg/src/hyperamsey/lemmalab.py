"""Intersecting edge sets, tight-path covers and the tight-path structure facts."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from math import ceil

from . import hypercore as hc
from .hypercore import Hypergraph


def is_intersecting_set(H: Hypergraph, S, m: int) -> bool:
    """Every two edges of S (edge ids of H) share at most m vertices."""
    edges = [set(H.edges[i]) for i in S]
    return all(len(a & b) <= m for a, b in combinations(edges, 2))


def max_intersecting_set(H: Hypergraph, m: int) -> tuple[int, tuple[int, ...]]:
    """Largest m-intersecting edge set, by branch and bound over the
    compatibility graph (edges adjacent when they share at most m vertices)."""
    n = H.e
    compat = [0] * n
    for i, j in combinations(range(n), 2):
        if len(set(H.edges[i]) & set(H.edges[j])) <= m:
            compat[i] |= 1 << j
            compat[j] |= 1 << i
    best: list[int] = []

    def expand(chosen: list[int], cand: int):
        nonlocal best
        if not cand:
            if len(chosen) > len(best):
                best = list(chosen)
            return
        if len(chosen) + cand.bit_count() <= len(best):
            return
        while cand:
            if len(chosen) + cand.bit_count() <= len(best):
                return
            v = (cand & -cand).bit_length() - 1
            cand &= ~(1 << v)
            chosen.append(v)
            expand(chosen, cand & compat[v])
            chosen.pop()
        if len(chosen) > len(best):
            best = list(chosen)

    expand([], (1 << n) - 1)
    return len(best), tuple(sorted(best))


@dataclass(frozen=True)
class IntersectingCover:
    cover: tuple[int, ...]
    pairwise_bound: int
    residual_free_of: int  # the forbidden path is T^k_{2k} for this k


def forbidden_path(k: int) -> Hypergraph:
    return hc.new_hypergraph(k, 2 * k, [list(range(i, i + k)) for i in range(k + 1)])


def find_path_cover(H: Hypergraph, k: int | None = None,
                    max_size: int | None = None) -> IntersectingCover | None:
    """Smallest (k-2)-intersecting S with H minus S free of T^k_{2k}.

    Sizes are tried in increasing order and sets lexicographically within a
    size, so the answer is deterministic.
    """
    k = H.k if k is None else k
    if H.k != k:
        raise hc.UniformityMismatchError(f"expected a {k}-uniform hypergraph")
    target = forbidden_path(k)
    copies = [sum(1 << i for i in ids) for ids in hc.copy_edge_sets(target, H)]
    if not copies:
        return IntersectingCover((), k - 2, k)
    # S must hit every copy; S must be (k-2)-intersecting
    limit = H.e if max_size is None else max_size
    sets = [set(e) for e in H.edges]
    relevant = sorted({i for c in copies for i in hc.iter_bits(c)})
    for size in range(1, limit + 1):
        for S in combinations(relevant, size):
            mask = sum(1 << i for i in S)
            if any(not (c & mask) for c in copies):
                continue
            if all(len(sets[a] & sets[b]) <= k - 2 for a, b in combinations(S, 2)):
                return IntersectingCover(tuple(S), k - 2, k)
    return None


def validate_cover(H: Hypergraph, cover: IntersectingCover) -> bool:
    """Re-check a cover with the vertex-wise matcher, not the copy engine."""
    from .ramsey import contains_pattern  # local import: ramsey imports this module

    if not is_intersecting_set(H, cover.cover, cover.pairwise_bound):
        return False
    rest = hc.spanning_subgraph(H, [i for i in range(H.e) if i not in set(cover.cover)])
    return not contains_pattern(rest, forbidden_path(cover.residual_free_of))


# -- tight-path structure ---------------------------------------------------


@dataclass
class StructureReport:
    k: int
    pairs_checked: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_pair_structure(H: Hypergraph, a0: int, a1: int) -> dict | None:
    """Check the two-edge structure statement for edges a0, a1 of H.

    Returns None on success, otherwise a description of the failure.
    """
    k = H.k
    A0, A1 = set(H.edges[a0]), set(H.edges[a1])
    common, left, right = A0 & A1, A0 - A1, A1 - A0
    m = len(common)
    others = [j for j in range(H.e) if j not in (a0, a1)]
    candidates = {}
    for i in range(1, k - m):
        candidates[i] = [j for j in others
                         if len(set(H.edges[j]) & common) == m
                         and len(set(H.edges[j]) & left) == i
                         and len(set(H.edges[j]) & right) == k - m - i]
    matching = sorted({j for c in candidates.values() for j in c})
    if any(not c for c in candidates.values()):
        return {"a0": a0, "a1": a1, "m": m, "problem": "missing edge for conditions 1-3",
                "candidates": {i: c for i, c in candidates.items()}}

    def side_ok(j: int) -> bool:
        E = set(H.edges[j])
        if len(E & common) > m - 1:
            return False
        return ((len(E & left) == 0 and len(E & right) == k - m)
                or (len(E & right) == 0 and len(E & left) == k - m))

    for pick in product(*[candidates[i] for i in sorted(candidates)]):
        if len(set(pick)) != len(pick):
            continue
        if all(side_ok(j) for j in others if j not in pick):
            if len(matching) != k - m - 1:
                return {"a0": a0, "a1": a1, "m": m, "problem": "extra edges meet conditions 1-3",
                        "matching": matching}
            return None
    return {"a0": a0, "a1": a1, "m": m, "problem": "a remaining edge fails (i)-(iii)"}


def verify_structure_on(H: Hypergraph) -> StructureReport:
    report = StructureReport(H.k)
    for a0, a1 in product(range(H.e), repeat=2):
        if a0 == a1 or not set(H.edges[a0]) & set(H.edges[a1]):
            continue
        report.pairs_checked += 1
        bad = check_pair_structure(H, a0, a1)
        if bad is not None:
            report.failures.append(bad)
    return report


def verify_tight_path_structure(k: int) -> StructureReport:
    """All ordered pairs of intersecting edges of T^k_{2k}."""
    return verify_structure_on(forbidden_path(k))


def mutate_edge(H: Hypergraph, edge: int, old: int, new: int) -> Hypergraph:
    """Replace vertex ``old`` by ``new`` in one edge (new may be a fresh id)."""
    edges = [list(e) for e in H.edges]
    edges[edge] = [new if x == old else x for x in edges[edge]]
    return hc.new_hypergraph(H.k, max(H.vertex_count, new + 1), edges)


# -- 3-uniform, disjoint pairs ----------------------------------------------


@dataclass
class XYReport:
    hypothesis_met: bool
    disjoint_pairs: int = 0
    violations: list[tuple[int, int, int]] = field(default_factory=list)


def xy_disjoint_check(H: Hypergraph) -> XYReport:
    if H.k != 3:
        raise hc.UniformityMismatchError("the disjoint-pair check is for 3-uniform hypergraphs")
    sets = [set(e) for e in H.edges]
    for trio in combinations(range(H.e), 3):
        if all(len(sets[a] & sets[b]) <= 1 for a, b in combinations(trio, 2)):
            return XYReport(False)
    report = XYReport(True)
    for x, y in combinations(range(H.e), 2):
        if sets[x] & sets[y]:
            continue
        report.disjoint_pairs += 1
        for e in range(H.e):
            if e in (x, y):
                continue
            hits = [len(sets[e] & sets[x]), len(sets[e] & sets[y])]
            # exactly one of the two intersections has two vertices
            if hits.count(2) != 1:
                report.violations.append((x, y, e))
    return report


# -- random 7-edge instances ------------------------------------------------


def random_three_uniform(edges: int, pool: int, rng: random.Random) -> Hypergraph:
    chosen = rng.sample(list(combinations(range(pool), 3)), edges)
    return hc.new_hypergraph(3, pool, chosen)


@dataclass
class SamplingReport:
    instances: int
    successes: int
    revalidated: int
    failures: list[Hypergraph] = field(default_factory=list)


def sample_seven_edge_covers(count: int = 1000, seed: int = 0, pool: int = 12) -> SamplingReport:
    """find_path_cover on seeded random 3-uniform 7-edge hypergraphs."""
    if pool > 12 or pool < 5:
        raise ValueError("vertex pool must lie in 5..12")
    rng = random.Random(seed)
    report = SamplingReport(count, 0, 0)
    for _ in range(count):
        size = rng.randint(5, pool)
        H = random_three_uniform(7, size, rng)
        cover = find_path_cover(H, 3)
        if cover is None:
            report.failures.append(H)
            continue
        report.successes += 1
        if validate_cover(H, cover):
            report.revalidated += 1
    return report


def claim_size(ell: int) -> int:
    return ceil(ell / 2)
