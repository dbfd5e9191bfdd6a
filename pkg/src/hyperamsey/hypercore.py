"""Uniform hypergraphs, copy enumeration and isomorphism.

Vertices are dense integer ids ``0..vertex_count-1``; edges are sorted
tuples kept in lexicographic order, so an edge's position in
``Hypergraph.edges`` is a stable edge id that the rest of the package
uses for bitset bookkeeping.
"""

from __future__ import annotations

import json
import struct
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations

import pynauty

Edge = tuple[int, ...]


class HypergraphError(ValueError):
    """Base class for malformed hypergraph input."""


class NonUniformEdgeError(HypergraphError):
    pass


class RepeatedVertexError(NonUniformEdgeError):
    """An edge lists the same vertex twice."""


class VertexOutOfRangeError(HypergraphError):
    pass


class DuplicateEdgeError(HypergraphError):
    pass


class UniformityMismatchError(HypergraphError):
    pass


@dataclass(frozen=True)
class Hypergraph:
    k: int
    vertex_count: int
    edges: tuple[Edge, ...]
    # original vertex ids when this graph was cut out of a larger one
    labels: tuple[int, ...] | None = field(default=None, compare=False, repr=False)

    @property
    def e(self) -> int:
        return len(self.edges)

    @property
    def v(self) -> int:
        return self.vertex_count

    def degree(self, x: int) -> int:
        return sum(1 for edge in self.edges if x in edge)

    def degrees(self) -> list[int]:
        deg = [0] * self.vertex_count
        for edge in self.edges:
            for x in edge:
                deg[x] += 1
        return deg

    def isolated_vertices(self) -> list[int]:
        return [x for x, d in enumerate(self.degrees()) if d == 0]

    def edge_id(self, edge: Iterable[int]) -> int:
        return _edge_lookup(self)[tuple(sorted(edge))]

    def has_edge(self, edge: Iterable[int]) -> bool:
        return tuple(sorted(edge)) in _edge_lookup(self)

    def vertex_masks(self) -> list[int]:
        """Bitmask of edge ids incident to each vertex."""
        return list(_vertex_masks(self))

    def edge_masks(self) -> list[int]:
        """Bitmask of vertices for each edge."""
        return [sum(1 << x for x in edge) for edge in self.edges]

    def to_dict(self) -> dict:
        return {"k": self.k, "vertices": self.vertex_count, "edges": [list(e) for e in self.edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> Hypergraph:
        return new_hypergraph(data["k"], data["vertices"], data["edges"])

    @classmethod
    def from_json(cls, text: str) -> Hypergraph:
        return cls.from_dict(json.loads(text))

    def __repr__(self) -> str:
        return f"Hypergraph(k={self.k}, v={self.vertex_count}, e={len(self.edges)})"


@dataclass(frozen=True)
class Copy:
    """One copy of a pattern inside a host.

    ``vertex_map[i]`` is the host vertex of pattern vertex ``i``;
    ``edge_ids`` index into ``host.edges``.
    """

    vertex_map: tuple[int, ...]
    edge_images: tuple[Edge, ...]
    edge_ids: tuple[int, ...]

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edge_ids)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.vertex_map)


def new_hypergraph(k: int, vertex_count: int, edges: Iterable[Iterable[int]]) -> Hypergraph:
    if k < 1:
        raise HypergraphError(f"uniformity must be positive, got {k}")
    if vertex_count < 0:
        raise HypergraphError("vertex_count must be non-negative")
    normalized = []
    for raw in edges:
        raw = list(raw)
        edge = tuple(sorted(set(raw)))
        if len(edge) != len(raw):
            raise RepeatedVertexError(f"edge {raw} repeats a vertex")
        if len(edge) != k:
            raise NonUniformEdgeError(f"edge {raw} has {len(edge)} vertices, expected {k}")
        if edge[0] < 0 or edge[-1] >= vertex_count:
            raise VertexOutOfRangeError(f"edge {raw} leaves 0..{vertex_count - 1}")
        normalized.append(edge)
    ordered = sorted(normalized)
    for a, b in zip(ordered, ordered[1:]):
        if a == b:
            raise DuplicateEdgeError(f"edge {list(a)} listed twice")
    return Hypergraph(k, vertex_count, tuple(ordered))


def _trusted(k: int, vertex_count: int, edges: Iterable[Edge], labels=None) -> Hypergraph:
    return Hypergraph(k, vertex_count, tuple(sorted(set(edges))), labels)


@lru_cache(maxsize=4096)
def _edge_lookup(H: Hypergraph) -> dict[Edge, int]:
    return {edge: i for i, edge in enumerate(H.edges)}


@lru_cache(maxsize=64)
def _extensions(H: Hypergraph) -> dict[Edge, dict[int, int]]:
    """(k-1)-subset of an edge -> {missing vertex: edge id} in edge order."""
    index: dict[Edge, dict[int, int]] = {}
    for i, edge in enumerate(H.edges):
        for y in edge:
            index.setdefault(tuple(x for x in edge if x != y), {})[y] = i
    return index


@lru_cache(maxsize=4096)
def _vertex_masks(H: Hypergraph) -> tuple[int, ...]:
    masks = [0] * H.vertex_count
    for i, edge in enumerate(H.edges):
        bit = 1 << i
        for x in edge:
            masks[x] |= bit
    return tuple(masks)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- subgraphs --------------------------------------------------------------


def induced_subgraph(H: Hypergraph, U: Iterable[int]) -> Hypergraph:
    """Edges of ``H`` inside ``U``, relabelled order-preservingly.

    The original ids are kept in ``labels``.
    """
    kept = sorted(set(U))
    for x in kept:
        if not 0 <= x < H.vertex_count:
            raise VertexOutOfRangeError(f"vertex {x} not in host")
    index = {x: i for i, x in enumerate(kept)}
    edges = [tuple(index[x] for x in e) for e in H.edges if all(x in index for x in e)]
    return _trusted(H.k, len(kept), edges, tuple(kept))


def edge_subgraph(H: Hypergraph, edge_ids: Iterable[int]) -> Hypergraph:
    """Subgraph formed by the given edges on the union of their vertices."""
    chosen = [H.edges[i] for i in sorted(set(edge_ids))]
    kept = sorted({x for e in chosen for x in e})
    index = {x: i for i, x in enumerate(kept)}
    edges = [tuple(index[x] for x in e) for e in chosen]
    return _trusted(H.k, len(kept), edges, tuple(kept))


def spanning_subgraph(H: Hypergraph, edge_ids: Iterable[int]) -> Hypergraph:
    """Same vertex set as ``H``, only the given edges."""
    return _trusted(H.k, H.vertex_count, [H.edges[i] for i in set(edge_ids)])


def link(H: Hypergraph, x: int) -> Hypergraph:
    """The (k-1)-uniform link of ``x``; vertex ids are kept, ``x`` stays isolated."""
    if not 0 <= x < H.vertex_count:
        raise VertexOutOfRangeError(f"vertex {x} not in host")
    edges = [tuple(y for y in e if y != x) for e in H.edges if x in e]
    return _trusted(H.k - 1, H.vertex_count, edges)


def disjoint_union(*graphs: Hypergraph) -> Hypergraph:
    k = graphs[0].k
    edges, offset = [], 0
    for G in graphs:
        if G.k != k:
            raise UniformityMismatchError("disjoint union needs equal uniformity")
        edges.extend(tuple(x + offset for x in e) for e in G.edges)
        offset += G.vertex_count
    return _trusted(k, offset, edges)


def relabel(H: Hypergraph, perm: Sequence[int]) -> Hypergraph:
    """Apply the vertex permutation ``x -> perm[x]``."""
    return _trusted(H.k, H.vertex_count, [tuple(sorted(perm[x] for x in e)) for e in H.edges])


def complete_hypergraph(n: int, k: int) -> Hypergraph:
    return Hypergraph(k, n, tuple(combinations(range(n), k)))


# -- embedding search -------------------------------------------------------


class _Plan:
    """Edge order for matching a pattern: each next edge overlaps the
    already-mapped vertices as much as possible."""

    def __init__(self, F: Hypergraph, first: int):
        order = [first]
        mapped = set(F.edges[first])
        remaining = set(range(F.e)) - {first}
        while remaining:
            nxt = max(remaining, key=lambda j: (len(mapped & set(F.edges[j])), -j))
            order.append(nxt)
            mapped |= set(F.edges[nxt])
            remaining.discard(nxt)
        self.steps = []
        seen: set[int] = set()
        for j in order:
            edge = F.edges[j]
            known = tuple(x for x in edge if x in seen)
            fresh = tuple(x for x in edge if x not in seen)
            self.steps.append((known, fresh))
            seen.update(fresh)
        self.covered = seen


def _search(F: Hypergraph, H: Hypergraph, plan: _Plan, first_bijections, min_break: bool,
            emit) -> None:
    """Call ``emit(assignment, edge ids)`` for each embedding of F into H
    until it returns True.

    Steps that add no vertex are checked inline right after the step that
    completes them.  With ``min_break`` the image of the first planned edge
    must be the smallest edge id of the image set.
    """
    vmasks = _vertex_masks(H)
    lookup = _edge_lookup(H)
    ext = _extensions(H) if H.k > 1 else {}
    all_edges = (1 << H.e) - 1
    # fold vertex-free steps into the preceding step
    grouped: list[tuple[tuple, tuple, list[tuple]]] = []
    for known, fresh in plan.steps:
        if fresh or not grouped:
            grouped.append((known, fresh, []))
        else:
            grouped[-1][2].append(known)
    nsteps = len(grouped)
    assign: dict[int, int] = {}
    used: set[int] = set()
    images: list[int] = []
    stop = False

    def checks_pass(checks, first_id: int) -> int:
        """Number of check images pushed, or -1 on failure (nothing pushed)."""
        pushed = 0
        for known in checks:
            eid = lookup.get(tuple(sorted([assign[x] for x in known])))
            if eid is None or (min_break and eid <= first_id) or eid in images:
                del images[len(images) - pushed:]
                return -1
            images.append(eid)
            pushed += 1
        return pushed

    def descend(depth: int, first_id: int, checks) -> None:
        nonlocal stop
        pushed = checks_pass(checks, first_id)
        if pushed < 0:
            return
        if depth == nsteps:
            stop = bool(emit(dict(assign), tuple(images)))
        else:
            rec(depth, first_id)
        if pushed:
            del images[-pushed:]

    def rec(depth: int, first_id: int) -> None:
        known, fresh, checks = grouped[depth]
        if not fresh:  # only possible for a pattern edge repeated in the plan
            return
        if len(fresh) == 1:
            # every check completed here contains x: intersect their extension maps
            x = fresh[0]
            base = ext.get(tuple(sorted([assign[z] for z in known])))
            if not base:
                return
            maps = []
            for c in checks:
                m = ext.get(tuple(sorted([assign[z] for z in c if z != x])))
                if not m:
                    return
                maps.append(m)
            for y, eid in base.items():
                if y in used or (min_break and eid <= first_id):
                    continue
                extra = []
                for m in maps:
                    ce = m.get(y)
                    if ce is None or (min_break and ce <= first_id) or ce == eid or ce in extra:
                        break
                    extra.append(ce)
                else:
                    assign[x] = y
                    used.add(y)
                    images.append(eid)
                    images.extend(extra)
                    descend(depth + 1, first_id, ())
                    del images[len(images) - 1 - len(extra):]
                    del assign[x]
                    used.discard(y)
                    if stop:
                        return
            return
        cand = all_edges
        for x in known:
            cand &= vmasks[assign[x]]
        if min_break:
            cand &= ~((1 << (first_id + 1)) - 1)
        known_imgs = {assign[x] for x in known}
        for eid in iter_bits(cand):
            rest = [y for y in H.edges[eid] if y not in known_imgs]
            if any(y in used for y in rest):
                continue
            for perm in permutations(rest):
                for x, y in zip(fresh, perm):
                    assign[x] = y
                    used.add(y)
                images.append(eid)
                descend(depth + 1, first_id, checks)
                images.pop()
                for x, y in zip(fresh, perm):
                    del assign[x]
                    used.discard(y)
                if stop:
                    return

    first_fresh, first_checks = grouped[0][1], grouped[0][2]
    for eid, host_edge in enumerate(H.edges):
        for bij in first_bijections:
            for x, y in zip(first_fresh, (host_edge[i] for i in bij)):
                assign[x] = y
                used.add(y)
            images.append(eid)
            descend(1, eid, first_checks)
            images.pop()
            assign.clear()
            used.clear()
            if stop:
                return


def _collect(F, H, plan, bijections, min_break, limit=None):
    out = []

    def emit(a, ids):
        out.append((a, ids))
        return limit is not None and len(out) >= limit

    _search(F, H, plan, bijections, min_break, emit)
    return out


def _all_bijections(k: int):
    return list(permutations(range(k)))


def embeddings(F: Hypergraph, H: Hypergraph, limit: int | None = None) -> list[dict[int, int]]:
    """Every injective edge-preserving map from the non-isolated part of F into H."""
    if F.k != H.k:
        raise UniformityMismatchError(f"pattern is {F.k}-uniform, host is {H.k}-uniform")
    if F.e == 0:
        return [{}]
    plan = _Plan(F, 0)
    return [a for a, _ in _collect(F, H, plan, _all_bijections(F.k), False, limit)]


@lru_cache(maxsize=256)
def _pattern_plans(F: Hypergraph):
    """Orbit representatives of Aut(F) on edges, each with the bijections
    onto a host edge that are distinct modulo the edge stabiliser."""
    autos = embeddings(F, F)
    orbit_of = {}
    reps = []
    for j in range(F.e):
        if j in orbit_of:
            continue
        reps.append(j)
        for a in autos:
            img = _edge_lookup(F)[tuple(sorted(a[x] for x in F.edges[j]))]
            orbit_of[img] = j
    plans = []
    for r in reps:
        plan = _Plan(F, r)
        fresh = plan.steps[0][1]  # pattern vertices of edge r in plan order
        pos = {x: i for i, x in enumerate(fresh)}
        stab = [a for a in autos if tuple(sorted(a[x] for x in fresh)) == tuple(sorted(fresh))]
        seen, bijections = set(), []
        for bij in permutations(range(F.k)):
            # bij[i] is the host-edge position receiving pattern vertex fresh[i]
            key = min(tuple(bij[pos[s[x]]] for x in fresh) for s in stab)
            if key not in seen:
                seen.add(key)
                bijections.append(bij)
        plans.append((plan, bijections))
    return tuple(plans)


def copy_edge_sets(F: Hypergraph, H: Hypergraph, limit: int | None = None) -> list[tuple[int, ...]]:
    """Edge-id sets (sorted tuples) of all copies of F in H, sorted.

    ``limit`` stops the search once that many distinct copies are found;
    callers detect truncation by ``len(result) >= limit``.
    """
    if F.k != H.k:
        raise UniformityMismatchError(f"pattern is {F.k}-uniform, host is {H.k}-uniform")
    if F.e == 0:
        return [()] if H.vertex_count >= F.vertex_count else []
    if F.e > H.e:
        return []
    isolated = len(F.isolated_vertices())
    found: set[tuple[int, ...]] = set()
    truncated = False

    def emit(_, ids):
        nonlocal truncated
        key = tuple(sorted(ids))
        if key in found:
            return False
        if isolated:
            span = {x for i in key for x in H.edges[i]}
            if H.vertex_count - len(span) < isolated:
                return False
        found.add(key)
        truncated = limit is not None and len(found) >= limit
        return truncated

    for plan, bijections in _pattern_plans(F):
        _search(F, H, plan, bijections, True, emit)
        if truncated:
            break
    return sorted(found)


def enumerate_copies(F: Hypergraph, H: Hypergraph) -> list[Copy]:
    """All copies of F in H, one per distinct edge-image set, in edge-id order."""
    if F.k != H.k:
        raise UniformityMismatchError(f"pattern is {F.k}-uniform, host is {H.k}-uniform")
    copies = []
    for ids in copy_edge_sets(F, H):
        sub = spanning_subgraph(H, ids)
        a = first_embedding(F, sub, exact_edges=True)
        vmap = _complete_map(F, H, a)
        copies.append(Copy(vmap, tuple(H.edges[i] for i in ids), ids))
    return copies


def _complete_map(F: Hypergraph, H: Hypergraph, partial: dict[int, int]) -> tuple[int, ...]:
    used = set(partial.values())
    spare = (y for y in range(H.vertex_count) if y not in used)
    return tuple(partial[x] if x in partial else next(spare) for x in range(F.vertex_count))


def first_embedding(F: Hypergraph, H: Hypergraph, exact_edges: bool = False) -> dict[int, int] | None:
    if F.e == 0:
        return {}
    plan = _Plan(F, 0)
    hit: list[dict[int, int]] = []

    def emit(a, ids):
        if exact_edges and len(ids) != H.e:
            return False
        hit.append(a)
        return True

    _search(F, H, plan, _all_bijections(F.k), False, emit)
    return hit[0] if hit else None


def has_copy(F: Hypergraph, H: Hypergraph) -> bool:
    if F.k != H.k:
        raise UniformityMismatchError(f"pattern is {F.k}-uniform, host is {H.k}-uniform")
    if F.e > H.e:
        return False
    return bool(copy_edge_sets(F, H, limit=1))


def automorphisms(H: Hypergraph) -> list[tuple[int, ...]]:
    """Vertex permutations preserving the edge set; isolated vertices stay fixed."""
    perms = []
    for a in embeddings(H, H):
        perms.append(tuple(a.get(x, x) for x in range(H.vertex_count)))
    return perms


# -- isomorphism ------------------------------------------------------------


def canonical_form(H: Hypergraph) -> bytes:
    """Isomorphism-invariant byte code (nauty certificate of the incidence graph)."""
    n, m = H.vertex_count, H.e
    header = struct.pack(">III", H.k, n, m)
    if m == 0:
        return header
    adjacency = {n + j: list(edge) for j, edge in enumerate(H.edges)}
    colouring = [set(range(n)), set(range(n, n + m))]
    g = pynauty.Graph(n + m, directed=False, adjacency_dict=adjacency, vertex_coloring=colouring)
    return header + pynauty.certificate(g)


def is_isomorphic(H1: Hypergraph, H2: Hypergraph) -> bool:
    """Exact test by direct bijection search (independent of ``canonical_form``)."""
    if (H1.k, H1.vertex_count, H1.e) != (H2.k, H2.vertex_count, H2.e):
        return False
    if sorted(H1.degrees()) != sorted(H2.degrees()):
        return False
    if H1.e == 0:
        return True
    return first_embedding(H1, H2, exact_edges=True) is not None
