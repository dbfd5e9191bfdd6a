"""Open/closed edges, the strip-and-re-add colouring, cores, and the arrow search.

Colour 0 is "red" and must avoid monochromatic copies of the first
target; colour 1 is "blue" and avoids the second.  Copies are handled as
Python-int bitmasks over host edge ids.
"""

from __future__ import annotations

import heapq
import random
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from . import hypercore as hc
from .hypercore import Hypergraph, iter_bits

RED, BLUE = 0, 1


def _masks(sets) -> list[int]:
    return [sum(1 << i for i in ids) for ids in sets]


def copy_masks(F: Hypergraph, H: Hypergraph, limit: int | None = None) -> list[int]:
    return _masks(hc.copy_edge_sets(F, H, limit))


def _by_edge(copies: Sequence[int], e: int) -> list[list[int]]:
    index: list[list[int]] = [[] for _ in range(e)]
    for c, mask in enumerate(copies):
        for i in iter_bits(mask):
            index[i].append(c)
    return index


# -- classification ---------------------------------------------------------


@dataclass
class EdgeClassification:
    open: tuple[int, ...]
    closed: tuple[int, ...]
    certificates: dict[int, tuple[int, int]]  # edge -> (F1-copy mask, F2-copy mask)

    def verify(self) -> bool:
        return all(a & b == 1 << e and a >> e & 1 and b >> e & 1
                   for e, (a, b) in self.certificates.items())


def _closing_pair(e: int, f1: list[int], f2: list[int]) -> tuple[int, int] | None:
    bit = 1 << e
    for a in f1:
        for b in f2:
            if a & b == bit:
                return a, b
    return None


def classify_edges(H: Hypergraph, F1: Hypergraph, F2: Hypergraph,
                   copies1: Sequence[int] | None = None,
                   copies2: Sequence[int] | None = None) -> EdgeClassification:
    if not (H.k == F1.k == F2.k):
        raise hc.UniformityMismatchError("host and targets must share uniformity")
    c1 = copy_masks(F1, H) if copies1 is None else list(copies1)
    c2 = copy_masks(F2, H) if copies2 is None else list(copies2)
    by1, by2 = _by_edge(c1, H.e), _by_edge(c2, H.e)
    open_, closed, certs = [], [], {}
    for e in range(H.e):
        pair = _closing_pair(e, [c1[i] for i in by1[e]], [c2[i] for i in by2[e]])
        if pair is None:
            open_.append(e)
        else:
            closed.append(e)
            certs[e] = pair
    return EdgeClassification(tuple(open_), tuple(closed), certs)


# -- stripping and cores ----------------------------------------------------


@dataclass
class CoreDecomposition:
    host: Hypergraph
    remaining: tuple[int, ...]          # edge ids of the stripped hypergraph
    removal_stack: tuple[int, ...]      # open edges in removal order
    cores: list[tuple[int, ...]] = field(default_factory=list)

    def core_graph(self, i: int) -> Hypergraph:
        return hc.edge_subgraph(self.host, self.cores[i])

    def stripped_graph(self) -> Hypergraph:
        return hc.spanning_subgraph(self.host, self.remaining)


def strip_open(H: Hypergraph, F1: Hypergraph, F2: Hypergraph,
               copies1: Sequence[int] | None = None, copies2: Sequence[int] | None = None,
               order_seed: int | None = None) -> CoreDecomposition:
    """Remove open edges until none is left.

    Each round removes the smallest open edge id, or with ``order_seed`` the
    open edge of smallest random priority.
    """
    c1 = copy_masks(F1, H) if copies1 is None else list(copies1)
    c2 = copy_masks(F2, H) if copies2 is None else list(copies2)
    by1, by2 = _by_edge(c1, H.e), _by_edge(c2, H.e)
    alive1, alive2 = [True] * len(c1), [True] * len(c2)
    present = [True] * H.e
    if order_seed is None:
        priority = list(range(H.e))
    else:
        priority = list(range(H.e))
        random.Random(order_seed).shuffle(priority)

    def is_open(e: int) -> bool:
        bit = 1 << e
        reds = [c1[i] for i in by1[e] if alive1[i]]
        if not reds:
            return True
        for j in by2[e]:
            if alive2[j]:
                b = c2[j]
                for a in reds:
                    if a & b == bit:
                        return False
        return True

    heap = [(priority[e], e) for e in range(H.e) if is_open(e)]
    heapq.heapify(heap)
    queued = {e for _, e in heap}
    stack = []
    while heap:
        _, e = heapq.heappop(heap)
        queued.discard(e)
        if not present[e] or not is_open(e):
            continue
        present[e] = False
        stack.append(e)
        touched = set()
        for i in by1[e]:
            if alive1[i]:
                alive1[i] = False
                touched.update(iter_bits(c1[i]))
        for j in by2[e]:
            if alive2[j]:
                alive2[j] = False
                touched.update(iter_bits(c2[j]))
        for f in touched:
            if present[f] and f not in queued and is_open(f):
                heapq.heappush(heap, (priority[f], f))
                queued.add(f)
    remaining = tuple(e for e in range(H.e) if present[e])
    return CoreDecomposition(H, remaining, tuple(stack))


class OpenEdgeError(ValueError):
    pass


def core_decompose(H: Hypergraph, F1: Hypergraph, F2: Hypergraph,
                   copies1: Sequence[int] | None = None,
                   copies2: Sequence[int] | None = None) -> CoreDecomposition:
    """Split a hypergraph without open edges into copy-connected cores."""
    c1 = copy_masks(F1, H) if copies1 is None else list(copies1)
    c2 = copy_masks(F2, H) if copies2 is None else list(copies2)
    cls = classify_edges(H, F1, F2, c1, c2)
    if cls.open:
        raise OpenEdgeError(f"{len(cls.open)} open edges; strip first")
    return _components(H, c1 + c2, tuple(range(H.e)), ())


def _components(H: Hypergraph, copies: Sequence[int], remaining: tuple[int, ...],
                stack: tuple[int, ...]) -> CoreDecomposition:
    parent = list(range(H.e))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    keep = set(remaining)
    for mask in copies:
        ids = list(iter_bits(mask))
        if not keep.issuperset(ids):
            continue
        r = find(ids[0])
        for i in ids[1:]:
            parent[find(i)] = r
    groups: dict[int, list[int]] = {}
    for e in remaining:
        groups.setdefault(find(e), []).append(e)
    cores = sorted(tuple(g) for g in groups.values())
    return CoreDecomposition(H, remaining, stack, cores)


def decompose(H: Hypergraph, F1: Hypergraph, F2: Hypergraph,
              copies1: Sequence[int] | None = None,
              copies2: Sequence[int] | None = None) -> CoreDecomposition:
    """strip_open followed by the core split."""
    c1 = copy_masks(F1, H) if copies1 is None else list(copies1)
    c2 = copy_masks(F2, H) if copies2 is None else list(copies2)
    stripped = strip_open(H, F1, F2, c1, c2)
    return _components(H, c1 + c2, stripped.remaining, stripped.removal_stack)


# -- arrow search -----------------------------------------------------------


@dataclass
class Colouring:
    r: int
    assignment: tuple[int, ...]

    def to_list(self) -> list[int]:
        return list(self.assignment)


@dataclass
class ArrowVerdict:
    arrows: bool | None          # None: budget exhausted, no decision
    witness: Colouring | None
    nodes_explored: int

    @property
    def unknown(self) -> bool:
        return self.arrows is None


def solve_colouring(e_count: int, clauses: Sequence[tuple[int, Sequence[int]]], r: int,
                    budget: int | None = None) -> tuple[list[int] | None, int, bool]:
    """Find colours for ``e_count`` variables such that no clause (i, edges)
    has all its edges coloured i.  Returns (assignment or None, nodes, exhausted)."""
    full = (1 << r) - 1
    domain = [full] * e_count
    colour = [-1] * e_count
    size = [len(c[1]) for c in clauses]
    ccol = [c[0] for c in clauses]
    cedges = [list(c[1]) for c in clauses]
    cnt = [0] * len(clauses)     # edges already coloured the clause colour
    free = list(size)            # unassigned edges
    occurs: list[list[int]] = [[] for _ in range(e_count)]
    for ci, (_, edges) in enumerate(clauses):
        for x in edges:
            occurs[x].append(ci)
        if size[ci] == 0:
            return None, 0, False
    weight = [len(o) for o in occurs]
    trail: list[tuple] = []
    nodes = 0

    def assign(x: int, col: int, queue: list) -> bool:
        colour[x] = col
        trail.append(("a", x))
        ok = True
        for ci in occurs[x]:
            free[ci] -= 1
            if ccol[ci] == col:
                cnt[ci] += 1
            if cnt[ci] == size[ci]:
                ok = False
            elif free[ci] == 1 and cnt[ci] == size[ci] - 1:
                for y in cedges[ci]:
                    if colour[y] < 0:
                        bit = 1 << ccol[ci]
                        if domain[y] & bit:
                            trail.append(("d", y, domain[y]))
                            domain[y] &= ~bit
                            if domain[y] == 0:
                                ok = False
                            elif domain[y] & (domain[y] - 1) == 0:
                                queue.append(y)
                        break
        return ok

    def undo_to(mark: int) -> None:
        while len(trail) > mark:
            item = trail.pop()
            if item[0] == "a":
                x = item[1]
                col = colour[x]
                for ci in occurs[x]:
                    free[ci] += 1
                    if ccol[ci] == col:
                        cnt[ci] -= 1
                colour[x] = -1
            else:
                domain[item[1]] = item[2]

    def propagate(queue: list) -> bool:
        while queue:
            y = queue.pop()
            if colour[y] >= 0:
                continue
            if domain[y] == 0:
                return False
            col = (domain[y] & -domain[y]).bit_length() - 1
            if not assign(y, col, queue):
                return False
        return True

    exhausted = False

    def pick() -> int:
        best, best_key = -1, None
        for x in range(e_count):
            if colour[x] < 0:
                key = (domain[x].bit_count(), -weight[x], x)
                if best_key is None or key < best_key:
                    best, best_key = x, key
        return best

    def search() -> bool:
        # iterative depth-first search; a frame is [variable, next colour, trail mark]
        nonlocal nodes, exhausted
        stack: list[list[int]] = []
        while True:
            x = pick()
            if x < 0:
                return True
            stack.append([x, 0, len(trail)])
            while stack:
                frame = stack[-1]
                x, col, mark = frame
                undo_to(mark)
                moved = False
                while col < r:
                    c, col = col, col + 1
                    if not domain[x] >> c & 1:
                        continue
                    nodes += 1
                    if budget is not None and nodes > budget:
                        exhausted = True
                        return False
                    queue: list = []
                    if assign(x, c, queue) and propagate(queue):
                        moved = True
                        break
                    undo_to(mark)
                frame[1] = col
                if moved:
                    break
                stack.pop()
            else:
                return False

    found = search()
    if not found:
        return None, nodes, exhausted
    return [max(c, 0) for c in colour], nodes, False


def local_search(e_count: int, clauses: Sequence[tuple[int, Sequence[int]]], r: int,
                 flips: int, seed: int = 0, noise: float = 0.2) -> list[int] | None:
    """WalkSAT-style repair: recolour an edge of a monochromatic clause,
    preferring the move that creates the fewest new ones.  Incomplete: a
    None answer proves nothing."""
    rng = random.Random(seed)
    occurs: list[list[int]] = [[] for _ in range(e_count)]
    for ci, (_, edges) in enumerate(clauses):
        if not edges:
            return None
        for x in edges:
            occurs[x].append(ci)
    ccol = [c[0] for c in clauses]
    size = [len(c[1]) for c in clauses]
    colour = [rng.randrange(r) for _ in range(e_count)]
    cnt = [sum(colour[x] == ccol[ci] for x in edges) for ci, (_, edges) in enumerate(clauses)]
    bad = {ci for ci in range(len(clauses)) if cnt[ci] == size[ci]}

    def cost(x: int, new: int) -> int:
        return sum(1 for ci in occurs[x] if ccol[ci] == new and cnt[ci] == size[ci] - 1)

    for _ in range(flips):
        if not bad:
            return colour
        ci = rng.choice(tuple(bad)) if len(bad) < 64 else next(iter(bad))
        options = [(x, c) for x in clauses[ci][1] for c in range(r) if c != colour[x]]
        if rng.random() < noise:
            x, new = rng.choice(options)
        else:
            x, new = min(options, key=lambda o: (cost(*o), rng.random()))
        old = colour[x]
        colour[x] = new
        for cj in occurs[x]:
            if ccol[cj] == old:
                cnt[cj] -= 1
                bad.discard(cj)
            elif ccol[cj] == new:
                cnt[cj] += 1
                if cnt[cj] == size[cj]:
                    bad.add(cj)
    return colour if not bad else None


def arrow(G: Hypergraph, targets: Sequence[Hypergraph], budget: int | None = None,
          copies: Sequence[Sequence[int]] | None = None) -> ArrowVerdict:
    """Does every r-colouring of G contain a copy of targets[i] in colour i?"""
    for F in targets:
        if F.k != G.k:
            raise hc.UniformityMismatchError("targets and host must share uniformity")
    if copies is None:
        copies = [copy_masks(F, G) for F in targets]
    clauses = [(i, list(iter_bits(mask))) for i, cs in enumerate(copies) for mask in cs]
    assignment, nodes, exhausted = solve_colouring(G.e, clauses, len(targets), budget)
    if exhausted:
        return ArrowVerdict(None, None, nodes)
    if assignment is None:
        return ArrowVerdict(True, None, nodes)
    return ArrowVerdict(False, Colouring(len(targets), tuple(assignment)), nodes)


# -- independent validation -------------------------------------------------


def _matches(pattern: Hypergraph, host_edges: set, vertex_count: int) -> bool:
    """Vertex-by-vertex search for an injective map sending every pattern
    edge into ``host_edges``.  Shares no code with the copy engine.

    Candidates for the next pattern vertex are the host vertices extending
    the image of its best-mapped pattern edge to a subset of a host edge.
    """
    from itertools import combinations

    extend: dict[tuple, set] = {(): set()}
    for e in host_edges:
        extend[()].update(e)
        for size in range(1, len(e)):
            for sub in combinations(e, size):
                bucket = extend.setdefault(sub, set())
                bucket.update(y for y in e if y not in sub)
    pat_edges = [set(e) for e in pattern.edges]
    order: list[int] = []
    remaining = set(range(pattern.vertex_count))
    while remaining:
        placed = set(order)

        def score(x):
            best = max((len(e & placed) for e in pat_edges if x in e), default=-1)
            return (-best, x)

        nxt = min(remaining, key=score)
        order.append(nxt)
        remaining.discard(nxt)
    pos = {x: i for i, x in enumerate(order)}
    closing = [[] for _ in order]
    guide: list[tuple[int, ...] | None] = []
    for depth, x in enumerate(order):
        earlier = [tuple(sorted(y for y in e if pos[y] < depth)) for e in pat_edges if x in e]
        guide.append(max(earlier, key=len) if earlier else None)
    for e in pattern.edges:
        closing[max(pos[x] for x in e)].append(e)
    image = [-1] * pattern.vertex_count
    used = set()
    everything = set(range(vertex_count))

    def rec(depth: int) -> bool:
        if depth == len(order):
            return True
        x = order[depth]
        g = guide[depth]
        if g is None:
            cand = everything
        else:
            cand = extend.get(tuple(sorted(image[y] for y in g)), set())
        for y in sorted(cand - used):
            image[x] = y
            used.add(y)
            if all(tuple(sorted(image[z] for z in e)) in host_edges for e in closing[depth]) \
                    and rec(depth + 1):
                return True
            used.discard(y)
            image[x] = -1
        return False

    return rec(0)


def contains_pattern(H: Hypergraph, F: Hypergraph) -> bool:
    if F.e == 0:
        return H.vertex_count >= F.vertex_count
    return _matches(F, set(H.edges), H.vertex_count)


def validate_colouring(H: Hypergraph, c: Colouring | Sequence[int],
                       targets: Sequence[Hypergraph]) -> bool:
    """True iff no target i appears with all edges in colour i."""
    assignment = c.assignment if isinstance(c, Colouring) else tuple(c)
    if len(assignment) != H.e:
        raise ValueError("colouring must give one colour per host edge")
    for i, F in enumerate(targets):
        edges = {e for e, col in zip(H.edges, assignment) if col == i}
        if F.e == 0:
            return False
        if len(edges) >= F.e and _matches(F, edges, H.vertex_count):
            return False
    return True


def count_monochromatic(n: int, c: Colouring | Sequence[int],
                        targets: Sequence[Hypergraph]) -> list[int]:
    """Copies of targets[i] in colour i inside the complete k-graph on n vertices."""
    k = targets[0].k
    K = hc.complete_hypergraph(n, k)
    assignment = c.assignment if isinstance(c, Colouring) else tuple(c)
    if len(assignment) != K.e:
        raise ValueError("colouring must cover every edge of the complete hypergraph")
    counts = []
    for i, F in enumerate(targets):
        keep = [j for j, col in enumerate(assignment) if col == i]
        sub = hc.spanning_subgraph(K, keep)
        counts.append(len(hc.copy_edge_sets(F, sub)))
    return counts


# -- the strip / colour / re-add pipeline -----------------------------------


@dataclass
class FailureReport:
    stage: str
    message: str
    detail: dict = field(default_factory=dict)


def colour(H: Hypergraph, F1: Hypergraph, F2: Hypergraph, budget: int | None = None,
           copies1: Sequence[int] | None = None, copies2: Sequence[int] | None = None,
           flips: int = 20_000, seed: int = 0):
    """Colouring of H with no red F1 and no blue F2, or a FailureReport.

    Each core first gets ``flips`` steps of seeded local search; only if
    that finds nothing does the exact search (with ``budget``) run.
    """
    c1 = copy_masks(F1, H) if copies1 is None else list(copies1)
    c2 = copy_masks(F2, H) if copies2 is None else list(copies2)
    dec = decompose(H, F1, F2, c1, c2)
    assignment = [-1] * H.e
    for idx, core in enumerate(dec.cores):
        verdict = _colour_core(core, c1, c2, budget, flips, seed)
        if verdict.arrows is not False:
            stage = "core arrows" if verdict.arrows else "budget exhausted"
            return FailureReport(stage, f"core {idx} with {len(core)} edges could not be coloured",
                                 {"core": idx, "edges": list(core), "nodes": verdict.nodes_explored})
        for e, col in zip(core, verdict.witness.assignment):
            assignment[e] = col
    readd(H, c1, dec.removal_stack, assignment)
    return Colouring(2, tuple(assignment))


def _colour_core(core: Sequence[int], c1: Sequence[int], c2: Sequence[int],
                 budget: int | None, flips: int = 0, seed: int = 0) -> ArrowVerdict:
    local = {e: i for i, e in enumerate(core)}
    mask = sum(1 << e for e in core)

    def restrict(copies):
        out = []
        for cm in copies:
            if cm & mask == cm:
                out.append([local[e] for e in iter_bits(cm)])
        return out

    clauses = [(0, c) for c in restrict(c1)] + [(1, c) for c in restrict(c2)]
    if flips:
        quick = local_search(len(core), clauses, 2, flips, seed)
        if quick is not None:
            return ArrowVerdict(False, Colouring(2, tuple(quick)), 0)
    assignment, nodes, exhausted = solve_colouring(len(core), clauses, 2, budget)
    if exhausted:
        return ArrowVerdict(None, None, nodes)
    if assignment is None:
        return ArrowVerdict(True, None, nodes)
    return ArrowVerdict(False, Colouring(2, tuple(assignment)), nodes)


def readd(H: Hypergraph, c1: Sequence[int], stack: Sequence[int], assignment: list[int]) -> None:
    """Re-insert stripped edges in reverse order.  An edge goes blue when some
    F1-copy through it is red on all its other edges (edges not yet back count
    as absent, so such a copy must be complete); otherwise red."""
    by1 = _by_edge(c1, H.e)
    for e in reversed(stack):
        blue = False
        for i in by1[e]:
            others = [f for f in iter_bits(c1[i]) if f != e]
            if all(assignment[f] == RED for f in others):
                blue = True
                break
        assignment[e] = BLUE if blue else RED


# -- constructive colouring of sparse hypergraphs ---------------------------


def degree_bound(k: int, theta: Fraction) -> int:
    return (k * theta.numerator) // theta.denominator


def sparse_colouring(H: Hypergraph, k: int | None = None, t_k: int | None = None):
    """Peel minimum-degree vertices, then put each back and split its link with
    a path cover: cover edges red, the other edges through it blue."""
    from .constructions import lifted_triangle, tight_cycle, tight_cycle_length
    from .density import m_k_asym
    from .lemmalab import find_path_cover

    k = H.k if k is None else k
    if H.k != k or k < 4:
        raise hc.UniformityMismatchError("sparse colouring needs a k-uniform host with k >= 4")
    t_k = tight_cycle_length(k) if t_k is None else t_k
    theta = m_k_asym(lifted_triangle(k), tight_cycle(k, t_k)).value
    bound = degree_bound(k, theta)
    alive = set(range(H.vertex_count))
    live_edges = set(range(H.e))
    incident: list[set[int]] = [set() for _ in range(H.vertex_count)]
    for j, e in enumerate(H.edges):
        for x in e:
            incident[x].add(j)
    order: list[tuple[int, list[int]]] = []
    while alive:
        x = min(alive, key=lambda y: (len(incident[y] & live_edges), y))
        edges_x = sorted(incident[x] & live_edges)
        if len(edges_x) > bound:
            return FailureReport("degree", f"minimum degree {len(edges_x)} exceeds {bound}",
                                 {"vertex": x, "remaining_vertices": len(alive)})
        order.append((x, edges_x))
        live_edges.difference_update(edges_x)
        alive.discard(x)
    assignment = [-1] * H.e
    for x, edges_x in reversed(order):
        if not edges_x:
            continue
        link_edges = [tuple(y for y in H.edges[j] if y != x) for j in edges_x]
        L = hc.Hypergraph(k - 1, H.vertex_count, tuple(sorted(link_edges)))
        cover = find_path_cover(L, k - 1)
        if cover is None:
            return FailureReport("cover", f"no path cover for the link of vertex {x}",
                                 {"vertex": x, "link": L.to_dict()})
        red = {L.edges[i] for i in cover.cover}
        for j, le in zip(edges_x, link_edges):
            assignment[j] = RED if le in red else BLUE
    return Colouring(2, tuple(assignment))
