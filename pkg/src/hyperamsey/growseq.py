"""Grow sequences of closed cores, their step taxonomy and deterministic audits."""

from __future__ import annotations

import math
import random
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from . import hypercore as hc
from .constructions import check_asymmetric_balanced, generic_vertex_count
from .density import m_k_asym
from .hypercore import Hypergraph, iter_bits
from .ramsey import classify_edges, copy_masks

FIRST = "first"
REGULAR_OPEN = "regular-open"
REGULAR_CLOSED = "regular-closed"
DEGENERATE_F1 = "degenerate-F1"
DEGENERATE_FSTAR = "degenerate-Fstar"
REGULAR = (REGULAR_OPEN, REGULAR_CLOSED)


class CorruptCoreError(ValueError):
    pass


@dataclass(frozen=True)
class GrowConstants:
    C1: Fraction
    C2: Fraction
    alpha1: Fraction | None
    alpha2: Fraction
    alpha: Fraction
    d_max: Fraction
    L: Fraction | None            # None when C1 = 0 and the length bound says nothing
    v_f1: int
    length_bound_applicable: bool

    def t_max(self, n: int) -> float:
        return self.v_f1 * math.log(n) + float(self.d_max) + 1

    def to_dict(self) -> dict:
        return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.__dict__.items()}


def compute_constants(F1: Hypergraph, F2: Hypergraph, members=None,
                      theta: Fraction | None = None) -> GrowConstants:
    if F2.e < 3:
        raise ValueError("F2 needs at least three edges")
    theta = m_k_asym(F1, F2).value if theta is None else theta
    C1 = 1 - Fraction(1, F2.e - 2)
    C2 = Fraction(generic_vertex_count(F1, F2) + 1)
    alpha1 = None
    if members:
        alpha1 = check_asymmetric_balanced(F1, F2, members, theta).min_slack
    alpha2 = None
    full = (1 << F1.e) - 1
    for mask in range(1, full):
        ids = list(iter_bits(mask))
        vh = len({x for i in ids for x in F1.edges[i]})
        slack = Fraction(F1.e - len(ids)) / theta - (F1.vertex_count - vh)
        if alpha2 is None or slack < alpha2:
            alpha2 = slack
    if alpha2 is None:  # a single-edge F1 has no proper nonempty subgraph
        alpha2 = Fraction(1)
    alpha = alpha2 if alpha1 is None else min(alpha1, alpha2)
    d_max = Fraction(F1.vertex_count) / alpha + 1
    applicable = C1 > 0
    L = (1 + C2 / C1) * d_max + 1 if applicable else None
    return GrowConstants(C1, C2, alpha1, alpha2, alpha, d_max, L, F1.vertex_count, applicable)


# -- the sequence -----------------------------------------------------------


@dataclass
class GrowStep:
    kind: str                          # "F1" or "Fstar"
    edges: tuple[int, ...]             # core edge ids of F*_i
    vertices: tuple[int, ...]
    intersection_edges: tuple[int, ...]
    intersection_vertices: tuple[int, ...]
    cls: str
    line: int                          # 1, 9, 11, 14 or 16
    chosen_open_edge: int | None = None
    center: tuple[int, ...] = ()
    attachment: int | None = None
    generic: bool = False


@dataclass
class GrowSequence:
    core: Hypergraph
    theta: Fraction
    steps: list[GrowStep]
    open_after: list[frozenset[int]]   # open edges of G_i, i = 1..len
    F1: Hypergraph = field(repr=False, default=None)
    F2: Hypergraph = field(repr=False, default=None)

    def prefix_edges(self, i: int) -> set[int]:
        out: set[int] = set()
        for step in self.steps[:i]:
            out.update(step.edges)
        return out

    def to_dict(self) -> dict:
        return {
            "theta": str(self.theta),
            "core": self.core.to_dict(),
            "steps": [{
                "kind": s.kind, "class": s.cls, "line": s.line, "edges": list(s.edges),
                "intersection_edges": list(s.intersection_edges),
                "intersection_vertices": list(s.intersection_vertices),
                "chosen_open_edge": s.chosen_open_edge, "attachment": s.attachment,
                "generic": s.generic,
            } for s in self.steps],
        }


def _classify_step(kind: str, line: int, edges: set, vertices: set, prev_edges: set,
                   prev_vertices: set, theta: Fraction) -> tuple[str, tuple, tuple]:
    h_edges = tuple(sorted(edges & prev_edges))
    h_vertices = tuple(sorted(vertices & prev_vertices))
    if line == 1:
        return FIRST, h_edges, h_vertices
    if kind == "F1":
        return DEGENERATE_F1, h_edges, h_vertices
    dv = len(vertices) - len(h_vertices)
    if dv > 0 and Fraction(len(edges) - len(h_edges), dv) == theta:
        return (REGULAR_OPEN if line == 11 else REGULAR_CLOSED), h_edges, h_vertices
    return DEGENERATE_FSTAR, h_edges, h_vertices


def recompute_class(seq: GrowSequence, i: int) -> str:
    """Class of step i (1-based) from its copy and G_{i-1} alone."""
    step = seq.steps[i - 1]
    prev = seq.prefix_edges(i - 1)
    prev_v = {x for e in prev for x in seq.core.edges[e]}
    return _classify_step(step.kind, step.line, set(step.edges), set(step.vertices),
                          prev, prev_v, seq.theta)[0]


class _Context:
    def __init__(self, G: Hypergraph, F1: Hypergraph, F2: Hypergraph):
        self.G = G
        self.c1 = sorted(copy_masks(F1, G), key=_key)
        self.c2 = sorted(copy_masks(F2, G), key=_key)
        self.f1_by_edge: list[list[int]] = [[] for _ in range(G.e)]
        for mask in self.c1:
            for e in iter_bits(mask):
                self.f1_by_edge[e].append(mask)
        self.f2_by_edge: list[list[int]] = [[] for _ in range(G.e)]
        for mask in self.c2:
            for e in iter_bits(mask):
                self.f2_by_edge[e].append(mask)

    def open_edges(self, present: int) -> frozenset[int]:
        """Open edges of the prefix with edge mask ``present``, from scratch."""
        c1 = [m for m in self.c1 if m & present == m]
        c2 = [m for m in self.c2 if m & present == m]
        out = []
        for e in iter_bits(present):
            bit = 1 << e
            reds = [a for a in c1 if a & bit]
            if not any(a & b == bit for b in c2 if b & bit for a in reds):
                out.append(e)
        return frozenset(out)


    def fstar(self, center: int, e0: int, present: int) -> tuple[int, dict] | None:
        """Center plus petals (least F1-copy through each edge); if that lies in
        the prefix, the first edge with a petal leaving it takes its least such
        petal."""
        petals = {}
        for e in iter_bits(center):
            if e == e0:
                continue
            options = self.f1_by_edge[e]
            if not options:
                return None
            petals[e] = options[0]
        union = center
        for mask in petals.values():
            union |= mask
        if union & present != union:
            return union, petals
        for e in sorted(petals):
            for mask in self.f1_by_edge[e]:
                if mask & present != mask:
                    petals[e] = mask
                    union = center
                    for pm in petals.values():
                        union |= pm
                    return union, petals
        return None


class _OpenTracker:
    """Open edges along a growing prefix; a closed edge never reopens."""

    def __init__(self, ctx: _Context):
        self.ctx = ctx
        self.present = 0
        self.closed: set[int] = set()
        self.in1: list[list[int]] = [[] for _ in range(ctx.G.e)]
        self.in2: list[list[int]] = [[] for _ in range(ctx.G.e)]

    def grow(self, mask: int) -> frozenset[int]:
        new = mask & ~self.present
        self.present |= mask
        P = self.present
        touched: set[int] = set()
        for lists, by_edge in ((self.in1, self.ctx.f1_by_edge), (self.in2, self.ctx.f2_by_edge)):
            seen = set()
            for e in iter_bits(new):
                for c in by_edge[e]:
                    if c in seen or c & P != c:
                        continue
                    seen.add(c)
                    for x in iter_bits(c):
                        lists[x].append(c)
                        touched.add(x)
        for e in touched - self.closed:
            bit = 1 << e
            if any(a & b == bit for a in self.in1[e] for b in self.in2[e]):
                self.closed.add(e)
        return frozenset(e for e in iter_bits(P) if e not in self.closed)


def _key(mask: int) -> tuple[int, ...]:
    return tuple(iter_bits(mask))


def grow_sequence(core: Hypergraph, F1: Hypergraph, F2: Hypergraph,
                  theta: Fraction | None = None, max_steps: int = 10_000) -> GrowSequence:
    """Run the decomposition on a closed core."""
    theta = m_k_asym(F1, F2).value if theta is None else theta
    ctx = _Context(core, F1, F2)
    if not ctx.c1:
        raise CorruptCoreError("core contains no copy of F1")
    target = (1 << core.e) - 1
    steps: list[GrowStep] = []
    open_after: list[frozenset[int]] = []
    present = 0
    present_vertices: set[int] = set()
    tracker = _OpenTracker(ctx)

    def add(kind, mask, line, chosen=None, center=0, e0=None):
        nonlocal present
        edges = set(iter_bits(mask))
        vertices = {x for e in edges for x in core.edges[e]}
        cls, he, hv = _classify_step(kind, line, edges, vertices, set(iter_bits(present)),
                                     present_vertices, theta)
        generic = kind == "Fstar" and len(vertices) == generic_vertex_count(F1, F2)
        steps.append(GrowStep(kind, tuple(sorted(edges)), tuple(sorted(vertices)), he, hv, cls,
                              line, chosen, tuple(iter_bits(center)), e0, generic))
        present |= mask
        present_vertices.update(vertices)
        open_after.append(tracker.grow(mask))

    add("F1", ctx.c1[0], 1)
    while present != target:
        if len(steps) >= max_steps:
            raise CorruptCoreError(f"no termination within {max_steps} steps")
        open_now = open_after[-1]
        if open_now:
            e = None
            for step in steps:
                hits = [x for x in step.edges if x in open_now]
                if hits:
                    e = min(hits)
                    break
            choice = next((m for m in ctx.f1_by_edge[e] if m & present != m), None)
            if choice is not None:
                add("F1", choice, 9, e)
                continue
            picked = None
            for center in ctx.f2_by_edge[e]:
                res = ctx.fstar(center, e, present)
                if res is not None:
                    picked = (res[0], center)
                    break
            if picked is None:
                raise CorruptCoreError(f"no copy through open edge {e}; is the core closed?")
            add("Fstar", picked[0], 11, e, picked[1], e)
            continue
        choice = next((m for m in ctx.c1 if m & present != m and m & present), None)
        if choice is not None:
            add("F1", choice, 14)
            continue
        picked = None
        for center in ctx.c2:
            for e0 in iter_bits(center & present):
                res = ctx.fstar(center, e0, present)
                if res is not None:
                    picked = (res[0], center, e0)
                    break
            if picked:
                break
        if picked is None:
            raise CorruptCoreError("prefix cannot grow; the input is not a single core")
        add("Fstar", picked[0], 16, None, picked[1], picked[2])
    return GrowSequence(core, theta, steps, open_after, F1, F2)


# -- accounting -------------------------------------------------------------


def _outer_vertices(seq: GrowSequence, j: int) -> set[int]:
    """Vertices of step j (1-based) outside its attachment edge."""
    step = seq.steps[j - 1]
    att = set(seq.core.edges[step.attachment]) if step.attachment is not None else set()
    return set(step.vertices) - att


def fully_open(seq: GrowSequence, j: int, i: int, classes: Sequence[str] | None = None) -> bool:
    """Step j is regular and no step j' in (j, i] touches its vertices off the attachment edge."""
    classes = classes or [s.cls for s in seq.steps]
    if classes[j - 1] not in REGULAR:
        return False
    outer = _outer_vertices(seq, j)
    return all(not outer.intersection(seq.steps[t - 1].vertices) for t in range(j + 1, i + 1))


def kappa(seq: GrowSequence, i: int, classes: Sequence[str] | None = None) -> int:
    return sum(1 for j in range(1, i)
               if fully_open(seq, j, i - 1, classes) and not fully_open(seq, j, i, classes))


@dataclass
class SequenceAudit:
    reg: list[int]
    deg: list[int]
    fo: list[int]
    kappa: list[int]
    violations: list[dict] = field(default_factory=list)
    length_checks: int = 0
    length_bound: str = "applicable"

    @property
    def ok(self) -> bool:
        return not self.violations


def audit_sequence(seq: GrowSequence, constants: GrowConstants, check_open_counts: bool = True) -> SequenceAudit:
    n = len(seq.steps)
    classes = [s.cls for s in seq.steps]
    F1, F2 = seq.F1, seq.F2
    audit = SequenceAudit([], [], [], [])
    bad = audit.violations

    # reconstruction
    if seq.prefix_edges(n) != set(range(seq.core.e)):
        bad.append({"kind": "reconstruction", "missing": sorted(set(range(seq.core.e)) - seq.prefix_edges(n))})

    # stored vs recomputed classes
    for i in range(1, n + 1):
        again = recompute_class(seq, i)
        if again != classes[i - 1]:
            bad.append({"kind": "classification", "step": i, "stored": classes[i - 1], "recomputed": again})

    reg = deg = 0
    fo_set: set[int] = set()
    for i in range(1, n + 1):
        step = seq.steps[i - 1]
        k_i = kappa(seq, i, classes)
        audit.kappa.append(k_i)
        regular = classes[i - 1] in REGULAR
        if regular:
            reg += 1
            if k_i > 1:
                bad.append({"kind": "kappa-regular", "step": i, "kappa": k_i})
            if len(step.intersection_edges) != 1 or not step.generic:
                bad.append({"kind": "regular-shape", "step": i,
                            "intersection": len(step.intersection_edges), "generic": step.generic})
        else:
            deg += 1
            if k_i > len(step.vertices):
                bad.append({"kind": "kappa-degenerate", "step": i, "kappa": k_i})
        # incremental fully-open set
        fo_set = {j for j in fo_set if not set(step.vertices) & _outer_vertices(seq, j)}
        if regular:
            fo_set.add(i)
        scratch = {j for j in range(1, i + 1) if fully_open(seq, j, i, classes)}
        if scratch != fo_set:
            bad.append({"kind": "fo-bookkeeping", "step": i, "incremental": sorted(fo_set),
                        "scratch": sorted(scratch)})
        audit.reg.append(reg)
        audit.deg.append(deg)
        audit.fo.append(len(scratch))
        phi = len(scratch) - reg * constants.C1 + deg * constants.C2
        need = 0 if regular else 1
        if phi < need:
            bad.append({"kind": "recurrence", "step": i, "phi": str(phi), "required": need})
        if check_open_counts and F1 is not None and scratch:
            # independent of the tracker: classify the prefix graph afresh
            ids = sorted(seq.prefix_edges(i))
            prefix = hc.edge_subgraph(seq.core, ids)
            open_i = {ids[x] for x in classify_edges(prefix, F1, F2).open}
            if open_i != set(seq.open_after[i - 1]):
                bad.append({"kind": "open-set", "step": i})
            expected = (F2.e - 1) * (F1.e - 1)
            for j in scratch:
                s = seq.steps[j - 1]
                petal_only = set(s.edges) - set(s.center)
                if len(petal_only) != expected or not petal_only <= open_i:
                    bad.append({"kind": "fully-open-edges", "step": i, "of": j,
                                "petal_edges": len(petal_only),
                                "open": len(petal_only & open_i), "expected": expected})
        if not seq.open_after[i - 1]:
            if scratch:
                bad.append({"kind": "closed-prefix-has-fully-open", "step": i})
            if constants.length_bound_applicable:
                audit.length_checks += 1
                if i > deg * (1 + constants.C2 / constants.C1):
                    bad.append({"kind": "length-bound", "step": i, "degenerate": deg})
    if not constants.length_bound_applicable:
        audit.length_bound = "not applicable (C1 = 0)"

    # a destroying regular step is followed by e(F2) - 2 regular steps that destroy nothing
    if F2 is not None:
        d = F2.e - 2
        for i in range(1, n + 1):
            if audit.kappa[i - 1] != 1 or classes[i - 1] not in REGULAR:
                continue
            for t in range(i + 1, min(i + d, n) + 1):
                if classes[t - 1] not in REGULAR:
                    break
                if audit.kappa[t - 1] != 0:
                    bad.append({"kind": "regular-run", "start": i, "step": t, "kappa": audit.kappa[t - 1]})
    return audit


# -- closed test gadgets ----------------------------------------------------


def generic_overlay(F1: Hypergraph, F2: Hypergraph, rng: random.Random, e0: int = 0) -> Hypergraph:
    """A generic F*-member: F2 on the first v(F2) ids, a petal on fresh ids per center edge."""
    edges = [tuple(sorted(e)) for e in F2.edges]
    nxt = F2.vertex_count
    for j, target in enumerate(F2.edges):
        if j == e0:
            continue
        src = F1.edges[rng.randrange(F1.e)]
        tgt = list(target)
        rng.shuffle(tgt)
        assign = dict(zip(src, tgt))
        for x in range(F1.vertex_count):
            if x not in assign:
                assign[x] = nxt
                nxt += 1
        edges.extend(tuple(sorted(assign[x] for x in e)) for e in F1.edges)
    return hc.new_hypergraph(F1.k, nxt, sorted(set(edges)))


def rooted_member(F1: Hypergraph, F2: Hypergraph, rng: random.Random) -> Hypergraph:
    """A generic F*-member plus an F1-copy through its attachment edge on one
    more fresh vertex (so the attachment edge is closed)."""
    member = generic_overlay(F1, F2, rng)
    e0 = member.edges[0]
    j = rng.randrange(F1.e)
    target = list(e0)
    rng.shuffle(target)
    assign = dict(zip(F1.edges[j], target))
    nxt = member.vertex_count
    for x in range(F1.vertex_count):
        if x not in assign:
            assign[x] = nxt
            nxt += 1
    edges = set(member.edges) | {tuple(sorted(assign[x] for x in e)) for e in F1.edges}
    return hc.new_hypergraph(F1.k, nxt, sorted(edges))


def synthesize_closed_gadget(F1: Hypergraph, F2: Hypergraph, seed: int, spare: int | None = None,
                             tries: int = 64, start: Hypergraph | None = None) -> Hypergraph:
    """A hypergraph without open edges, grown from ``start``.

    The default start is a generic F*-member with an F1-copy through its
    attachment edge.  Round by round, every open edge gets an F1-copy and an
    F2-copy through it whose other vertices are disjoint and taken from
    ``spare`` hub vertices, so the two meet exactly in that edge.  Of
    ``tries`` random placements the one adding the fewest new edges wins.
    Edges are only ever added, so closed edges stay closed, and the finite
    hub makes the loop end.  The sparse start survives as the low-numbered
    part, so grow sequences on the result begin with regular steps.
    """
    k = F1.k
    rng = random.Random(seed)
    base = start if start is not None else rooted_member(F1, F2, rng)
    need = (F1.vertex_count - k) + (F2.vertex_count - k) + k
    spare = need if spare is None else spare
    if spare < need:
        raise ValueError(f"need at least {need} hub vertices")
    n = base.vertex_count + spare
    hub = list(range(base.vertex_count, n))
    edges = {tuple(e) for e in base.edges}

    def place(F: Hypergraph, edge: tuple, avoid: set):
        j = rng.randrange(F.e)
        target = list(edge)
        rng.shuffle(target)
        assign = dict(zip(F.edges[j], target))
        rest = [x for x in range(F.vertex_count) if x not in assign]
        free = rng.sample([y for y in hub if y not in avoid and y not in edge], len(rest))
        assign.update(zip(rest, free))
        return {tuple(sorted(assign[x] for x in e)) for e in F.edges}, set(free)

    while True:
        G = hc._trusted(k, n, sorted(edges))
        cls = classify_edges(G, F1, F2)
        if not cls.open:
            return G
        for i in cls.open:
            e = G.edges[i]
            best = None
            for _ in range(tries):
                new1, used = place(F1, e, set())
                new2, _ = place(F2, e, used)
                cost = len((new1 | new2) - edges)
                if best is None or cost < best[0]:
                    best = (cost, new1 | new2)
            edges.update(best[1])


def gadget_cores(G: Hypergraph, F1: Hypergraph, F2: Hypergraph) -> list[Hypergraph]:
    from .ramsey import core_decompose

    dec = core_decompose(G, F1, F2)
    return [dec.core_graph(i) for i in range(len(dec.cores))]
