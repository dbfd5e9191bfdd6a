"""Named hypergraphs, the amalgamation family F*(F1, F2) and its balance check."""

from __future__ import annotations

import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product

import numpy as np
import pynauty

from . import hypercore as hc
from .density import m_k_asym
from .hypercore import Copy, Hypergraph, new_hypergraph

# -- builders ---------------------------------------------------------------


def plus_lift(G: Hypergraph, k: int) -> Hypergraph:
    """Add the same k-2 new vertices (ids appended after V(G)) to every edge."""
    if G.k != 2:
        raise hc.UniformityMismatchError("plus_lift expects a graph")
    if k < 3:
        raise ValueError(f"lift target uniformity must be at least 3, got {k}")
    W = tuple(range(G.vertex_count, G.vertex_count + k - 2))
    return new_hypergraph(k, G.vertex_count + k - 2, [e + W for e in G.edges])


def complete_graph(n: int) -> Hypergraph:
    return hc.complete_hypergraph(n, 2)


def tight_cycle(k: int, t: int) -> Hypergraph:
    if t <= k:
        raise ValueError(f"tight cycle needs t > k, got t={t}, k={k}")
    return new_hypergraph(k, t, [[(i + j) % t for j in range(k)] for i in range(t)])


def tight_path(k: int, length: int) -> Hypergraph:
    """T^k_length; edge id i is the window starting at vertex i (natural order)."""
    if length < k:
        raise ValueError(f"tight path needs at least k vertices, got {length}")
    return new_hypergraph(k, length, [list(range(i, i + k)) for i in range(length - k + 1)])


def star(leaves: int) -> Hypergraph:
    if leaves < 1:
        raise ValueError("a star needs at least one edge")
    return new_hypergraph(2, leaves + 1, [[0, i] for i in range(1, leaves + 1)])


def sunshine(length: int) -> Hypergraph:
    """Graph cycle on 0..length-1 with a pendant edge (i, length+i) at every vertex."""
    if length < 3:
        raise ValueError("a sunshine graph needs a cycle of length at least 3")
    cycle = [[i, (i + 1) % length] for i in range(length)]
    pendants = [[i, length + i] for i in range(length)]
    return new_hypergraph(2, 2 * length, cycle + pendants)


def lifted_triangle(k: int) -> Hypergraph:
    return plus_lift(complete_graph(3), k)


def tight_cycle_length(k: int) -> int:
    """The cycle length t_k paired with K_3^{+k} in the colouring results."""
    if k == 4:
        return 8
    if k == 5:
        return 14
    if k >= 6:
        return k * k
    raise ValueError("t_k is defined for k >= 4")


# -- the family F* ----------------------------------------------------------


@dataclass(frozen=True)
class FStarMember:
    graph: Hypergraph
    center: Copy
    attachment_edges: tuple[int, ...]  # host edge ids the balance check roots at
    petals: dict[int, tuple[int, ...]] = field(compare=False, hash=False)
    generic: bool = False

    @property
    def e0(self) -> int:
        return self.attachment_edges[0]

    def to_dict(self) -> dict:
        return {
            "graph": self.graph.to_dict(),
            "center_vertices": list(self.center.vertex_map),
            "center_edges": list(self.center.edge_ids),
            "attachment_edges": list(self.attachment_edges),
            "petals": {str(e): list(ids) for e, ids in sorted(self.petals.items())},
            "generic": self.generic,
        }


@dataclass
class FamilyReport:
    members: list[FStarMember]
    truncated: bool
    states_explored: int
    reason: str = ""


def generic_vertex_count(F1: Hypergraph, F2: Hypergraph) -> int:
    return F2.vertex_count + (F2.e - 1) * (F1.vertex_count - F1.k)


def is_generic_graph(G: Hypergraph, F1: Hypergraph, F2: Hypergraph) -> bool:
    """Every representation of a member with this many vertices is generic."""
    return G.vertex_count == generic_vertex_count(F1, F2)


def _edge_orbit_reps(F: Hypergraph) -> list[int]:
    autos = hc.automorphisms(F)
    seen, reps = set(), []
    for j, edge in enumerate(F.edges):
        if j in seen:
            continue
        reps.append(j)
        for a in autos:
            seen.add(F.edge_id(a[x] for x in edge))
    return reps


def _petal_placements(F1: Hypergraph, target: tuple[int, ...], existing: Sequence[int],
                      next_fresh: int, allow_existing: bool = True):
    """Distinct ways to place F1 with some edge on ``target``.

    Vertices off that edge go to ``existing`` vertices (outside target) or to
    fresh ids starting at ``next_fresh``.  Yields (edge set, fresh count).
    """
    seen = set()
    outside = [x for x in existing if x not in target]
    for j, pedge in enumerate(F1.edges):
        rest = [x for x in range(F1.vertex_count) if x not in pedge]
        for perm in permutations(target):
            base = dict(zip(pedge, perm))
            choices = (outside + ["fresh"]) if allow_existing else ["fresh"]
            for pick in product(choices, repeat=len(rest)):
                used = [y for y in pick if y != "fresh"]
                if len(set(used)) != len(used):
                    continue
                assign = dict(base)
                fresh = next_fresh
                for x, y in zip(rest, pick):
                    if y == "fresh":
                        assign[x] = fresh
                        fresh += 1
                    else:
                        assign[x] = y
                edges = frozenset(tuple(sorted(assign[x] for x in e)) for e in F1.edges)
                key = _fresh_canonical(edges, next_fresh, fresh - next_fresh)
                if key in seen:
                    continue
                seen.add(key)
                yield edges, fresh - next_fresh


def _canon(edges, start: int, count: int) -> tuple:
    return tuple(sorted(_fresh_canonical(frozenset(edges), start, count)))


def _fresh_canonical(edges: frozenset, start: int, count: int):
    """Edge set up to permutations of the fresh ids start..start+count-1."""
    if count <= 1:
        return edges
    best = None
    for perm in permutations(range(start, start + count)):
        m = {start + i: p for i, p in enumerate(perm)}
        key = tuple(sorted(tuple(sorted(m.get(x, x) for x in e)) for e in edges))
        if best is None or key < best:
            best = key
    return best


def _assemble(F1: Hypergraph, F2: Hypergraph, vertex_count: int, edges: Iterable,
              e0_edge: tuple, petal_edges: dict, attachments=None) -> FStarMember:
    G = hc._trusted(F2.k, vertex_count, edges)
    center_ids = tuple(sorted(G.edge_id(e) for e in F2.edges))
    center = Copy(tuple(range(F2.vertex_count)), tuple(G.edges[i] for i in center_ids), center_ids)
    petals = {G.edge_id(e): tuple(sorted(G.edge_id(x) for x in pe)) for e, pe in petal_edges.items()}
    e0 = G.edge_id(e0_edge)
    return FStarMember(G, center, tuple(attachments) if attachments else (e0,), petals,
                       is_generic_graph(G, F1, F2))


def generic_members(F1: Hypergraph, F2: Hypergraph, dedup: bool = True) -> list[FStarMember]:
    """Every generic member, rooted at its attachment edge.

    Members are listed once per (graph, attachment edge) class.  Any
    representation of a generic graph is itself generic, so this list meets
    every attachment edge of every generic member graph.
    """
    _check_pair(F1, F2)
    autos2 = hc.automorphisms(F2)
    out: list[FStarMember] = []
    seen_codes: set[bytes] = set()
    width = F1.vertex_count - F1.k
    for r in _edge_orbit_reps(F2):
        e0 = F2.edges[r]
        others = [e for e in F2.edges if e != e0]
        options = []
        for e in others:
            opts = [edges for edges, _ in _petal_placements(F1, e, [], F2.vertex_count, False)]
            options.append(sorted({_canon(o, F2.vertex_count, width) for o in opts}))
        stab = [a for a in autos2 if tuple(sorted(a[x] for x in e0)) == e0]
        index = {e: i for i, e in enumerate(others)}
        # how each stabiliser element permutes (edge slot, option index)
        moves = []
        for a in stab:
            slot_map, opt_map = [], []
            for i, e in enumerate(others):
                img = tuple(sorted(a[x] for x in e))
                j = index[img]
                slot_map.append(j)
                lookup = {o: n for n, o in enumerate(options[j])}
                row = []
                for o in options[i]:
                    moved = frozenset(tuple(sorted(a[x] if x < F2.vertex_count else x for x in ed)) for ed in o)
                    row.append(lookup[_canon(moved, F2.vertex_count, width)])
                opt_map.append(row)
            moves.append((slot_map, opt_map))
        for choice in product(*[range(len(o)) for o in options]):
            if not _is_orbit_min(choice, moves):
                continue
            edges = list(F2.edges)
            petal_edges = {}
            nxt = F2.vertex_count
            for i, (e, c) in enumerate(zip(others, choice)):
                shift = nxt - F2.vertex_count
                pe = [tuple(x + shift if x >= F2.vertex_count else x for x in ed) for ed in options[i][c]]
                petal_edges[e] = pe
                edges.extend(pe)
                nxt += width
            if dedup:
                code = rooted_code(hc._trusted(F2.k, nxt, edges), e0)
                if code in seen_codes:
                    continue
                seen_codes.add(code)
            out.append(_assemble(F1, F2, nxt, edges, e0, petal_edges))
    return out


def _is_orbit_min(choice: tuple, moves) -> bool:
    for slot_map, opt_map in moves:
        img = [0] * len(choice)
        for i, c in enumerate(choice):
            img[slot_map[i]] = opt_map[i][c]
        if tuple(img) < choice:
            return False
    return True


def rooted_code(G: Hypergraph, root: tuple[int, ...]) -> bytes:
    """Canonical code of G with one distinguished edge."""
    n, m = G.vertex_count, G.e
    rid = G.edge_id(root)
    adjacency = {n + j: list(edge) for j, edge in enumerate(G.edges)}
    cells = [set(range(n)), set(range(n, n + m)) - {n + rid}, {n + rid}]
    g = pynauty.Graph(n + m, directed=False, adjacency_dict=adjacency,
                      vertex_coloring=[c for c in cells if c])
    return hc.canonical_form(G) + pynauty.certificate(g)


def _check_pair(F1: Hypergraph, F2: Hypergraph) -> None:
    if F1.k != F2.k:
        raise hc.UniformityMismatchError("F1 and F2 must share uniformity")
    if F2.e < 2:
        raise ValueError("F2 needs at least two edges")


def generate_family_fstar(F1: Hypergraph, F2: Hypergraph, max_vertices: int = 24,
                          max_states: int = 10**6, compute_attachments: bool = True) -> FamilyReport:
    """Members of F*(F1, F2) up to isomorphism, by depth-first gluing.

    Petals may reuse any existing vertex.  The search stops after
    ``max_states`` partial amalgams and flags the result as truncated.
    """
    _check_pair(F1, F2)
    found: dict[bytes, FStarMember] = {}
    states = 0
    truncated = False
    reason = ""
    for r in _edge_orbit_reps(F2):
        e0 = F2.edges[r]
        others = [e for e in F2.edges if e != e0]
        visited: set = set()

        def rec(i: int, vcount: int, edges: frozenset, petal_edges: dict):
            nonlocal states, truncated, reason
            if truncated:
                return
            key = (i, vcount, edges)
            if key in visited:
                return
            visited.add(key)
            states += 1
            if states > max_states:
                truncated, reason = True, f"state cap {max_states} reached"
                return
            if i == len(others):
                G = hc._trusted(F2.k, vcount, edges)
                code = hc.canonical_form(G)
                if code not in found:
                    found[code] = _assemble(F1, F2, vcount, edges, e0, petal_edges)
                return
            target = others[i]
            for pedges, fresh in _petal_placements(F1, target, range(vcount), vcount):
                if vcount + fresh > max_vertices:
                    if not truncated:
                        reason = reason or f"vertex cap {max_vertices} pruned some gluings"
                    continue
                petal_edges[target] = sorted(pedges)
                rec(i + 1, vcount + fresh, edges | pedges, petal_edges)
                del petal_edges[target]

        rec(0, F2.vertex_count, frozenset(F2.edges), {})
        if truncated:
            break
    members = list(found.values())
    if compute_attachments:
        members = [_with_attachments(mem, F1, F2) for mem in members]
    if reason and not truncated:
        truncated = True
    return FamilyReport(members, truncated, states, reason)


def random_members(F1: Hypergraph, F2: Hypergraph, count: int, seed: int,
                   fresh_bias: float = 0.5) -> list[FStarMember]:
    """Seeded random gluings; each petal vertex off its edge is fresh with
    probability ``fresh_bias`` and otherwise a uniformly random existing vertex."""
    _check_pair(F1, F2)
    rng = random.Random(seed)
    out = []
    reps = _edge_orbit_reps(F2)
    for _ in range(count):
        e0 = F2.edges[rng.choice(reps)]
        vcount, edges, petal_edges = F2.vertex_count, set(F2.edges), {}
        for target in F2.edges:
            if target == e0:
                continue
            pedge = F1.edges[rng.randrange(F1.e)]
            perm = list(target)
            rng.shuffle(perm)
            assign = dict(zip(pedge, perm))
            taken = set(perm)
            for x in range(F1.vertex_count):
                if x in assign:
                    continue
                pool = [y for y in range(vcount) if y not in taken]
                if pool and rng.random() >= fresh_bias:
                    y = rng.choice(pool)
                else:
                    y = vcount
                    vcount += 1
                assign[x] = y
                taken.add(y)
            pe = [tuple(sorted(assign[x] for x in e)) for e in F1.edges]
            petal_edges[target] = pe
            edges.update(pe)
        out.append(_with_attachments(_assemble(F1, F2, vcount, edges, e0, petal_edges), F1, F2))
    return out


def attachment_edges(G: Hypergraph, F1: Hypergraph, F2: Hypergraph) -> tuple[int, ...]:
    """Edge ids e0 for which G has a representation as a member rooted at e0."""
    all_edges = (1 << G.e) - 1
    f1_masks = [sum(1 << i for i in ids) for ids in hc.copy_edge_sets(F1, G)]
    covered_vertices = {x for e in G.edges for x in e}
    if len(covered_vertices) != G.vertex_count:
        return ()
    result = set()
    for center in hc.copy_edge_sets(F2, G):
        cmask = sum(1 << i for i in center)
        for e0 in center:
            if e0 in result:
                continue
            slots = [[fm for fm in f1_masks if fm >> i & 1] for i in center if i != e0]
            if any(not s for s in slots):
                continue
            if _cover(slots, cmask, all_edges):
                result.add(e0)
    return tuple(sorted(result))


def _cover(slots: list[list[int]], acc: int, goal: int) -> bool:
    """Pick one mask per slot so that acc | picks == goal."""
    suffix = [0] * (len(slots) + 1)
    for i in range(len(slots) - 1, -1, -1):
        u = 0
        for fm in slots[i]:
            u |= fm
        suffix[i] = suffix[i + 1] | u

    def rec(i: int, cur: int) -> bool:
        if (cur | suffix[i]) != goal:
            return False
        if i == len(slots):
            return True
        return any(rec(i + 1, cur | fm) for fm in slots[i])

    return rec(0, acc)


def _with_attachments(member: FStarMember, F1: Hypergraph, F2: Hypergraph) -> FStarMember:
    att = attachment_edges(member.graph, F1, F2)
    if member.e0 not in att:
        raise AssertionError("constructed member lacks its own attachment edge")
    return FStarMember(member.graph, member.center, att, member.petals, member.generic)


# -- asymmetric balance -----------------------------------------------------


@dataclass
class BalanceVerdict:
    balanced: bool
    threshold: Fraction
    violation: tuple | None = None  # (member index, vertex subset, ratio)
    equality_cases: list[tuple[int, int, tuple[int, ...]]] = field(default_factory=list)
    members_checked: int = 0
    subsets_checked: int = 0
    # min of (e(F*) - e(H)) / theta - (v(F*) - v(H)) over the strict cases
    min_slack: Fraction | None = None

    def summary(self) -> dict:
        return {
            "balanced": self.balanced,
            "threshold": f"{self.threshold.numerator}/{self.threshold.denominator}",
            "violation": None if self.violation is None else {
                "member": self.violation[0], "vertices": list(self.violation[1]),
                "ratio": str(self.violation[2])},
            "equality_cases": len(self.equality_cases),
            "members_checked": self.members_checked,
            "subsets_checked": self.subsets_checked,
            "min_slack": None if self.min_slack is None else str(self.min_slack),
        }


def _rooted_rows(member: FStarMember, root: int):
    """Vertices off the root edge get bits 0..r-1; edges become masks over them."""
    G = member.graph
    root_vs = set(G.edges[root])
    rest = [x for x in range(G.vertex_count) if x not in root_vs]
    bit = {x: i for i, x in enumerate(rest)}
    masks = [sum(1 << bit[x] for x in e if x in bit) for e in G.edges]
    return rest, masks


def balance_ratio(member: FStarMember, U: Iterable[int]) -> Fraction:
    """(e(F*) - e(H)) / (v(F*) - v(H)) for H induced on U."""
    U = set(U)
    G = member.graph
    eh = sum(1 for e in G.edges if U.issuperset(e))
    return Fraction(G.e - eh, G.vertex_count - len(U))


def check_asymmetric_balanced(F1: Hypergraph, F2: Hypergraph, members: Sequence[FStarMember],
                              theta: Fraction | None = None, batch: int = 2048) -> BalanceVerdict:
    """Check both balance conditions over vertex subsets U containing an
    attachment edge, U a proper subset of V(F*), H induced on U."""
    if theta is None:
        theta = m_k_asym(F1, F2).value
    p, q = theta.numerator, theta.denominator
    verdict = BalanceVerdict(True, theta)
    groups: dict[int, list] = {}
    for idx, mem in enumerate(members):
        for root in mem.attachment_edges:
            rest, masks = _rooted_rows(mem, root)
            groups.setdefault(len(rest), []).append((idx, root, rest, masks))
        verdict.members_checked += 1
    for r, rows in sorted(groups.items()):
        size = 1 << r
        popc = np.bitwise_count(np.arange(size, dtype=np.uint32)).astype(np.int64)
        for start in range(0, len(rows), batch):
            chunk = rows[start:start + batch]
            B = len(chunk)
            width = max(len(m) for _, _, _, m in chunk)
            mask_arr = np.zeros((B, width), dtype=np.int64)
            valid = np.zeros((B, width), dtype=bool)
            for b, (_, _, _, masks) in enumerate(chunk):
                mask_arr[b, :len(masks)] = masks
                valid[b, :len(masks)] = True
            counts = np.zeros(B * size, dtype=np.int64)
            flat = (np.arange(B)[:, None] * size + mask_arr)[valid]
            np.add.at(counts, flat, 1)
            counts = counts.reshape(B, size)
            for bit in range(r):  # subset-sum transform: counts[S] = #edges inside root + S
                view = counts.reshape(B, size >> (bit + 1), 2, 1 << bit)
                view[:, :, 1, :] += view[:, :, 0, :]
            e_tot = np.array([len(m) for _, _, _, m in chunk], dtype=np.int64)[:, None]
            v_tot = np.array([len(rest) + F1.k for _, _, rest, _ in chunk], dtype=np.int64)[:, None]
            lhs = (e_tot - counts)[:, :-1] * q       # drop S = everything (U = V)
            rhs = (v_tot - (popc[None, :-1] + F1.k)) * p
            verdict.subsets_checked += B * (size - 1)
            gap = lhs - rhs
            strict = gap[gap > 0]
            if strict.size:
                slack = Fraction(int(strict.min()), p)
                if verdict.min_slack is None or slack < verdict.min_slack:
                    verdict.min_slack = slack
            bad = np.argwhere(lhs < rhs)
            if len(bad):
                b, s = map(int, bad[0])
                idx, root, rest, _ = chunk[b]
                U = _subset(members[idx], root, rest, s)
                verdict.balanced = False
                if verdict.violation is None:
                    verdict.violation = (idx, U, balance_ratio(members[idx], U))
            for b, s in np.argwhere(lhs == rhs).tolist():
                idx, root, rest, _ = chunk[b]
                U = _subset(members[idx], root, rest, s)
                verdict.equality_cases.append((idx, root, U))
                if s != 0 or not members[idx].generic:
                    verdict.balanced = False
                    if verdict.violation is None:
                        verdict.violation = (idx, U, balance_ratio(members[idx], U))
    return verdict


def _subset(member: FStarMember, root: int, rest: list[int], s: int) -> tuple[int, ...]:
    chosen = [x for i, x in enumerate(rest) if s >> i & 1]
    return tuple(sorted(set(member.graph.edges[root]) | set(chosen)))


def brute_force_family(F1: Hypergraph, F2: Hypergraph, n: int) -> set[bytes]:
    """Canonical codes of all members on at most n vertices, by testing every
    edge subset of the complete k-graph on n vertices against the definition."""
    K = hc.complete_hypergraph(n, F1.k)
    codes = set()
    for bits in range(1, 1 << K.e):
        edges = [K.edges[i] for i in range(K.e) if bits >> i & 1]
        used = sorted({x for e in edges for x in e})
        if len(used) != n:
            continue  # smaller vertex counts are covered by smaller n
        G = hc._trusted(F1.k, n, edges)
        if attachment_edges(G, F1, F2):
            codes.add(hc.canonical_form(G))
    return codes
