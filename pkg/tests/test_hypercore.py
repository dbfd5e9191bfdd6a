import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperamsey import constructions as cons
from hyperamsey import hypercore as hc


@st.composite
def hypergraphs(draw, k=None, max_v=7):
    k = draw(st.integers(2, 3)) if k is None else k
    n = draw(st.integers(k, max_v))
    from itertools import combinations
    pool = list(combinations(range(n), k))
    edges = draw(st.lists(st.sampled_from(pool), unique=True, max_size=min(len(pool), 12)))
    return hc.new_hypergraph(k, n, edges)


def permuted(H, seed):
    perm = list(range(H.v))
    random.Random(seed).shuffle(perm)
    return hc.relabel(H, perm)


def test_triangle_and_single_edge():
    K3 = hc.new_hypergraph(2, 3, [[0, 1], [1, 2], [0, 2]])
    assert K3.edges == ((0, 1), (0, 2), (1, 2))
    single = hc.new_hypergraph(4, 5, [[0, 1, 2, 3]])
    assert single.e == 1 and single.v == 5 and single.isolated_vertices() == [4]


@pytest.mark.parametrize("k,n,edges,err", [
    (3, 3, [[0, 1, 1]], hc.RepeatedVertexError),
    (3, 4, [[0, 1]], hc.NonUniformEdgeError),
    (2, 3, [[0, 5]], hc.VertexOutOfRangeError),
    (2, 3, [[0, 1], [1, 0]], hc.DuplicateEdgeError),
])
def test_construction_errors_are_distinct(k, n, edges, err):
    with pytest.raises(err):
        hc.new_hypergraph(k, n, edges)


def test_canonical_form_examples():
    K3 = cons.complete_graph(3)
    relab = hc.relabel(K3, [2, 0, 1])
    assert hc.canonical_form(K3) == hc.canonical_form(relab)
    path = hc.new_hypergraph(2, 3, [[0, 1], [1, 2]])
    assert hc.canonical_form(path) != hc.canonical_form(K3)
    T = cons.tight_path(4, 8)
    assert hc.canonical_form(T) == hc.canonical_form(permuted(T, 3))


def test_isomorphism_examples():
    K3 = cons.complete_graph(3)
    assert hc.is_isomorphic(K3, hc.relabel(K3, [1, 2, 0]))
    assert not hc.is_isomorphic(cons.tight_path(4, 8), cons.tight_cycle(4, 8))
    assert hc.is_isomorphic(hc.new_hypergraph(3, 3, []), hc.new_hypergraph(3, 3, []))
    # isolated vertices count
    assert not hc.is_isomorphic(hc.new_hypergraph(2, 3, [[0, 1]]), hc.new_hypergraph(2, 4, [[0, 1]]))


def test_copy_counts():
    H = cons.tight_cycle(4, 8)
    edge = hc.new_hypergraph(4, 4, [[0, 1, 2, 3]])
    assert len(hc.enumerate_copies(edge, H)) == 8
    assert len(hc.enumerate_copies(cons.complete_graph(3), cons.complete_graph(4))) == 4
    assert len(hc.enumerate_copies(cons.tight_path(4, 8), H)) == 8


def test_copy_counts_in_complete_hosts():
    # 12!/(7! * |Aut K3+4| = 12) and 9!/(|Aut C8| = 16) copies
    assert len(hc.copy_edge_sets(cons.lifted_triangle(4), hc.complete_hypergraph(12, 4))) == 7920
    assert len(hc.copy_edge_sets(cons.tight_cycle(4, 8), hc.complete_hypergraph(9, 4))) == 22680


def test_copy_is_valid_embedding():
    F, H = cons.lifted_triangle(4), hc.complete_hypergraph(6, 4)
    for c in hc.enumerate_copies(F, H):
        assert len(set(c.vertex_map)) == F.v
        images = {tuple(sorted(c.vertex_map[x] for x in e)) for e in F.edges}
        assert images == set(c.edge_images)
        assert [H.edges[i] for i in c.edge_ids] == list(c.edge_images)


def test_uniformity_mismatch():
    with pytest.raises(hc.UniformityMismatchError):
        hc.enumerate_copies(cons.complete_graph(3), cons.tight_cycle(4, 8))


def test_induced_and_edge_subgraphs():
    K4 = cons.complete_graph(4)
    assert hc.is_isomorphic(hc.induced_subgraph(K4, {0, 2, 3}), cons.complete_graph(3))
    C8 = cons.tight_cycle(4, 8)
    sub = hc.induced_subgraph(C8, range(7))
    assert sub.e == 4 and hc.is_isomorphic(sub, cons.tight_path(4, 7))
    assert hc.induced_subgraph(C8, []).e == 0
    ids = [C8.edge_id([0, 1, 2, 3]), C8.edge_id([1, 2, 3, 4])]
    assert hc.is_isomorphic(hc.edge_subgraph(C8, ids), cons.tight_path(4, 5))
    one = hc.edge_subgraph(cons.complete_graph(3), [0])
    assert one.v == 2 and one.e == 1
    H = hc.new_hypergraph(2, 5, [[0, 1], [1, 2]])
    assert hc.edge_subgraph(H, range(H.e)).v == 3


def test_links():
    single = hc.new_hypergraph(4, 4, [[0, 1, 2, 3]])
    assert hc.link(single, 0).e == 1
    F = cons.lifted_triangle(4)
    lifted = [x for x in range(F.v) if F.degree(x) == 3]
    L = hc.link(F, lifted[0])
    assert L.k == 3 and L.e == 3 and len({x for e in L.edges for x in e}) == 4
    assert hc.link(cons.tight_cycle(4, 8), 0).e == 4


def test_json_round_trip_is_exact():
    H = cons.tight_cycle(4, 8)
    text = H.to_json()
    assert hc.Hypergraph.from_json(text) == H
    assert hc.Hypergraph.from_json(text).to_json() == text


@settings(max_examples=60, deadline=None)
@given(hypergraphs(), st.integers(0, 10**6))
def test_canonical_form_invariant_under_relabelling(H, seed):
    G = permuted(H, seed)
    assert hc.canonical_form(G) == hc.canonical_form(H)
    assert hc.is_isomorphic(G, H)


@settings(max_examples=40, deadline=None)
@given(hypergraphs(k=2, max_v=6), st.integers(0, 10**6))
def test_copy_count_invariant_under_relabelling(H, seed):
    F = hc.new_hypergraph(2, 3, [[0, 1], [1, 2]])
    assert len(hc.enumerate_copies(F, H)) == len(hc.enumerate_copies(F, permuted(H, seed)))
    assert len(hc.enumerate_copies(permuted(F, seed), H)) == len(hc.enumerate_copies(F, H))


@settings(max_examples=60, deadline=None)
@given(hypergraphs())
def test_link_size_is_degree(H):
    for x in range(H.v):
        assert hc.link(H, x).e == H.degree(x)


@settings(max_examples=40, deadline=None)
@given(hypergraphs(k=2, max_v=6))
def test_copies_agree_with_brute_force(H):
    from itertools import permutations
    F = cons.complete_graph(3)
    brute = set()
    for trio in permutations(range(H.v), 3):
        imgs = frozenset(tuple(sorted((trio[a], trio[b]))) for a, b in F.edges)
        if all(H.has_edge(e) for e in imgs):
            brute.add(imgs)
    got = {frozenset(c.edge_images) for c in hc.enumerate_copies(F, H)}
    assert got == brute


@settings(max_examples=80, deadline=None)
@given(hypergraphs(k=2, max_v=5), hypergraphs(k=2, max_v=5))
def test_canonical_form_agrees_with_bijection_search(A, B):
    from itertools import permutations
    brute = A.v == B.v and A.e == B.e and any(
        {tuple(sorted((p[x], p[y]))) for x, y in A.edges} == set(B.edges)
        for p in permutations(range(A.v)))
    assert hc.is_isomorphic(A, B) is brute
    assert (hc.canonical_form(A) == hc.canonical_form(B)) is brute


def test_automorphism_count():
    assert len(hc.automorphisms(cons.tight_cycle(4, 8))) == 16
    assert len(hc.automorphisms(cons.lifted_triangle(4))) == 12
