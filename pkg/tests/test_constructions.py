from fractions import Fraction

import pytest

from hyperamsey import constructions as cons
from hyperamsey import density, ramsey
from hyperamsey import hypercore as hc


def shape(H):
    return H.k, H.v, H.e


def test_builders():
    assert shape(cons.lifted_triangle(4)) == (4, 5, 3)
    assert shape(cons.plus_lift(hc.new_hypergraph(2, 2, [[0, 1]]), 4)) == (4, 4, 1)
    assert shape(cons.plus_lift(cons.complete_graph(6), 4)) == (4, 8, 15)
    assert shape(cons.tight_cycle(4, 8)) == (4, 8, 8)
    assert hc.is_isomorphic(cons.tight_cycle(2, 3), cons.complete_graph(3))
    assert shape(cons.tight_cycle(5, 14)) == (5, 14, 14)
    assert cons.tight_path(3, 6).e == 4
    assert cons.tight_path(4, 8).e == 5
    assert shape(cons.tight_path(2, 4)) == (2, 4, 3)
    assert shape(cons.star(3)) == (2, 4, 3)
    assert shape(cons.sunshine(5)) == (2, 10, 10)
    assert shape(cons.star(1)) == (2, 2, 1)


def test_cycle_lengths():
    assert cons.tight_cycle_length(4) == 8
    assert cons.tight_cycle_length(5) == 14


def test_lifted_triangle_structure():
    F = cons.lifted_triangle(4)
    shared = set.intersection(*(set(e) for e in F.edges))
    assert len(shared) == 2


def test_single_edge_F1_with_triangle():
    F1 = hc.new_hypergraph(2, 2, [[0, 1]])
    fam = cons.generate_family_fstar(F1, cons.complete_graph(3))
    assert len(fam.members) == 1 and not fam.truncated
    assert hc.is_isomorphic(fam.members[0].graph, cons.complete_graph(3))


def test_generic_member_shape():
    F1, F2 = cons.lifted_triangle(4), cons.tight_cycle(4, 8)
    g = cons.random_members(F1, F2, 5, seed=0, fresh_bias=1.0)
    assert all(m.generic and shape(m.graph) == (4, 15, 22) for m in g)
    assert cons.generic_vertex_count(F1, F2) == 15


def test_family_matches_brute_force_for_triangles():
    K3 = cons.complete_graph(3)
    fam = cons.generate_family_fstar(K3, K3, max_vertices=5)
    got = {hc.canonical_form(m.graph) for m in fam.members}
    assert len(got) == len(fam.members)  # no two members isomorphic
    brute = set()
    for n in range(3, 6):
        brute |= cons.brute_force_family(K3, K3, n)
    assert got == brute


def test_members_contain_their_pieces():
    F1, F2 = cons.lifted_triangle(4), cons.tight_cycle(4, 8)
    for m in cons.random_members(F1, F2, 15, seed=1):
        G = m.graph
        assert hc.has_copy(F2, G)
        assert set(m.center.edge_ids) - set(m.petals) == {m.e0}
        assert m.e0 in m.attachment_edges
        for e, ids in m.petals.items():
            assert e in ids
            assert hc.is_isomorphic(hc.edge_subgraph(G, ids), F1)
        covered = set(m.center.edge_ids).union(*m.petals.values())
        assert covered == set(range(G.e))


def test_balance_on_generic_members():
    F1, F2 = cons.lifted_triangle(4), cons.tight_cycle(4, 8)
    members = cons.random_members(F1, F2, 3, seed=0, fresh_bias=1.0)
    v = cons.check_asymmetric_balanced(F1, F2, members)
    assert v.balanced
    assert v.equality_cases
    theta = Fraction(21, 11)
    for idx, root, U in v.equality_cases:
        mem = members[idx]
        assert len(U) == F1.k and set(U) == set(mem.graph.edges[root])
        assert cons.balance_ratio(mem, U) == theta


def test_non_generic_member_attachment_ratio_exceeds_theta():
    F1, F2 = cons.lifted_triangle(4), cons.tight_cycle(4, 8)
    theta = density.m_k_asym(F1, F2).value
    found = False
    for m in cons.random_members(F1, F2, 40, seed=3):
        if m.generic:
            continue
        found = True
        ratio = cons.balance_ratio(m, m.graph.edges[m.e0])
        assert ratio > theta
    assert found


def test_generic_petal_edges_are_open():
    F1, F2 = cons.lifted_triangle(4), cons.tight_cycle(4, 8)
    m = cons.random_members(F1, F2, 1, seed=0, fresh_bias=1.0)[0]
    assert m.generic
    cls = ramsey.classify_edges(m.graph, F1, F2)
    petal_only = set().union(*m.petals.values()) - set(m.center.edge_ids)
    assert petal_only <= set(cls.open)


def test_truncation_is_reported():
    F1, F2 = cons.lifted_triangle(4), cons.tight_cycle(4, 8)
    fam = cons.generate_family_fstar(F1, F2, max_vertices=18, max_states=50)
    assert fam.truncated and fam.reason


def test_mismatched_uniformity_rejected():
    with pytest.raises(hc.UniformityMismatchError):
        cons.generate_family_fstar(cons.complete_graph(3), cons.tight_cycle(4, 8))
