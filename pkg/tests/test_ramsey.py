import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from test_hypercore import hypergraphs

from hyperamsey import constructions as cons
from hyperamsey import growseq, ramsey
from hyperamsey import hypercore as hc
from hyperamsey.randmodel import SampleSpec, sample


@pytest.fixture(scope="module")
def generic(F1, F2):
    return cons.random_members(F1, F2, 1, seed=0, fresh_bias=1.0)[0]


def test_disjoint_copies_are_open(F1, F2):
    H = hc.disjoint_union(F1, F2)
    cls = ramsey.classify_edges(H, F1, F2)
    assert cls.closed == () and len(cls.open) == H.e


def test_empty_host(F1, F2):
    H = hc.new_hypergraph(4, 6, [])
    cls = ramsey.classify_edges(H, F1, F2)
    assert cls.open == cls.closed == ()
    assert ramsey.strip_open(H, F1, F2).remaining == ()
    assert ramsey.core_decompose(H, F1, F2).cores == []


def test_generic_member_classification(generic, F1, F2):
    cls = ramsey.classify_edges(generic.graph, F1, F2)
    center = set(generic.center.edge_ids)
    assert set(cls.closed) == center - {generic.e0}
    assert len(cls.closed) == 7 and len(cls.open) == 15
    assert cls.verify()
    assert ramsey.strip_open(generic.graph, F1, F2).remaining == ()


def test_no_F1_copy_strips_everything(F1, F2):
    H = cons.tight_cycle(4, 9)
    assert ramsey.strip_open(H, F1, F2).remaining == ()


def test_strip_order_invariance(F1, F2):
    H = sample(SampleSpec(4, 12, 0.4, 0, 0))
    c1, c2 = ramsey.copy_masks(F1, H), ramsey.copy_masks(F2, H)
    base = ramsey.strip_open(H, F1, F2, c1, c2).remaining
    assert base
    for s in range(20):
        assert ramsey.strip_open(H, F1, F2, c1, c2, order_seed=s).remaining == base


def test_certificates_and_no_open_edges_after_strip(F1, F2):
    H = sample(SampleSpec(4, 11, 0.5, 3, 0))
    dec = ramsey.strip_open(H, F1, F2)
    G = hc.edge_subgraph(H, dec.remaining)
    cls = ramsey.classify_edges(G, F1, F2)
    assert cls.open == () and cls.verify()


def test_core_decompose_rejects_open_edges(F1, F2):
    with pytest.raises(ramsey.OpenEdgeError):
        ramsey.core_decompose(F1, F1, F2)


def test_two_disjoint_gadgets_give_two_cores(F1, F2):
    g = growseq.synthesize_closed_gadget(F1, F2, 0)
    cores = growseq.gadget_cores(g, F1, F2)
    assert len(cores) >= 1
    core = cores[0]
    twice = hc.disjoint_union(core, core)
    dec = ramsey.core_decompose(twice, F1, F2)
    assert len(dec.cores) == 2
    assert all(hc.is_isomorphic(dec.core_graph(i), core) for i in range(2))
    one = ramsey.core_decompose(core, F1, F2)
    assert one.cores == [tuple(range(core.e))]


def test_arrow_examples():
    K3 = cons.complete_graph(3)
    assert ramsey.arrow(cons.complete_graph(6), [K3, K3]).arrows is True
    v = ramsey.arrow(cons.complete_graph(5), [K3, K3])
    assert v.arrows is False
    assert ramsey.validate_colouring(cons.complete_graph(5), v.witness, [K3, K3])
    assert ramsey.count_monochromatic(5, v.witness, [K3, K3]) == [0, 0]
    assert ramsey.arrow(cons.star(3), [cons.star(2), cons.star(2)]).arrows is True
    P3 = cons.tight_path(2, 4)
    assert ramsey.arrow(cons.sunshine(5), [P3, P3]).arrows is True


def test_arrow_k5_matches_exhaustive():
    K3, K5 = cons.complete_graph(3), cons.complete_graph(5)
    good = [c for c in product((0, 1), repeat=K5.e) if ramsey.validate_colouring(K5, c, [K3, K3])]
    assert len(good) == 12  # pentagon/pentagram splits, both colour orders


def test_arrow_budget_gives_unknown():
    K3 = cons.complete_graph(3)
    v = ramsey.arrow(cons.complete_graph(6), [K3, K3], budget=1)
    assert v.arrows in (None, True)
    if v.arrows is None:
        assert v.unknown and v.witness is None


def test_validate_and_count():
    K3, K6 = cons.complete_graph(3), cons.complete_graph(6)
    assert not ramsey.validate_colouring(K6, [0] * K6.e, [K3, K3])
    assert ramsey.validate_colouring(hc.new_hypergraph(2, 4, []), [], [K3, K3])
    assert ramsey.count_monochromatic(6, [0] * 15, [K3, K3]) == [20, 0]


def test_colour_degenerate_is_all_red(F1, F2):
    H = cons.tight_cycle(4, 9)
    c = ramsey.colour(H, F1, F2)
    assert isinstance(c, ramsey.Colouring) and set(c.assignment) == {ramsey.RED}


def test_colour_generic_member(generic, F1, F2):
    c = ramsey.colour(generic.graph, F1, F2)
    assert ramsey.validate_colouring(generic.graph, c, [F1, F2])


def test_colour_never_returns_invalid_on_dense_lift(F1, F2):
    H = cons.plus_lift(cons.complete_graph(7), 4)
    res = ramsey.colour(H, F1, F2, budget=5000)
    if isinstance(res, ramsey.Colouring):
        assert ramsey.validate_colouring(H, res, [F1, F2])
    else:
        assert res.stage in ("core arrows", "budget exhausted")


def test_colour_on_samples(F1, F2):
    for t in range(5):
        H = sample(SampleSpec(4, 12, 0.4, 1, t))
        res = ramsey.colour(H, F1, F2)
        if isinstance(res, ramsey.Colouring):
            assert ramsey.validate_colouring(H, res, [F1, F2])


def test_sparse_colouring_examples(F1, F2):
    edge = hc.new_hypergraph(4, 4, [[0, 1, 2, 3]])
    for H in (edge, cons.tight_cycle(4, 8), cons.tight_path(4, 12)):
        res = ramsey.sparse_colouring(H)
        assert isinstance(res, ramsey.Colouring)
        assert ramsey.validate_colouring(H, res, [F1, F2])
    assert ramsey.validate_colouring(cons.tight_cycle(4, 8), [ramsey.RED] * 8, [F1, F2])


def test_sparse_colouring_rejects_graphs():
    with pytest.raises(hc.UniformityMismatchError):
        ramsey.sparse_colouring(cons.complete_graph(4))


def test_solver_and_local_search_agree_on_satisfiable():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(4, 9)
        clauses = [(rng.randrange(2), rng.sample(range(n), 3)) for _ in range(rng.randint(1, 12))]
        exact, _, exhausted = ramsey.solve_colouring(n, clauses, 2, None)
        assert not exhausted
        quick = ramsey.local_search(n, clauses, 2, 2000, seed=1)
        for sol in (exact, quick):
            if sol is not None:
                assert all(any(sol[x] != col for x in c) for col, c in clauses)
        if exact is None:
            assert quick is None


@settings(max_examples=40, deadline=None)
@given(hypergraphs(k=2, max_v=6), st.data())
def test_arrow_antitone(G, data):
    K3 = cons.complete_graph(3)
    if G.e == 0:
        return
    e = data.draw(st.integers(0, G.e - 1))
    smaller = hc.Hypergraph(2, G.v, tuple(x for i, x in enumerate(G.edges) if i != e))
    if ramsey.arrow(smaller, [K3, K3]).arrows:
        assert ramsey.arrow(G, [K3, K3]).arrows


@settings(max_examples=40, deadline=None)
@given(hypergraphs(k=2, max_v=7))
def test_arrow_agrees_with_exhaustive(G):
    K3 = cons.complete_graph(3)
    if G.e > 14:
        return
    brute = not any(ramsey.validate_colouring(G, c, [K3, K3]) for c in product((0, 1), repeat=G.e))
    assert ramsey.arrow(G, [K3, K3]).arrows is brute
