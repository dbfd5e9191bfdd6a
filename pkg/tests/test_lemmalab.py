from itertools import combinations
from math import ceil

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperamsey import constructions as cons
from hyperamsey import hypercore as hc
from hyperamsey import lemmalab as lab
from hyperamsey.ramsey import contains_pattern


def path_ids(H, k):
    # edge ids of a tight path in walk order
    return [H.edge_id(range(i, i + k)) for i in range(H.v - k + 1)]


def test_intersecting_set_examples():
    T = cons.tight_path(4, 9)
    e = path_ids(T, 4)
    assert lab.is_intersecting_set(T, [], 2)
    assert lab.is_intersecting_set(T, [e[0]], 2)
    assert lab.is_intersecting_set(T, [e[0], e[2], e[4]], 2)
    assert not lab.is_intersecting_set(T, [e[0], e[1]], 2)


@pytest.mark.parametrize("H,m,want", [
    (cons.tight_path(4, 8), 2, 3),
    (cons.tight_path(3, 6), 1, 2),
    (cons.complete_graph(5), 0, 2),
])
def test_max_intersecting_examples(H, m, want):
    size, witness = lab.max_intersecting_set(H, m)
    assert size == want == len(witness)
    assert lab.is_intersecting_set(H, witness, m)


@pytest.mark.parametrize("k", [3, 4, 5])
def test_claim_size_table(k):
    for ell in range(2, 8):
        size, _ = lab.max_intersecting_set(cons.tight_path(k, k + ell - 1), k - 2)
        assert size == ceil(ell / 2) == lab.claim_size(ell)


def test_cover_when_no_path():
    H = cons.tight_path(3, 5)
    cover = lab.find_path_cover(H, 3)
    assert cover.cover == ()
    assert lab.validate_cover(H, cover)


def test_cover_of_the_path_itself():
    H = cons.tight_path(3, 6)
    cover = lab.find_path_cover(H, 3)
    e = path_ids(H, 3)
    # the search returns a minimum-size cover; the alternating pair is also valid
    assert cover.cover == (e[0],)
    assert lab.validate_cover(H, cover)
    assert lab.validate_cover(H, lab.IntersectingCover((e[0], e[2]), 1, 3))
    assert not lab.validate_cover(H, lab.IntersectingCover((e[0], e[1]), 1, 3))
    rest = hc.spanning_subgraph(H, [i for i in range(H.e) if i not in cover.cover])
    assert not contains_pattern(rest, lab.forbidden_path(3))


def test_structure_lemma_holds():
    for k in (3, 4, 5):
        rep = lab.verify_tight_path_structure(k)
        assert rep.ok and rep.pairs_checked > 0


def test_structure_negative_control():
    T = cons.tight_path(4, 9)
    bad = lab.mutate_edge(T, path_ids(T, 4)[2], 2, 8)
    assert not lab.verify_structure_on(bad).ok


def test_xy_examples():
    book = hc.new_hypergraph(3, 6, [[0, 1, x] for x in range(2, 6)])
    rep = lab.xy_disjoint_check(book)
    assert rep.hypothesis_met and not rep.violations
    three = hc.new_hypergraph(3, 9, [[0, 1, 2], [3, 4, 5], [6, 7, 8]])
    assert not lab.xy_disjoint_check(three).hypothesis_met
    rep = lab.xy_disjoint_check(cons.tight_path(3, 6))
    assert rep.hypothesis_met and rep.disjoint_pairs >= 1


def test_sampling_small_run():
    rep = lab.sample_seven_edge_covers(50, seed=4)
    assert rep.successes == rep.revalidated == 50


def test_pool_guard():
    with pytest.raises(ValueError):
        lab.sample_seven_edge_covers(1, pool=13)


@st.composite
def seven_edge(draw):
    n = draw(st.integers(5, 12))
    pool = list(combinations(range(n), 3))
    edges = draw(st.lists(st.sampled_from(pool), min_size=7, max_size=7, unique=True))
    return hc.new_hypergraph(3, n, edges)


@settings(max_examples=60, deadline=None)
@given(seven_edge())
def test_covers_exist_and_validate(H):
    cover = lab.find_path_cover(H, 3)
    assert cover is not None
    assert lab.validate_cover(H, cover)


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 5), st.data())
def test_covers_in_small_four_graphs(k, data):
    n = data.draw(st.integers(2 * k, 2 * k + 3))
    pool = list(combinations(range(n), k))
    limit = ceil(3 * (k + 1) / 2)
    edges = data.draw(st.lists(st.sampled_from(pool), max_size=limit, unique=True))
    H = hc.new_hypergraph(k, n, edges)
    cover = lab.find_path_cover(H, k)
    assert cover is not None and lab.validate_cover(H, cover)
