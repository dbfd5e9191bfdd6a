import csv
import json
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperamsey import constructions as cons
from hyperamsey import hypercore as hc
from hyperamsey.experiments import (
    ScanConfig,
    exact_overlap_expectation,
    overlap_census,
    resolve_graph,
    run_suite,
    threshold_scan,
    wilson_interval,
)


def small_scan(**kw):
    cfg = dict(k=2, n_list=[6], targets=["K3", "K3"], p_values=[0.0, 0.5, 1.0], trials=8, seed=1)
    cfg.update(kw)
    return threshold_scan(ScanConfig(**cfg), threads=1)


def test_resolve_names():
    assert hc.is_isomorphic(resolve_graph("K3+4"), cons.lifted_triangle(4))
    assert resolve_graph("C8^4") == cons.tight_cycle(4, 8)
    assert resolve_graph("T12^4").e == 9
    assert resolve_graph("S5*").e == 10
    assert resolve_graph("P3").e == 3
    assert resolve_graph({"k": 2, "vertices": 3, "edges": [[0, 1]]}).e == 1
    with pytest.raises(ValueError):
        resolve_graph("Q7")


def test_wilson_interval():
    lo, hi = wilson_interval(0, 10)
    assert lo == 0 and 0.27 < hi < 0.28
    lo, hi = wilson_interval(10, 10)
    assert hi == 1 and 0.72 < lo < 0.73
    assert wilson_interval(0, 0) == (0.0, 1.0)


@given(st.integers(0, 200), st.integers(1, 200))
def test_wilson_contains_estimate(s, n):
    s = min(s, n)
    lo, hi = wilson_interval(s, n)
    assert 0 <= lo <= s / n <= hi <= 1


def test_scan_extremes():
    rep = small_scan()
    p0, _, p1 = rep.rows
    assert p0.arrow_successes == 0 and p0.colour_successes == p0.trials
    assert p1.arrow_successes == p1.trials
    for r in rep.rows:
        assert r.arrow_successes + r.colour_successes + r.unknowns == r.trials
    assert rep.monotonicity_violations == 0 and rep.invalid_colourings == 0


def test_scan_is_deterministic_and_monotone():
    a, b = small_scan(p_values=[0.2, 0.4, 0.6, 0.8], trials=10), small_scan(
        p_values=[0.2, 0.4, 0.6, 0.8], trials=10)
    assert [r.__dict__ for r in a.rows] == [r.__dict__ for r in b.rows]
    for outcomes in a.per_trial[6]:
        arrows = [o == "arrow" for o in outcomes]
        assert arrows == sorted(arrows)


def test_scan_csv_matches_json(tmp_path):
    rep = small_scan()
    rep.write_csv(tmp_path / "scan.csv")
    with open(tmp_path / "scan.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    js = rep.to_dict()["rows"]
    assert len(rows) == len(js)
    for r, j in zip(rows, js):
        for key, val in j.items():
            assert r[key] == ("" if val is None else str(val))
    assert "finite" in rep.to_dict()["header"].lower()


def test_scan_metadata_records_theta():
    rep = threshold_scan(ScanConfig(k=4, n_list=[8], targets=["K3+4", "C8^4"], c_grid=[0.2],
                                    trials=1), threads=1)
    assert rep.metadata["theta"] == "21/11"


@pytest.mark.parametrize("kw", [dict(p_values=[0.5, 0.2]), dict(targets=["K3"]), dict(trials=0)])
def test_scan_config_validation(kw):
    base = dict(k=2, n_list=[6], targets=["K3", "K3"], p_values=[0.1], trials=1)
    base.update(kw)
    with pytest.raises(ValueError):
        ScanConfig(**base)


def test_default_grid():
    cfg = ScanConfig(k=4, n_list=[20], targets=["K3+4", "C8^4"])
    assert cfg.c_grid[0] == 0.2 and cfg.c_grid[-1] == 2.0 and len(cfg.c_grid) == 10


def test_census_single_edge_is_zero():
    rep = overlap_census(3, 6, 0.5, hc.new_hypergraph(3, 3, [[0, 1, 2]]), 20, 0)
    assert rep.exact_expectation == 0 and rep.empirical_mean == 0


def test_census_triangle_exact_value():
    # each K6 edge lies in 4 triangles; two triangles share at most one edge
    pairs, exact = exact_overlap_expectation(2, 6, 0.5, cons.complete_graph(3))
    assert pairs == 15 * 6
    assert exact == pytest.approx(90 / 32, abs=1e-12)


def test_census_triangle_empirical():
    rep = overlap_census(2, 6, 0.5, cons.complete_graph(3), 500, 0)
    assert abs(rep.z_score) <= 3


def write_suite(tmp_path, checks):
    path = tmp_path / "suite.json"
    path.write_text(json.dumps({"checks": checks}))
    return path


def test_suite_negative_control(tmp_path):
    path = write_suite(tmp_path, [
        {"name": "good", "kind": "density", "params": {"graph": "C8^4", "expected": "7/4"}},
        {"name": "wrong", "kind": "density", "params": {"graph": "C8^4", "expected": "2"}},
    ])
    status, results = run_suite(path, tmp_path / "out")
    assert status == 1
    assert {r.name: r.passed for r in results} == {"good": True, "wrong": False}
    saved = json.loads((tmp_path / "out" / "results.json").read_text())
    assert saved["passed"] is False
    assert (tmp_path / "out" / "results.csv").read_text().count("\n") == 3


def test_empty_suite_warns_and_passes(tmp_path):
    path = write_suite(tmp_path, [])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        status, results = run_suite(path)
    assert status == 0 and results == []
    assert any("zero checks" in str(w.message) for w in caught)


def test_missing_suite(tmp_path):
    with pytest.raises(FileNotFoundError):
        run_suite(tmp_path / "nope.json")


def test_unknown_check_kind_fails(tmp_path):
    status, results = run_suite(write_suite(tmp_path, [{"name": "x", "kind": "bogus"}]))
    assert status == 1 and "error" in results[0].detail
