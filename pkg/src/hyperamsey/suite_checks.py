"""Named checks runnable from a suite file; each returns (passed, detail)."""

from __future__ import annotations

import random
from fractions import Fraction
from math import ceil

from . import constructions as cons
from . import density, growseq, lemmalab, ramsey
from .experiments import ScanConfig, overlap_census, resolve_graph, threshold_scan
from .hypercore import Hypergraph
from .randmodel import SampleSpec, sample


def density_check(graph: str, expected: str, kind: str = "m_k", other: str | None = None,
                  method: str = "auto") -> tuple[bool, dict]:
    F = resolve_graph(graph)
    if kind == "m_k":
        rep = density.m_k(F, method)
    elif kind == "m":
        rep = density.m(F, method)
    elif kind == "m_k_asym":
        rep = density.m_k_asym(F, resolve_graph(other), method)
    else:
        raise ValueError(f"unknown density kind {kind!r}")
    want = density.parse_rational(expected)
    return rep.value == want, {"value": str(rep.value), "expected": str(want)}


def balanced_check(graph: str, expected: bool, wrt: str | None = None) -> tuple[bool, dict]:
    F = resolve_graph(graph)
    got = density.is_strictly_balanced_wrt(F, resolve_graph(wrt)) if wrt else density.is_strictly_k_balanced(F)
    return got == expected, {"value": got}


def chain_check(f1: str, f2: str) -> tuple[bool, dict]:
    F1, F2 = resolve_graph(f1), resolve_graph(f2)
    a, b, c = density.m_k(F2).value, density.m_k_asym(F1, F2).value, density.m_k(F1).value
    return a < b < c, {"m_k(F2)": str(a), "m_k(F1,F2)": str(b), "m_k(F1)": str(c)}


def arrow_check(host: str, targets: list[str], expected: bool, budget: int | None = None):
    G = resolve_graph(host)
    Fs = [resolve_graph(t) for t in targets]
    verdict = ramsey.arrow(G, Fs, budget)
    detail = {"arrows": verdict.arrows, "nodes": verdict.nodes_explored}
    ok = verdict.arrows == expected
    if verdict.arrows is False:
        detail["witness_valid"] = ramsey.validate_colouring(G, verdict.witness, Fs)
        ok = ok and detail["witness_valid"]
    return ok, detail


def antitone_check(count: int = 50, seed: int = 0, budget: int | None = None):
    rng = random.Random(seed)
    K3 = cons.complete_graph(3)
    bad = 0
    for _ in range(count):
        n = rng.randint(5, 7)
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        G = Hypergraph(2, n, tuple(sorted(rng.sample(pairs, rng.randint(8, len(pairs))))))
        e = rng.randrange(G.e)
        smaller = Hypergraph(2, n, tuple(x for i, x in enumerate(G.edges) if i != e))
        big = ramsey.arrow(G, [K3, K3], budget).arrows
        small = ramsey.arrow(smaller, [K3, K3], budget).arrows
        bad += bool(small) and not big
    return bad == 0, {"instances": count, "violations": bad}


def claim_size_check(ks: list[int], ells: list[int]):
    rows = []
    for k in ks:
        for ell in ells:
            size, _ = lemmalab.max_intersecting_set(cons.tight_path(k, k + ell - 1), k - 2)
            rows.append({"k": k, "ell": ell, "max": size, "expected": ceil(ell / 2)})
    return all(r["max"] == r["expected"] for r in rows), {"cases": rows}


def structure_check(ks: list[int]):
    reports = {k: lemmalab.verify_tight_path_structure(k) for k in ks}
    return all(r.ok for r in reports.values()), {
        str(k): {"pairs": r.pairs_checked, "failures": r.failures[:3]} for k, r in reports.items()}


def constants_check(f1: str, f2: str, C1: str | None = None, C2: str | None = None,
                    alpha2: str | None = None):
    c = growseq.compute_constants(resolve_graph(f1), resolve_graph(f2))
    ok = True
    for name, want in (("C1", C1), ("C2", C2), ("alpha2", alpha2)):
        if want is not None:
            ok &= getattr(c, name) == Fraction(want)
    return ok, c.to_dict()


def asym_balanced_check(f1: str, f2: str, max_states: int = 3000, random_count: int = 300,
                        seed: int = 0):
    F1, F2 = resolve_graph(f1), resolve_graph(f2)
    generic = cons.generic_members(F1, F2)
    fam = cons.generate_family_fstar(F1, F2, max_vertices=18, max_states=max_states)
    extra = cons.random_members(F1, F2, random_count, seed)
    v1 = cons.check_asymmetric_balanced(F1, F2, generic)
    v2 = cons.check_asymmetric_balanced(F1, F2, fam.members + extra)
    ok = v1.balanced and v2.balanced
    return ok, {"generic": v1.summary(), "others": v2.summary(),
                "family_truncated": fam.truncated, "family_reason": fam.reason}


def census_check(k: int, n: int, p: float, f1: str, trials: int, seed: int, max_z: float = 3.0):
    rep = overlap_census(k, n, p, resolve_graph(f1), trials, seed)
    return abs(rep.z_score) <= max_z, rep.to_dict()


def lemma_sampling_check(count: int = 1000, seed: int = 0, pool: int = 12):
    rep = lemmalab.sample_seven_edge_covers(count, seed, pool)
    ok = rep.successes == count and rep.revalidated == count
    return ok, {"instances": count, "successes": rep.successes, "revalidated": rep.revalidated}


def pipeline_samples(ns=(20, 30), per_n: int = 100, seed: int = 0, c: float = 0.4):
    F1 = cons.lifted_triangle(4)
    F2 = cons.tight_cycle(4, 8)
    theta = density.m_k_asym(F1, F2).value
    for n in ns:
        p = c * n ** (-1 / float(theta))
        for t in range(per_n):
            yield n, t, sample(SampleSpec(4, n, p, seed, t))


def colour_pipeline_check(ns=(20, 30), per_n: int = 100, seed: int = 0, orders: int = 20):
    F1, F2 = cons.lifted_triangle(4), cons.tight_cycle(4, 8)
    returned = valid = order_bad = 0
    for n, t, H in pipeline_samples(ns, per_n, seed):
        c1, c2 = ramsey.copy_masks(F1, H), ramsey.copy_masks(F2, H)
        res = ramsey.colour(H, F1, F2, None, c1, c2)
        if isinstance(res, ramsey.Colouring):
            returned += 1
            valid += ramsey.validate_colouring(H, res, [F1, F2])
        base = set(ramsey.strip_open(H, F1, F2, c1, c2).remaining)
        for s in range(orders):
            if set(ramsey.strip_open(H, F1, F2, c1, c2, order_seed=s).remaining) != base:
                order_bad += 1
                break
    ok = returned == valid and order_bad == 0
    return ok, {"instances": len(ns) * per_n, "colourings": returned, "valid": valid,
                "order_dependent": order_bad}


def growseq_check(gadgets: int = 20, seed: int = 0, ns=(20, 30), per_n: int = 100):
    F1, F2 = cons.lifted_triangle(4), cons.tight_cycle(4, 8)
    constants = growseq.compute_constants(F1, F2)
    cores = []
    for _, _, H in pipeline_samples(ns, per_n, seed):
        dec = ramsey.decompose(H, F1, F2)
        cores.extend(dec.core_graph(i) for i in range(len(dec.cores)))
    sample_cores = len(cores)
    for g in range(gadgets):
        cores.extend(growseq.gadget_cores(growseq.synthesize_closed_gadget(F1, F2, seed + g), F1, F2))
    violations = []
    regular = 0
    for core in cores:
        seq = growseq.grow_sequence(core, F1, F2)
        audit = growseq.audit_sequence(seq, constants)
        regular += audit.reg[-1]
        violations.extend(audit.violations)
    return not violations, {"sample_cores": sample_cores, "cores": len(cores),
                            "regular_steps": regular, "violations": violations[:5]}


def _sparse_enough(H: Hypergraph, theta: Fraction) -> bool:
    # e/v is a lower bound for m(H); skip the exact maximisation when it already exceeds theta
    if not H.e or Fraction(H.e, H.vertex_count) > theta:
        return False
    return density.m(H).value <= theta


def sparse_colouring_check(graphs=("C8^4", "T12^4"), samples: bool = True, seed: int = 0,
                           extra_p: float | None = None, extra_count: int = 0, extra_n: int = 20):
    F1, F2 = cons.lifted_triangle(4), cons.tight_cycle(4, 8)
    theta = density.m_k_asym(F1, F2).value
    hosts = [resolve_graph(g) for g in graphs]
    eligible = 0
    if samples:
        for _, _, H in pipeline_samples(seed=seed):
            if _sparse_enough(H, theta):
                hosts.append(H)
                eligible += 1
    for t in range(extra_count):
        H = sample(SampleSpec(4, extra_n, extra_p, seed, t))
        if _sparse_enough(H, theta):
            hosts.append(H)
    bad = 0
    for H in hosts:
        res = ramsey.sparse_colouring(H)
        if not isinstance(res, ramsey.Colouring) or not ramsey.validate_colouring(H, res, [F1, F2]):
            bad += 1
    return bad == 0, {"hosts": len(hosts), "eligible_pipeline_samples": eligible, "failures": bad}


def scan_check(config: dict, max_seconds: float = 3600.0):
    rep = threshold_scan(ScanConfig.from_dict(config))
    rows_ok = all(r.arrow_successes + r.colour_successes + r.unknowns == r.trials for r in rep.rows)
    ok = (rows_ok and rep.monotonicity_violations == 0 and rep.invalid_colourings == 0
          and rep.metadata["seconds"] < max_seconds)
    return ok, rep.to_dict()


CHECKS = {
    "density": density_check,
    "balanced": balanced_check,
    "density_chain": chain_check,
    "arrow": arrow_check,
    "arrow_antitone": antitone_check,
    "claim_size": claim_size_check,
    "path_structure": structure_check,
    "constants": constants_check,
    "asym_balanced": asym_balanced_check,
    "census": census_check,
    "lemma_sampling": lemma_sampling_check,
    "colour_pipeline": colour_pipeline_check,
    "growseq": growseq_check,
    "sparse_colouring": sparse_colouring_check,
    "scan": scan_check,
}
