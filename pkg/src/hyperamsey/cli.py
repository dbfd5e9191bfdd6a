"""Command-line entry point: ``hyperamsey <verb> ...``; every verb prints JSON."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from . import constructions as cons
from . import density, growseq, lemmalab, ramsey
from .experiments import (
    HEADER,
    ScanConfig,
    overlap_census,
    resolve_graph,
    run_suite,
    threshold_scan,
)
from .hypercore import Hypergraph
from .randmodel import GENERATOR, SampleSpec, sample


def _emit(obj, out: str | None = None) -> None:
    text = json.dumps(obj, indent=2, default=str)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _targets(text: str) -> list[Hypergraph]:
    return [resolve_graph(t) for t in text.split(",")]


def _load_colouring(path: str) -> list[int]:
    data = json.loads(Path(path).read_text())
    return data["assignment"] if isinstance(data, dict) else data


def cmd_density(a):
    F = resolve_graph(a.graph)
    if a.kind == "asym":
        rep = density.m_k_asym(F, resolve_graph(a.other), a.method)
    elif a.kind == "m":
        rep = density.m(F, a.method)
    else:
        rep = density.m_k(F, a.method)
    out = rep.to_dict()
    if a.kind == "mk":
        out["strictly_balanced"] = density.is_strictly_k_balanced(F)
    return out


def cmd_arrow(a):
    G = resolve_graph(a.host)
    Fs = _targets(a.targets)
    v = ramsey.arrow(G, Fs, a.budget)
    return {"arrows": v.arrows, "nodes": v.nodes_explored,
            "witness": None if v.witness is None else list(v.witness.assignment)}


def cmd_colour(a):
    H = resolve_graph(a.host)
    F1, F2 = _targets(a.targets)
    if a.sparse:
        res = ramsey.sparse_colouring(H)
    else:
        res = ramsey.colour(H, F1, F2, a.budget)
    if isinstance(res, ramsey.Colouring):
        return {"ok": True, "assignment": list(res.assignment),
                "valid": ramsey.validate_colouring(H, res, [F1, F2])}
    return {"ok": False, "stage": res.stage, "message": res.message, "detail": res.detail}


def cmd_classify(a):
    H = resolve_graph(a.host)
    F1, F2 = _targets(a.targets)
    cls = ramsey.classify_edges(H, F1, F2)
    return {"open": list(cls.open), "closed": list(cls.closed),
            "certificates": {str(e): [hex(x) for x in pair] for e, pair in cls.certificates.items()}}


def cmd_strip(a):
    H = resolve_graph(a.host)
    F1, F2 = _targets(a.targets)
    dec = ramsey.decompose(H, F1, F2)
    return {"remaining": list(dec.remaining), "removal_stack": list(dec.removal_stack),
            "cores": [list(c) for c in dec.cores]}


def cmd_count_mono(a):
    return {"counts": ramsey.count_monochromatic(a.n, _load_colouring(a.colouring), _targets(a.targets))}


def cmd_sample(a):
    H = sample(SampleSpec(a.k, a.n, a.p, a.seed, a.trial))
    return {"generator": GENERATOR, "seed": a.seed, "trial": a.trial, "p": a.p, **H.to_dict()}


def cmd_family(a):
    F1, F2 = resolve_graph(a.f1), resolve_graph(a.f2)
    if a.generic:
        members = cons.generic_members(F1, F2)
        truncated, reason = False, "complete generic enumeration"
    else:
        rep = cons.generate_family_fstar(F1, F2, a.max_vertices, a.max_states)
        members, truncated, reason = rep.members, rep.truncated, rep.reason
    out = {"members": len(members), "truncated": truncated, "reason": reason,
           "generic": sum(m.generic for m in members)}
    if a.check:
        out["balance"] = cons.check_asymmetric_balanced(F1, F2, members).summary()
    if a.dump:
        out["member_list"] = [m.to_dict() for m in members[: a.dump]]
    return out


def cmd_growseq(a):
    F1, F2 = resolve_graph(a.f1), resolve_graph(a.f2)
    if a.synthesize_gadget is not None:
        return growseq.synthesize_closed_gadget(F1, F2, a.synthesize_gadget).to_dict()
    core = resolve_graph(a.core)
    constants = growseq.compute_constants(F1, F2)
    seq = growseq.grow_sequence(core, F1, F2)
    audit = growseq.audit_sequence(seq, constants)
    return {"constants": constants.to_dict(), "sequence": seq.to_dict(),
            "audit": {"kappa": audit.kappa, "reg": audit.reg, "deg": audit.deg, "fo": audit.fo,
                      "violations": audit.violations, "length_bound": audit.length_bound}}


def cmd_lemma(a):
    params = json.loads(a.params) if a.params else {}
    if a.name == "max-intersecting":
        if "graph" in params:
            H = resolve_graph(params["graph"])
            size, witness = lemmalab.max_intersecting_set(H, params.get("m", H.k - 2))
            return {"max": size, "witness": list(witness)}
        rows = []
        for k in params.get("ks", [3, 4, 5]):
            for ell in range(2, params.get("max_ell", 7) + 1):
                size, witness = lemmalab.max_intersecting_set(cons.tight_path(k, k + ell - 1), k - 2)
                rows.append({"k": k, "ell": ell, "max": size, "expected": lemmalab.claim_size(ell),
                             "witness": list(witness)})
        return {"rows": rows}
    if a.name == "tight-structure":
        return {str(k): {"ok": r.ok, "pairs": r.pairs_checked, "failures": r.failures}
                for k in params.get("ks", [3, 4, 5]) for r in [lemmalab.verify_tight_path_structure(k)]}
    if a.name == "xy-disjoint":
        rep = lemmalab.xy_disjoint_check(resolve_graph(params["graph"]))
        return {"hypothesis_met": rep.hypothesis_met, "disjoint_pairs": rep.disjoint_pairs,
                "violations": [list(v) for v in rep.violations]}
    if "graph" in params:
        H = resolve_graph(params["graph"])
        cover = lemmalab.find_path_cover(H, params.get("k", H.k))
        if cover is None:
            return {"found": False}
        return {"found": True, "cover": list(cover.cover), "valid": lemmalab.validate_cover(H, cover)}
    rep = lemmalab.sample_seven_edge_covers(params.get("count", 1000), params.get("seed", 0),
                                            params.get("pool", 12))
    return {"instances": rep.instances, "successes": rep.successes, "revalidated": rep.revalidated}


def cmd_scan(a):
    data = json.loads(Path(a.config).read_text()) if a.config else {}
    if a.trials is not None:
        data["trials"] = a.trials
    data.setdefault("k", 4)
    data.setdefault("n_list", [20])
    data.setdefault("targets", ["K3+4", "C8^4"])
    report = threshold_scan(ScanConfig.from_dict(data))
    if a.csv:
        report.write_csv(a.csv)
    return report.to_dict()


def cmd_census(a):
    rep = overlap_census(a.k, a.n, a.p, resolve_graph(a.f1), a.trials, a.seed)
    return {"header": HEADER, **rep.to_dict()}


def cmd_suite(a):
    status, results = run_suite(a.path, a.out_dir, a.only)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  ({r.seconds:.1f}s)", file=sys.stderr)
    return {"status": status, "results": [asdict(r) for r in results]}, status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperamsey", description=__doc__)
    p.add_argument("--out", help="write JSON here instead of stdout")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("density", help="exact densities")
    s.add_argument("graph")
    s.add_argument("--kind", choices=["mk", "m", "asym"], default="mk")
    s.add_argument("--other", help="second graph for --kind asym")
    s.add_argument("--method", choices=["auto", "exhaustive", "flow"], default="auto")
    s.set_defaults(fn=cmd_density)

    for verb, fn, extra in (("arrow", cmd_arrow, True), ("colour", cmd_colour, True),
                            ("classify", cmd_classify, False), ("strip", cmd_strip, False)):
        s = sub.add_parser(verb)
        s.add_argument("host")
        s.add_argument("--targets", required=True, help="comma separated, e.g. K3+4,C8^4")
        if extra:
            s.add_argument("--budget", type=int)
        if verb == "colour":
            s.add_argument("--sparse", action="store_true", help="min-degree peeling colouring")
        s.set_defaults(fn=fn)

    s = sub.add_parser("count-mono")
    s.add_argument("n", type=int)
    s.add_argument("colouring", help="JSON list of colours or {'assignment': [...]}")
    s.add_argument("--targets", required=True)
    s.set_defaults(fn=cmd_count_mono)

    s = sub.add_parser("sample")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trial", type=int, default=0)
    s.set_defaults(fn=cmd_sample)

    s = sub.add_parser("family")
    s.add_argument("--f1", default="K3+4")
    s.add_argument("--f2", default="C8^4")
    s.add_argument("--generic", action="store_true", help="all generic members instead of the capped DFS")
    s.add_argument("--max-vertices", type=int, default=18)
    s.add_argument("--max-states", type=int, default=3000)
    s.add_argument("--check-balanced", "--check", dest="check", action="store_true")
    s.add_argument("--dump", type=int, default=0, help="include the first N members")
    s.set_defaults(fn=cmd_family)

    s = sub.add_parser("growseq")
    s.add_argument("--core")
    s.add_argument("--f1", default="K3+4")
    s.add_argument("--f2", default="C8^4")
    s.add_argument("--synthesize-gadget", type=int, metavar="SEED")
    s.set_defaults(fn=cmd_growseq)

    s = sub.add_parser("lemma")
    s.add_argument("--name", required=True,
                   choices=["path-cover", "tight-structure", "max-intersecting", "xy-disjoint"])
    s.add_argument("--params", help='JSON object, e.g. {"graph": "T6^3"} or {"count": 1000, "seed": 0}')
    s.set_defaults(fn=cmd_lemma)

    s = sub.add_parser("scan")
    s.add_argument("--config", help="ScanConfig as JSON")
    s.add_argument("--trials", type=int)
    s.add_argument("--csv")
    s.set_defaults(fn=cmd_scan)

    s = sub.add_parser("census")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--f1", required=True)
    s.add_argument("--trials", type=int, default=500)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(fn=cmd_census)

    s = sub.add_parser("suite")
    s.add_argument("path")
    s.add_argument("--out-dir", default="suite_results")
    s.add_argument("--only", nargs="*")
    s.set_defaults(fn=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verb == "growseq" and args.core is None and args.synthesize_gadget is None:
        parser.error("growseq needs --core or --synthesize-gadget")
    if args.verb == "suite":
        payload, status = args.fn(args)
        _emit(payload, args.out)
        return status
    try:
        result = args.fn(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(result, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
