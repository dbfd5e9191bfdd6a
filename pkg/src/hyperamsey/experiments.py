"""Threshold scans, the overlap census and the acceptance-suite runner."""

from __future__ import annotations

import csv
import json
import math
import os
import time
import warnings
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import numpy as np

from . import hypercore as hc
from .constructions import (
    complete_graph,
    plus_lift,
    star,
    sunshine,
    tight_cycle,
    tight_path,
)
from .density import m_k_asym
from .hypercore import Hypergraph, iter_bits
from .ramsey import Colouring, colour, copy_masks, validate_colouring
from .randmodel import GENERATOR, SampleSpec, from_uniforms, uniforms

HEADER = ("Finite-n experiment: it probes transition curves at desk scale and "
          "certifies no asymptotic threshold constant.")


# -- hypergraph names -------------------------------------------------------


def resolve_graph(name: str | dict) -> Hypergraph:
    """Hypergraph from a short name, a JSON file path or a JSON dict.

    Names: ``K6`` (complete graph), ``K3+4`` (plus-lift of K3 to k=4),
    ``C8^4`` (tight cycle, 8 vertices, 4-uniform), ``T12^4`` (tight path
    on 12 vertices), ``S3`` (star with 3 edges), ``S5*`` (sunshine on a
    5-cycle), ``P3`` (graph path with 3 edges).
    """
    if isinstance(name, dict):
        return Hypergraph.from_dict(name)
    text = name.strip()
    if text.endswith(".json") or os.path.sep in text:
        return Hypergraph.from_json(Path(text).read_text())
    try:
        if text.startswith("K"):
            base, _, lift = text[1:].partition("+")
            G = complete_graph(int(base))
            return plus_lift(G, int(lift)) if lift else G
        if text.startswith(("C", "T")):
            size, _, k = text[1:].partition("^")
            if not k:
                raise ValueError("give the uniformity, e.g. C8^4")
            build = tight_cycle if text[0] == "C" else tight_path
            return build(int(k), int(size))
        if text.startswith("S"):
            if text.endswith("*"):
                return sunshine(int(text[1:-1]))
            return star(int(text[1:]))
        if text.startswith("P"):
            return tight_path(2, int(text[1:]) + 1)
    except ValueError as exc:
        raise ValueError(f"cannot parse hypergraph name {name!r}: {exc}") from None
    raise ValueError(f"unknown hypergraph name {name!r}")


# -- statistics -------------------------------------------------------------


def wilson_interval(successes: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    phat = successes / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    # the bounds are exactly 0 and 1 at the extremes; avoid rounding residue
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == n else min(1.0, centre + half)
    return lo, hi


def thread_count() -> int:
    raw = os.environ.get("HYPERAMSEY_THREADS")
    if raw:
        return max(1, int(raw))
    return os.cpu_count() or 1


# -- threshold scan ---------------------------------------------------------


@dataclass
class ScanConfig:
    k: int
    n_list: list[int]
    targets: list[str]
    c_grid: list[float] | None = None
    p_values: list[float] | None = None
    trials: int = 100
    seed: int = 0
    budget: int = 2000
    copy_cap: int = 20_000
    validate: bool = True

    def __post_init__(self):
        grid = self.c_grid if self.c_grid is not None else self.p_values
        if grid is None:
            self.c_grid = [round(0.2 * i, 10) for i in range(1, 11)]
            grid = self.c_grid
        if list(grid) != sorted(grid):
            raise ValueError("the p-grid must be sorted ascending")
        if len(self.targets) != 2:
            raise ValueError("the scan takes exactly two targets")
        if self.trials < 1:
            raise ValueError("need at least one trial")

    @classmethod
    def from_dict(cls, data: dict) -> ScanConfig:
        return cls(**data)


@dataclass
class ScanRow:
    n: int
    c: float | None
    p: float
    trials: int
    arrow_successes: int
    colour_successes: int
    unknowns: int
    wilson_low: float
    wilson_high: float


@dataclass
class ScanReport:
    rows: list[ScanRow]
    metadata: dict
    monotonicity_violations: int = 0
    invalid_colourings: int = 0
    per_trial: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"header": HEADER, "metadata": self.metadata,
                "monotonicity_violations": self.monotonicity_violations,
                "invalid_colourings": self.invalid_colourings,
                "rows": [asdict(r) for r in self.rows]}

    def write_csv(self, path: str | Path) -> None:
        write_rows_csv(path, [asdict(r) for r in self.rows])


def write_rows_csv(path: str | Path, rows: Sequence[dict]) -> None:
    path = Path(path)
    if not rows:
        path.write_text("")
        return
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)


ARROWS, COLOURED, UNKNOWN = "arrow", "colour", "unknown"


def _grid(cfg: ScanConfig, n: int, theta: Fraction) -> list[tuple[float | None, float]]:
    if cfg.c_grid is not None:
        scale = n ** (-1 / float(theta))
        return [(c, min(1.0, c * scale)) for c in cfg.c_grid]
    return [(None, float(p)) for p in cfg.p_values]


def _decide(H: Hypergraph, F1: Hypergraph, F2: Hypergraph, cfg: ScanConfig) -> tuple[str, bool]:
    """(outcome, colouring valid) for one sample; the flag is True unless a
    returned colouring failed validation."""
    c2 = copy_masks(F2, H, cfg.copy_cap)
    c1 = copy_masks(F1, H, cfg.copy_cap)
    if len(c1) >= cfg.copy_cap or len(c2) >= cfg.copy_cap:
        return UNKNOWN + ":copies", True
    result = colour(H, F1, F2, cfg.budget, c1, c2)
    if isinstance(result, Colouring):
        ok = validate_colouring(H, result, [F1, F2]) if cfg.validate else True
        return COLOURED, ok
    return (ARROWS if result.stage == "core arrows" else UNKNOWN), True


def _run_trial(args) -> tuple[int, int, list[str], int]:
    cfg, n, trial, grid = args
    F1, F2 = (resolve_graph(t) for t in cfg.targets)
    u = uniforms(SampleSpec(cfg.k, n, 0.0, cfg.seed, trial))
    outcomes: list[str] = []
    invalid = 0
    capped = False
    for _, p in grid:
        if p == 0:
            outcomes.append(COLOURED)
            continue
        if capped:
            # copy counts only grow with p under the coupling
            outcomes.append(UNKNOWN + ":copies")
            continue
        H = from_uniforms(n, cfg.k, u, p)
        outcome, ok = _decide(H, F1, F2, cfg)
        invalid += not ok
        capped = outcome == UNKNOWN + ":copies"
        outcomes.append(outcome)
    return n, trial, outcomes, invalid


def threshold_scan(cfg: ScanConfig, threads: int | None = None) -> ScanReport:
    F1, F2 = (resolve_graph(t) for t in cfg.targets)
    theta = m_k_asym(F1, F2).value
    threads = thread_count() if threads is None else threads
    started = time.time()
    jobs = []
    grids = {}
    for n in cfg.n_list:
        grids[n] = _grid(cfg, n, theta)
        jobs.extend((cfg, n, t, grids[n]) for t in range(cfg.trials))
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_trial, jobs, chunksize=4))
    else:
        results = [_run_trial(j) for j in jobs]
    results.sort(key=lambda r: (r[0], r[1]))
    report = ScanReport([], {})
    for n in cfg.n_list:
        mine = [r for r in results if r[0] == n]
        report.per_trial[n] = [r[2] for r in mine]
        for _, _, outcomes, invalid in mine:
            report.invalid_colourings += invalid
            seen_arrow = False
            seen_colour_after_arrow = False
            for o in outcomes:
                if o == ARROWS:
                    seen_arrow = True
                elif o == COLOURED and seen_arrow:
                    seen_colour_after_arrow = True
            report.monotonicity_violations += seen_colour_after_arrow
        for idx, (c, p) in enumerate(grids[n]):
            column = [r[2][idx] for r in mine]
            a = sum(o == ARROWS for o in column)
            col = sum(o == COLOURED for o in column)
            unk = len(column) - a - col
            lo, hi = wilson_interval(a, a + col)
            report.rows.append(ScanRow(n, c, p, len(column), a, col, unk, lo, hi))
    report.metadata = {
        "k": cfg.k, "targets": cfg.targets, "theta": str(theta), "seed": cfg.seed,
        "trials": cfg.trials, "budget": cfg.budget, "copy_cap": cfg.copy_cap,
        "generator": GENERATOR, "numpy": np.__version__, "coupled": True,
        "interval": "Wilson 95% on arrow successes among decided trials",
        "seconds": round(time.time() - started, 2),
    }
    return report


# -- overlap census ---------------------------------------------------------


class CensusCapError(RuntimeError):
    pass


@dataclass
class CensusReport:
    k: int
    n: int
    p: float
    trials: int
    pairs_in_complete: int
    exact_expectation: float
    empirical_mean: float
    standard_error: float
    counts: list[int] = field(repr=False, default_factory=list)

    @property
    def z_score(self) -> float:
        if self.standard_error == 0:
            return 0.0 if self.empirical_mean == self.exact_expectation else math.inf
        return (self.empirical_mean - self.exact_expectation) / self.standard_error

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("counts")
        d["z_score"] = self.z_score
        return d


def overlapping_pairs(copies: Sequence[int], e_count: int) -> list[tuple[int, int]]:
    """Unordered pairs of distinct copies (edge masks) sharing an edge."""
    by_edge: list[list[int]] = [[] for _ in range(e_count)]
    for i, mask in enumerate(copies):
        for e in iter_bits(mask):
            by_edge[e].append(i)
    pairs = set()
    for group in by_edge:
        pairs.update(combinations(group, 2))
    return sorted(pairs)


def exact_overlap_expectation(k: int, n: int, p, F1: Hypergraph, cap: int = 2_000_000):
    """Sum of p^{e(A ∪ B)} over overlapping copy pairs in K_n^(k); returns
    (number of pairs, expectation)."""
    K = hc.complete_hypergraph(n, k)
    copies = copy_masks(F1, K, cap + 1)
    if len(copies) > cap:
        raise CensusCapError(f"more than {cap} copies of F1 in K_{n}^({k})")
    pairs = overlapping_pairs(copies, K.e)
    if len(pairs) > cap:
        raise CensusCapError(f"{len(pairs)} overlapping pairs exceed the cap {cap}")
    by_size: dict[int, int] = {}
    for a, b in pairs:
        size = (copies[a] | copies[b]).bit_count()
        by_size[size] = by_size.get(size, 0) + 1
    expectation = sum(count * p ** size for size, count in by_size.items())
    return len(pairs), expectation


def overlap_census(k: int, n: int, p, F1: Hypergraph, trials: int, seed: int,
                   F2: Hypergraph | None = None) -> CensusReport:
    """Empirical vs exact mean number of overlapping F1-copy pairs in H^k(n, p)."""
    if F1.e <= 1:
        pairs, exact = 0, 0.0
    else:
        pairs, exact = exact_overlap_expectation(k, n, p, F1)
    counts = []
    for t in range(trials):
        H = from_uniforms(n, k, uniforms(SampleSpec(k, n, p, seed, t)), p)
        copies = copy_masks(F1, H) if F1.e > 1 else []
        counts.append(len(overlapping_pairs(copies, H.e)))
    arr = np.asarray(counts, dtype=float)
    se = float(arr.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return CensusReport(k, n, float(p), trials, pairs, float(exact), float(arr.mean()), se, counts)


# -- suite ------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    kind: str
    passed: bool
    seconds: float
    detail: dict


def _check(kind: str, params: dict) -> tuple[bool, dict]:
    from . import suite_checks

    try:
        fn = suite_checks.CHECKS[kind]
    except KeyError:
        raise ValueError(f"unknown check kind {kind!r}") from None
    return fn(**params)


def run_suite(path: str | Path, out_dir: str | Path | None = None,
              only: Sequence[str] | None = None) -> tuple[int, list[CheckResult]]:
    """Run every check of a suite file; returns (exit status, results).

    Results go to ``results.json`` and ``results.csv`` in ``out_dir``.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"suite file {path} not found")
    suite = json.loads(path.read_text())
    checks = suite.get("checks", [])
    if only:
        checks = [c for c in checks if c["name"] in set(only)]
    if not checks:
        warnings.warn("suite contains zero checks", stacklevel=2)
    results = []
    for check in checks:
        t0 = time.time()
        try:
            passed, detail = _check(check["kind"], check.get("params", {}))
        except Exception as exc:  # a crashing check is a failing check
            passed, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
        results.append(CheckResult(check["name"], check["kind"], bool(passed),
                                   round(time.time() - t0, 3), detail))
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        payload = {"header": HEADER, "suite": str(path),
                   "passed": all(r.passed for r in results),
                   "results": [asdict(r) for r in results]}
        (out / "results.json").write_text(json.dumps(payload, indent=2, default=str))
        write_rows_csv(out / "results.csv",
                       [{"name": r.name, "kind": r.kind, "passed": r.passed,
                         "seconds": r.seconds} for r in results])
    status = 0 if all(r.passed for r in results) else 1
    return status, results
