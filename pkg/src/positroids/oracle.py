"""Brute-force verification of the other modules.

The checks here deliberately take other routes than the code they check:
Plucker coordinates of traces are recomputed as maximal minors of the
boundary measurement matrix, positroids are rebuilt from necklaces, and
symbolic verdicts are repeated at random positive rational points.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .core import (
    EMPTY,
    InputError,
    LeDiagram,
    PluckerIndex,
    all_le_diagrams,
    chi,
    decperm_to_necklace,
    lpm_bounds,
    plucker_resolve,
    positroid_of_necklace,
    young_shapes,
)
from .laurent import LaurentPolynomial
from .network import (
    BasisError,
    LeNetwork,
    all_indices,
    boundary_matrix,
    build_network,
    exponent_matrix,
    family_count,
    integer_rank,
    maximal_minor,
    nonzero_subsets,
    plucker_poly,
    solve_weights_from_basis,
)
from .tpdiagram import MutationStep, MutationTrace, canonical_tp_diagram, is_connected, is_weakly_connected

SCHEMA_VERSION = 1
MAX_N = 8
SPECIALIZATION_BOUND = 100


# ---------------------------------------------------------------------------
# Serialization helpers
# ---------------------------------------------------------------------------


def diagram_to_json(d: LeDiagram) -> dict:
    return {"n": d.n, "shape": list(d.shape), "dots": [list(x) for x in d.sorted_dots()]}


def diagram_from_json(data: dict) -> LeDiagram:
    return LeDiagram(int(data["n"]), tuple(data["shape"]), frozenset(tuple(x) for x in data["dots"]))


def cell_key(d: LeDiagram) -> str:
    rows = "/".join("".join("D" if (r, c) in d.dots else "." for c in range(1, d.shape[r - 1] + 1))
                    for r in range(1, d.k + 1))
    return f"n={d.n};k={d.k};{rows}"


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass
class Entry:
    check: str
    ok: bool
    cell: str
    detail: str = ""
    reproducer: dict | None = None

    def to_json(self) -> dict:
        out = {"check": self.check, "ok": self.ok, "cell": self.cell}
        if self.detail:
            out["detail"] = self.detail
        if self.reproducer is not None:
            out["reproducer"] = self.reproducer
        return out


@dataclass
class VerificationReport:
    kind: str
    params: dict = field(default_factory=dict)
    entries: list[Entry] = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    elapsed: float | None = None

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    @property
    def failures(self) -> list[Entry]:
        return [e for e in self.entries if not e.ok]

    def add(self, check: str, ok: bool, cell: str, detail: str = "", reproducer: dict | None = None) -> bool:
        self.entries.append(Entry(check, ok, cell, detail, None if ok else reproducer))
        return ok

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        self.entries.extend(other.entries)
        for key, v in other.counts.items():
            self.counts[key] = self.counts.get(key, 0) + v
        return self

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "params": self.params,
            "ok": self.ok,
            "counts": dict(sorted(self.counts.items())),
            "entries": [e.to_json() for e in self.entries],
        }
        if timing and self.elapsed is not None:
            out["elapsed_s"] = round(self.elapsed, 3)
        return out

    def dumps(self, timing: bool = False) -> str:
        return json.dumps(self.to_json(timing), indent=2, sort_keys=False)

    def summary(self) -> str:
        bad = len(self.failures)
        return f"{self.kind}: {len(self.entries)} checks, {bad} failed"


# ---------------------------------------------------------------------------
# Census
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CellRecord:
    diagram: LeDiagram
    connected: bool
    weakly_connected: bool
    lpm: bool


@dataclass
class CellCensus:
    n_max: int
    k_filter: tuple[int, ...] | None
    cells: list[CellRecord]

    def counts(self) -> dict[str, int]:
        return {
            "cells": len(self.cells),
            "connected": sum(c.connected for c in self.cells),
            "weakly_connected": sum(c.weakly_connected for c in self.cells),
            "lpm": sum(c.lpm for c in self.cells),
        }


def iter_diagrams(n_max: int, k_filter: Iterable[int] | None = None, n_min: int = 0):
    ks = None if k_filter is None else set(k_filter)
    for n in range(n_min, n_max + 1):
        for k in range(0, n + 1):
            if ks is not None and k not in ks:
                continue
            for shape in young_shapes(n, k):
                yield from all_le_diagrams(n, shape)


def enumerate_cells(n_max: int, k_filter: Iterable[int] | None = None, bound: int = MAX_N,
                    n_min: int = 0, classify: bool = True) -> CellCensus:
    """Every Le-diagram with n_min <= n <= n_max (each cell once), with classification flags."""
    if n_max > bound:
        raise InputError(f"n_max={n_max} exceeds the configured bound {bound}")
    cells = []
    seen = set()
    for d in iter_diagrams(n_max, k_filter, n_min):
        key = (d.n, d.shape, d.dots)
        if key in seen:
            continue
        seen.add(key)
        if classify:
            cells.append(CellRecord(d, is_connected(d), is_weakly_connected(d), lpm_bounds(d) is not None))
        else:
            cells.append(CellRecord(d, False, False, lpm_bounds(d) is not None))
    return CellCensus(n_max, None if k_filter is None else tuple(sorted(k_filter)), cells)


def count_decorated_permutations(n: int) -> int:
    """Permutations of [n] weighted by 2^(fixed points), by brute force."""
    from itertools import permutations

    total = 0
    for p in permutations(range(n)):
        fixed = sum(1 for i, x in enumerate(p) if i == x)
        total += 2 ** fixed
    return total


# ---------------------------------------------------------------------------
# Specializations
# ---------------------------------------------------------------------------


def cell_rng(seed: int, d: LeDiagram, salt: str = "") -> random.Random:
    return random.Random(f"{seed}:{salt}:{cell_key(d)}")


def random_weights(symbols: Iterable[str], rng: random.Random) -> dict[str, Fraction]:
    return {s: Fraction(rng.randint(1, SPECIALIZATION_BOUND), rng.randint(1, SPECIALIZATION_BOUND)) for s in symbols}


# ---------------------------------------------------------------------------
# Positroid cross-check
# ---------------------------------------------------------------------------


def cross_check_positroid(diagram: LeDiagram, report: VerificationReport | None = None) -> VerificationReport:
    """Nonzero Plucker set from path families against the positroid of the cell's necklace."""
    report = report or VerificationReport("cross_check_positroid")
    net = build_network(diagram)
    lgv = nonzero_subsets(net)
    neck = decperm_to_necklace(chi(diagram))
    oh = positroid_of_necklace(neck).bases
    ok = lgv == oh
    detail = "" if ok else f"only paths: {sorted(map(sorted, lgv - oh))}; only necklace: {sorted(map(sorted, oh - lgv))}"
    report.add("positroid", ok, cell_key(diagram), detail, {"op": "cross_check_positroid", "diagram": diagram_to_json(diagram)})
    return report


# ---------------------------------------------------------------------------
# Bases
# ---------------------------------------------------------------------------


def verify_basis(basis: Iterable[PluckerIndex], diagram: LeDiagram, net: LeNetwork | None = None,
                 report: VerificationReport | None = None, seed: int = 0, samples: int = 1) -> VerificationReport:
    """Size, unique paths, monomial weights, positive expansions and independence of a basis."""
    report = report or VerificationReport("verify_basis")
    net = net or build_network(diagram)
    basis = sorted(set(basis))
    key = cell_key(diagram)
    repro = {"op": "verify_basis", "diagram": diagram_to_json(diagram), "basis": [str(b) for b in basis]}

    def rep(**extra) -> dict:
        return dict(repro, **extra)

    report.add("cardinality", len(basis) == net.d + 1, key, f"{len(basis)} members, expected {net.d + 1}", rep())
    multi = [b for b in basis if family_count(b, net) != 1]
    unique = report.add("unique_path", not multi, key,
                        "" if not multi else "not unique-path: " + " ".join(map(str, multi)),
                        rep(indices=[str(b) for b in multi]))
    if not unique:
        return report
    members, exps = exponent_matrix(basis, net)
    rank = integer_rank(exps)
    report.add("independence", rank == net.d, key, f"exponent rank {rank} of {net.d}", rep())
    try:
        weights = solve_weights_from_basis(basis, net)
    except BasisError as exc:
        report.add("weights", False, key, str(exc), rep())
        return report
    # substituting the solved weights back must return each basis symbol
    bsyms = tuple(str(m) for m in members)
    back = [m for m in members
            if plucker_poly(m, net).substitute(weights, bsyms) != LaurentPolynomial.variable(str(m), bsyms)]
    report.add("weights", not back, key, "" if not back else "weights do not reproduce " + " ".join(map(str, back)),
               rep(indices=[str(b) for b in back]))
    if back:
        return report
    rng = cell_rng(seed, diagram, "basis")
    points = [random_weights(net.symbols, rng) for _ in range(samples)]
    bad: list[str] = []
    for idx in all_indices(diagram):
        poly = plucker_poly(idx, net)
        if poly.is_zero():
            continue
        expansion = poly.substitute(weights, bsyms)
        if not expansion.terms or any(c <= 0 for c in expansion.terms.values()):
            bad.append(f"{idx}: {expansion}")
            continue
        for pt in points:
            values = {str(m): plucker_poly(m, net).evaluate(pt) for m in members}
            if expansion.evaluate(values) != poly.evaluate(pt):
                bad.append(f"{idx}: specialization mismatch")
                break
    report.add("positive_expansion", not bad, key, "; ".join(bad[:5]), rep(indices=[b.split(":")[0] for b in bad]))
    return report


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------


class MinorOracle:
    """Plucker coordinates as maximal minors of the boundary measurement matrix."""

    def __init__(self, diagram: LeDiagram, net: LeNetwork | None = None):
        self.diagram = diagram
        self.net = net or build_network(diagram)
        self.matrix = boundary_matrix(self.net)
        self._memo: dict[frozenset[int], LaurentPolynomial] = {}

    def __call__(self, idx: PluckerIndex) -> LaurentPolynomial:
        s = plucker_resolve(idx, self.diagram)
        if s not in self._memo:
            self._memo[s] = maximal_minor(self.matrix, s, self.net.symbols)
        return self._memo[s]


def verify_trace(trace: MutationTrace, diagram: LeDiagram, report: VerificationReport | None = None,
                 seed: int = 0, samples: int = 2, minors: MinorOracle | None = None) -> VerificationReport:
    """Replay the trace checking each relation, each zero claim and the state after each step."""
    report = report or VerificationReport("verify_trace")
    minors = minors or MinorOracle(diagram)
    net = minors.net
    key = cell_key(diagram)
    rng = cell_rng(seed, diagram, "trace")
    points = [random_weights(net.symbols, rng) for _ in range(samples)]
    state = set(trace.initial)
    all_ok = True
    for i, step in enumerate(trace.steps):
        problems = _check_step(step, state, minors, points)
        if problems:
            all_ok = False
            report.add("trace_step", False, key, f"step {i}: " + "; ".join(problems),
                       {"op": "verify_trace_step", "diagram": diagram_to_json(diagram), "step_index": i,
                        "state": sorted(str(x) for x in state), "step": step.to_json(),
                        "relation": step.relation.render()})
            break
        state.discard(step.removed)
        state.add(step.added)
    if all_ok:
        report.add("trace", True, key, f"{len(trace.steps)} steps")
    return report


def _check_step(step: MutationStep, state: set[PluckerIndex], minors: MinorOracle,
                points: list[dict[str, Fraction]]) -> list[str]:
    problems = []
    if step.removed not in state:
        problems.append(f"{step.removed} is not in the current state")
    if step.added in state:
        problems.append(f"{step.added} is already in the current state")
    if minors(step.added).is_zero():
        problems.append(f"{step.added} vanishes on the cell")
    h, zero = step.relation.H, step.relation.zero
    if step.removed not in h or step.added not in h:
        problems.append("relation does not involve the exchanged pair")
    for j, z in enumerate(zero):
        if z and not minors(h[j]).is_zero():
            problems.append(f"zero claim on {h[j]} is false")
    lhs = minors(h[0]) * minors(h[1])
    rhs = [minors(h[2]) * minors(h[3]) if not (zero[2] or zero[3]) else None,
           minors(h[4]) * minors(h[5]) if not (zero[4] or zero[5]) else None]
    total = sum((r for r in rhs if r is not None), LaurentPolynomial.constant(0, lhs.symbols))
    symbolic = lhs == total
    if not symbolic:
        problems.append(f"{step.relation.render()} is not an identity")
    for pt in points:
        numeric = lhs.evaluate(pt) == total.evaluate(pt)
        if numeric != symbolic and symbolic:
            problems.append("specialization contradicts the symbolic verdict")
    others = state - {step.removed}
    pair = {step.removed, step.added}
    if pair not in ({h[0], h[1]}, {h[2], h[3]}, {h[4], h[5]}):
        problems.append("exchanged pair is split between products")
    # factors of a vanishing product need not be present
    dead = {j for a, b in ((0, 1), (2, 3), (4, 5)) if zero[a] or zero[b] for j in (a, b)}
    unexplained = [x for j, x in enumerate(h) if x not in pair and j not in dead
                   and x not in others and not x.is_empty()]
    if unexplained:
        problems.append("relation uses indices outside the state: " + " ".join(map(str, unexplained)))
    return problems


def corrupt_step(step: MutationStep) -> MutationStep:
    """Negative control: exchange the roles of H3 and H5 in the relation."""
    h = list(step.relation.H)
    z = list(step.relation.zero)
    h[2], h[4] = h[4], h[2]
    z[2], z[4] = z[4], z[2]
    rel = type(step.relation)(tuple(h), tuple(z))
    return MutationStep(step.kind, step.removed, step.added, rel, step.case, step.note)


# ---------------------------------------------------------------------------
# Scan
# ---------------------------------------------------------------------------


def _scan_cell(args: tuple[dict, int, bool]) -> VerificationReport:
    from .pipeline import PipelineError, full_transform

    data, seed, traces = args
    d = diagram_from_json(data)
    report = VerificationReport("conjecture_scan")
    key = cell_key(d)
    report.counts["cells"] = 1
    if not is_weakly_connected(d):
        report.counts["out_of_scope"] = 1
        return report
    report.counts["weakly_connected"] = 1
    try:
        result = full_transform(d, verify=True)
    except (PipelineError, InputError, AssertionError) as exc:
        report.add("transform", False, key, f"{type(exc).__name__}: {exc}", {"op": "transform", "diagram": data})
        return report
    net = build_network(d)
    verify_basis(result.basis, d, net, report, seed=seed)
    if traces:
        verify_trace(result.trace, d, report, seed=seed, samples=1)
    if all(e.ok for e in report.entries):
        report.counts["passed"] = 1
        report.entries = []
    return report


def conjecture_scan(n_max: int, seed: int = 0, jobs: int = 1, traces: bool = False,
                    bound: int = MAX_N, n_min: int = 0, progress=None) -> VerificationReport:
    """full_transform + verify_basis on each weakly connected cell; other cells are only counted.

    Passing cells are summarized in the counts; only failures keep entries.
    """
    if n_max > bound:
        raise InputError(f"n_max={n_max} exceeds the configured bound {bound}")
    start = time.perf_counter()
    report = VerificationReport("conjecture_scan", {"n_min": n_min, "n_max": n_max, "seed": seed,
                                                    "specialization_bound": SPECIALIZATION_BOUND,
                                                    "traces": traces})
    per_n: dict[int, dict[str, int]] = {}
    work = [(diagram_to_json(d), seed, traces) for d in iter_diagrams(n_max, None, n_min)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_cell, work, chunksize=16))
    else:
        results = [_scan_cell(w) for w in work]
    for w, r in zip(work, results):
        n = w[0]["n"]
        bucket = per_n.setdefault(n, {})
        for k, v in r.counts.items():
            bucket[k] = bucket.get(k, 0) + v
        report.merge(r)
        if progress:
            progress(w, r)
    report.params["per_n"] = {str(n): dict(sorted(c.items())) for n, c in sorted(per_n.items())}
    for k in ("cells", "weakly_connected", "passed", "out_of_scope"):
        report.counts.setdefault(k, 0)
    report.elapsed = time.perf_counter() - start
    return report


# ---------------------------------------------------------------------------
# Reproducers
# ---------------------------------------------------------------------------


def run_reproducer(rep: dict) -> VerificationReport:
    """Re-run the single check that a failure entry describes."""
    op = rep["op"]
    d = diagram_from_json(rep["diagram"])
    if op == "cross_check_positroid":
        return cross_check_positroid(d)
    if op == "verify_basis":
        return verify_basis([PluckerIndex.parse(b) for b in rep["basis"]], d)
    if op == "verify_trace_step":
        step = MutationStep.from_json(rep["step"])
        trace = MutationTrace(frozenset(PluckerIndex.parse(s) for s in rep["state"]))
        trace.steps.append(step)
        return verify_trace(trace, d)
    if op == "transform":
        return _scan_cell((rep["diagram"], 0, False))
    raise InputError(f"unknown reproducer op {op!r}")


def canonical_basis(diagram: LeDiagram) -> frozenset[PluckerIndex]:
    return canonical_tp_diagram(diagram).members | {EMPTY}


__all__ = [
    "CellCensus", "CellRecord", "Entry", "MinorOracle", "SCHEMA_VERSION", "VerificationReport",
    "canonical_basis", "cell_key", "conjecture_scan", "corrupt_step", "count_decorated_permutations",
    "cross_check_positroid", "diagram_from_json", "diagram_to_json", "enumerate_cells", "iter_diagrams",
    "run_reproducer", "verify_basis", "verify_trace",
]
