"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line; the same lines are collected in the
"acceptance criteria" section of the pytest summary.
"""

from __future__ import annotations

import random
import time

import networkx as nx
import pytest

from conftest import cells
from oracles import brute_plucker, d7_tree, positroid_from_necklace
from positroids.cluster import (
    LaurentCheck,
    canonical_seed,
    diagonal_index,
    edge_weight_formula,
    laurent_check,
    lpm_cells,
    lpm_square_sweep,
)
from positroids.core import EMPTY, PluckerIndex, chi, chi_inverse, decperm_to_necklace, necklace_to_decperm
from positroids.fixtures import (
    EXAMPLE_ONE,
    EXAMPLE_ONE_RELATIONS,
    EXAMPLE_TWO,
    EXAMPLE_TWO_RELATIONS,
    ROUND_EXAMPLE,
    ROUND_EXAMPLE_BASIS,
    TOP_CELL_24,
    a7_diagram,
    d7_diagram,
)
from positroids.laurent import LaurentPolynomial
from positroids.network import build_network, nonzero_subsets, plucker_poly_of_subset
from positroids.oracle import conjecture_scan, cross_check_positroid, verify_trace
from positroids.pipeline import direct_target_basis, full_transform
from positroids.plabic import (
    MoveError,
    apply_M1,
    apply_M2_contract,
    apply_M2_split,
    canonical_plabic,
    random_move,
    square_faces,
)
from positroids.tpdiagram import is_weakly_connected, parse_relation


def report(num: int, ok: bool, detail: str) -> None:
    print(f"\ncriterion {num}: {'PASS' if ok else 'FAIL'} ({detail})")


@pytest.mark.criterion(1, "bijection round-trips, n <= 6")
def test_bijection_roundtrips():
    t = time.perf_counter()
    failures = 0
    all_cells = cells(6, 0)
    for d in all_cells:
        dp = chi(d)
        neck = decperm_to_necklace(dp)
        failures += chi_inverse(dp) != d
        failures += necklace_to_decperm(neck) != dp
        failures += decperm_to_necklace(necklace_to_decperm(neck)) != neck
    elapsed = time.perf_counter() - t
    ok = failures == 0 and elapsed < 300
    report(1, ok, f"{len(all_cells)} cells, {failures} failures, {elapsed:.1f}s")
    assert failures == 0
    assert elapsed < 300


@pytest.mark.criterion(2, "nonzero Plucker set equals the necklace positroid, n <= 6")
def test_positroid_consistency():
    failures = 0
    all_cells = cells(6, 0)
    for d in all_cells:
        rep = cross_check_positroid(d)
        failures += not rep.ok
        # independent route: Gale-order definition of the positroid
        net = build_network(d)
        neck = decperm_to_necklace(chi(d))
        nonzero = {frozenset(s) for s in positroid_from_necklace(neck.sets, d.n)}
        failures += nonzero_subsets(net) != nonzero
    report(2, failures == 0, f"{len(all_cells)} cells, {failures} failures")
    assert failures == 0


@pytest.mark.criterion(3, "Gr(2,4) symbolic fixture and the Plucker relation")
def test_gr24_fixture():
    d = TOP_CELL_24
    net = build_network(d)
    f = lambda *j: plucker_poly_of_subset(j, net)
    sym = {s: LaurentPolynomial.variable(s, net.symbols) for s in net.symbols}
    a, b, c, dd = (sym[s] for s in "abcd")
    one = LaurentPolynomial.constant(1, net.symbols)
    want = {(1, 2): one, (2, 3): b, (1, 3): dd, (1, 4): c * dd, (2, 4): a * b + b * c, (3, 4): a * b * dd}
    # the oracle enumerates path families directly; both sides must agree with the frozen values
    def from_oracle(j):
        total = LaurentPolynomial(net.symbols, {})
        for dots, m in brute_plucker(d.shape, set(d.dots), d.n, frozenset(j)).items():
            term = one * m
            for x in dots:
                term = term * sym[net.symbol_of_dot[x]]
            total = total + term
        return total

    oracle_ok = all(from_oracle(j) == p for j, p in want.items())
    values_ok = all(f(*j) == p for j, p in want.items())
    relation_ok = f(1, 3) * f(2, 4) == f(1, 2) * f(3, 4) + f(1, 4) * f(2, 3)
    ok = oracle_ok and values_ok and relation_ok
    report(3, ok, f"oracle={oracle_ok} values={values_ok} relation={relation_ok}")
    assert ok


@pytest.mark.criterion(4, "worked-example traces contain every expected relation")
def test_golden_traces():
    missing = []
    step_failures = 0
    steps = 0
    for d, rels in ((EXAMPLE_ONE, EXAMPLE_ONE_RELATIONS), (EXAMPLE_TWO, EXAMPLE_TWO_RELATIONS)):
        res = full_transform(d, verify=True)
        got = {r.normalized() for r in res.relations()}
        missing += [r for r in rels if parse_relation(r).normalized() not in got]
        rep = verify_trace(res.trace, d)
        step_failures += len(rep.failures)
        steps += len(res.trace.steps)
    ok = not missing and step_failures == 0
    report(4, ok, f"{len(EXAMPLE_ONE_RELATIONS) + len(EXAMPLE_TWO_RELATIONS)} relations, "
                  f"{len(missing)} missing, {steps} steps, {step_failures} step failures")
    assert not missing
    assert step_failures == 0


@pytest.mark.criterion(5, "15-element target basis of the round example")
def test_golden_basis():
    want = {EMPTY if s == "|" else PluckerIndex.parse(s.replace(",", "|")) for s in ROUND_EXAMPLE_BASIS}
    direct = direct_target_basis(ROUND_EXAMPLE)
    via_trace = full_transform(ROUND_EXAMPLE).basis
    ok = len(want) == 15 and direct == want and via_trace == want
    report(5, ok, f"direct={direct == want} transform={via_trace == want}")
    assert ok


@pytest.mark.criterion(6, "transform succeeds on every weakly connected cell, n <= 6")
def test_transform_scan():
    rep = conjecture_scan(6, seed=0, jobs=1, traces=False)
    c = rep.counts
    ok = rep.ok and c["weakly_connected"] == c["passed"] and rep.elapsed < 600
    report(6, ok, f"{c['cells']} cells, {c['weakly_connected']} weakly connected, {c['passed']} passed, "
                  f"{len(rep.failures)} failures, {rep.elapsed:.1f}s")
    assert rep.ok, [e.to_json() for e in rep.failures[:5]]
    assert c["weakly_connected"] == c["passed"]
    assert rep.elapsed < 600


@pytest.mark.criterion(7, "LPM square-move sweep matches the tp-mutation basis, n <= 6")
def test_lpm_cluster_correspondence():
    lpms = lpm_cells(6)
    bad_seed = bad_weight = compared = 0
    for d in lpms:
        seed, steps = lpm_square_sweep(d, check=True)
        target = {EMPTY} | {diagonal_index(d, *x) for x in d.dots}
        if is_weakly_connected(d):
            res = full_transform(d)
            compared += 1
            bad_seed += seed.cluster() != res.basis
            bad_seed += [(s.removed, s.added) for s in steps] != [(s.removed, s.added) for s in res.trace.steps]
        bad_seed += seed.cluster() != target
        net = build_network(d)
        for dot, sym in net.symbol_of_dot.items():
            bad_weight += edge_weight_formula(d, dot, net) != LaurentPolynomial.variable(sym, net.symbols)
    ok = bad_seed == 0 and bad_weight == 0
    report(7, ok, f"{len(lpms)} LPM cells, {compared} compared with a trace, "
                  f"{bad_seed} seed mismatches, {bad_weight} weight mismatches")
    assert ok


@pytest.mark.criterion(8, "random M1-M3 sequences keep the trip permutation")
def test_move_invariance():
    rng = random.Random(20240607)
    pool = cells(6)
    changed = m1 = m2 = moves = 0
    for _ in range(1000):
        d = rng.choice(pool)
        g = canonical_plabic(d)
        dp = chi(d)
        for _ in range(rng.randint(1, 12)):
            r = random_move(g, rng)
            if r is None:
                break
            g, _ = r
            moves += 1
            if g.trip_permutation() != dp:
                changed += 1
                break
        cf = g.canonical_form()
        for i in square_faces(g):
            m1 += apply_M1(apply_M1(g, i), i).canonical_form() != cf
        for e, (a, b) in sorted(g.ends.items()):
            if g.is_boundary(a) or g.is_boundary(b) or g.color[a] != g.color[b]:
                continue
            try:
                h = apply_M2_contract(g, e)
            except MoveError:
                continue
            back, _, _ = apply_M2_split(h, a, len(g.rot[a]) - 1, len(g.rot[b]) - 1)
            m2 += back.canonical_form() != cf
    ok = changed == 0 and m1 == 0 and m2 == 0
    report(8, ok, f"1000 sequences, {moves} moves, {changed} permutation changes, "
                  f"{m1} M1 and {m2} M2 round-trip failures")
    assert ok


@pytest.mark.criterion(9, "A7 and D7 quivers")
def test_finite_type():
    results = {}
    for name, d, want in (("A7", a7_diagram(), nx.path_graph(7)), ("D7", d7_diagram(), d7_tree())):
        seed, _ = canonical_seed(d, symbolic=True)
        results[name] = nx.is_isomorphic(seed.quiver.mutable_graph(), want)
    ok = all(results.values())
    report(9, ok, ", ".join(f"{k}={v}" for k, v in results.items()))
    assert ok


@pytest.mark.criterion(10, "Laurent phenomenon along mutation sequences, n <= 5")
def test_laurent_phenomenon():
    result = LaurentCheck()
    for d in cells(5):
        laurent_check(d, 8, result)
    ok = not result.failures
    report(10, ok, f"{result.cells} cells, {result.sequences} sequences, {result.mutations} mutations, "
                   f"{len(result.failures)} failures")
    assert ok, result.failures[:5]
