from __future__ import annotations

import json

import pytest

from oracles import decorated_permutation_count
from positroids.core import P, InputError
from positroids.fixtures import EXAMPLE_ONE, TOP_CELL_24, WEIRD
from positroids.oracle import (
    MAX_N,
    VerificationReport,
    canonical_basis,
    cell_key,
    conjecture_scan,
    corrupt_step,
    cross_check_positroid,
    diagram_from_json,
    diagram_to_json,
    enumerate_cells,
    run_reproducer,
    verify_basis,
    verify_trace,
)
from positroids.pipeline import full_transform
from positroids.tpdiagram import MutationTrace


def test_census_n2_has_five_cells():
    census = enumerate_cells(2, n_min=2)
    assert len(census.cells) == 5 == decorated_permutation_count(2)


def test_census_totals():
    census = enumerate_cells(5)
    assert census.counts()["cells"] == sum(decorated_permutation_count(n) for n in range(6))


def test_census_filters_and_bound():
    assert all(c.diagram.k == 1 for c in enumerate_cells(4, k_filter=[1]).cells)
    with pytest.raises(InputError):
        enumerate_cells(MAX_N + 1)


def test_diagram_json_roundtrip():
    for d in (TOP_CELL_24, WEIRD, EXAMPLE_ONE):
        assert diagram_from_json(json.loads(json.dumps(diagram_to_json(d)))) == d
    assert cell_key(WEIRD) == "n=4;k=2;.D/DD"


def test_cross_check_positroid():
    assert cross_check_positroid(EXAMPLE_ONE).ok


def test_canonical_basis_of_top_cell_is_not_unique_path():
    rep = verify_basis(canonical_basis(TOP_CELL_24), TOP_CELL_24)
    assert not rep.ok
    bad = {e.check for e in rep.failures}
    assert "unique_path" in bad
    assert any("D[1|1]" in e.detail for e in rep.failures if e.check == "unique_path")


def test_target_basis_of_top_cell_passes():
    res = full_transform(TOP_CELL_24)
    rep = verify_basis(res.basis, TOP_CELL_24)
    assert rep.ok
    assert {"cardinality", "unique_path", "independence", "weights", "positive_expansion"} <= {e.check for e in rep.entries}


def test_wrong_cardinality_fails():
    res = full_transform(TOP_CELL_24)
    rep = verify_basis(set(res.basis) - {P(12, 12)}, TOP_CELL_24)
    assert not rep.ok


@pytest.fixture(scope="module")
def ex1_trace():
    return full_transform(EXAMPLE_ONE).trace


def test_trace_verifies(ex1_trace):
    rep = verify_trace(ex1_trace, EXAMPLE_ONE)
    assert rep.ok and rep.entries


def test_corrupted_step_is_caught_and_reproduced(ex1_trace):
    bad = MutationTrace(ex1_trace.initial)
    for i, s in enumerate(ex1_trace.steps):
        bad.steps.append(corrupt_step(s) if i == 3 else s)
    rep = verify_trace(bad, EXAMPLE_ONE)
    assert not rep.ok
    first = rep.failures[0]
    assert first.detail.startswith("step 3:")
    assert first.reproducer["step_index"] == 3
    again = run_reproducer(json.loads(json.dumps(first.reproducer)))
    assert not again.ok
    assert again.failures[0].check == first.check


def test_report_json_shape():
    rep = VerificationReport("demo")
    rep.add("a", True, "cell")
    rep.add("b", False, "cell", "boom", {"op": "x"})
    data = json.loads(rep.dumps())
    assert data["schema_version"] == 1 and data["ok"] is False
    assert data["entries"][1]["reproducer"] == {"op": "x"}
    assert "elapsed_s" not in data


def test_scan_small_is_green_and_deterministic():
    a = conjecture_scan(4, seed=3, traces=True)
    b = conjecture_scan(4, seed=3, traces=True, jobs=2)
    assert a.ok
    assert a.counts["weakly_connected"] == a.counts["passed"]
    assert a.dumps() == b.dumps()
    with pytest.raises(InputError):
        conjecture_scan(7, bound=6)
