from __future__ import annotations

import pytest

from conftest import cells
from positroids.core import EMPTY, LeDiagram, PluckerIndex
from positroids.fixtures import (
    EXAMPLE_ONE,
    EXAMPLE_ONE_RELATIONS,
    EXAMPLE_TWO,
    EXAMPLE_TWO_RELATIONS,
    NON_IDENTITIES,
    ROUND_EXAMPLE,
    ROUND_EXAMPLE_BASIS,
    TOP_CELL_24,
)
from positroids.network import build_network, is_unique_path
from positroids.pipeline import NotWeaklyConnected, direct_target_basis, full_transform
from positroids.tpdiagram import (
    Cell,
    MutationError,
    MutationTrace,
    canonical_tp_diagram,
    is_weakly_connected,
    mutate,
    parse_relation,
    replay_step,
)


@pytest.fixture(scope="module")
def ex1():
    return full_transform(EXAMPLE_ONE)


def _basis(strings):
    return {EMPTY if s == "|" else PluckerIndex.parse(s.replace(",", "|")) for s in strings}


def test_expected_relations_are_identities():
    for d, rels in ((EXAMPLE_ONE, EXAMPLE_ONE_RELATIONS), (EXAMPLE_TWO, EXAMPLE_TWO_RELATIONS)):
        cell = Cell(d)
        for text in rels:
            assert parse_relation(text).holds(cell), text


def test_non_identities_fail_and_are_not_emitted(ex1):
    cell = Cell(EXAMPLE_ONE)
    emitted = {r.normalized() for r in ex1.relations()}
    for text in NON_IDENTITIES:
        rel = parse_relation(text)
        assert not rel.holds(cell)
        assert rel.normalized() not in emitted


def test_relation_normal_form_is_order_free():
    a = parse_relation("12,14 1,3 = 12,13 1,4")
    b = parse_relation("1,3 12,14 = 1,4 12,13")
    assert a.normalized() == b.normalized()


def test_trace_replays_to_final_basis(ex1):
    assert ex1.trace.replay() | {EMPTY} == ex1.basis
    assert ex1.trace.reversed().replay() == ex1.trace.initial


def test_trace_jsonl_roundtrip(ex1):
    again = MutationTrace.from_jsonl(ex1.trace.initial, ex1.trace.to_jsonl())
    assert [s.to_json() for s in again.steps] == [s.to_json() for s in ex1.trace.steps]


def test_replay_rejects_bad_state(ex1):
    step = ex1.trace.steps[0]
    with pytest.raises(MutationError):
        replay_step(frozenset(), step)


def test_mutate_revalidates_steps(ex1):
    state = canonical_tp_diagram(EXAMPLE_ONE)
    cell = Cell(EXAMPLE_ONE)
    for step in ex1.trace.steps[:5]:
        state = mutate(state, step, cell)
    assert state.basis() == replay_step_chain(ex1.trace.initial, ex1.trace.steps[:5]) | {EMPTY}


def replay_step_chain(state, steps):
    for s in steps:
        state = replay_step(state, s)
    return state


def test_round_example_basis():
    want = _basis(ROUND_EXAMPLE_BASIS)
    assert len(want) == 15
    assert direct_target_basis(ROUND_EXAMPLE) == want
    assert full_transform(ROUND_EXAMPLE).basis == want


def test_final_bases_are_unique_path_at_n4():
    for d in cells(4):
        if not is_weakly_connected(d):
            continue
        res = full_transform(d)
        net = build_network(d)
        assert res.basis == direct_target_basis(d)
        assert all(is_unique_path(i, net) for i in res.basis if not i.is_empty())
        assert len(res.basis) == len(d.dots) + 1


def test_canonical_diagram_of_top_cell():
    assert len(canonical_tp_diagram(TOP_CELL_24).basis()) == 5


def test_not_weakly_connected_is_refused():
    bad = next(d for d in cells(5) if not is_weakly_connected(d))
    with pytest.raises(NotWeaklyConnected):
        full_transform(bad)
