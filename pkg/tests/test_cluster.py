from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cells
from positroids.cluster import (
    FrozenVertexError,
    LaurentCheck,
    Quiver,
    canonical_seed,
    diagonal_index,
    edge_weight_formula,
    initial_seed,
    laurent_check,
    lpm_cells,
    lpm_square_sweep,
    nw_corner,
    seed_mutate,
    seeds_equal,
)
from positroids.core import EMPTY, InputError, LeDiagram, lpm_bounds
from positroids.fixtures import TOP_CELL_24, WEIRD
from positroids.laurent import LaurentPolynomial
from positroids.network import build_network, plucker_poly
from positroids.pipeline import full_transform
from positroids.tpdiagram import is_weakly_connected


@st.composite
def quivers(draw):
    n = draw(st.integers(1, 6))
    frozen = {v for v in range(n) if draw(st.booleans())}
    arrows = {}
    for i, j in itertools.combinations(range(n), 2):
        if i in frozen and j in frozen:
            continue
        m = draw(st.integers(-2, 2))
        if m > 0:
            arrows[(i, j)] = m
        elif m < 0:
            arrows[(j, i)] = -m
    return Quiver.from_arrows(range(n), frozen, arrows)


@given(quivers(), st.data())
@settings(max_examples=200, deadline=None)
def test_quiver_mutation_is_an_involution(q, data):
    if not q.mutable:
        return
    k = data.draw(st.sampled_from(sorted(q.mutable)))
    assert q.mutate(k).mutate(k) == q
    assert all(q.mutate(k).entry(i, j) == -q.mutate(k).entry(j, i) for i in q.vertices for j in q.vertices)


@given(quivers(), st.data())
@settings(max_examples=100, deadline=None)
def test_seed_mutation_is_an_involution(q, data):
    if not q.mutable:
        return
    k = data.draw(st.sampled_from(sorted(q.mutable)))
    s = initial_seed(q)
    assert seeds_equal(seed_mutate(seed_mutate(s, k), k), s)


def test_frozen_vertex_cannot_mutate():
    q = Quiver.from_arrows([0, 1], [1], {(0, 1): 1})
    with pytest.raises(FrozenVertexError):
        q.mutate(1)


def test_two_cycles_cancel():
    q = Quiver.from_arrows([0, 1], [], {(0, 1): 2, (1, 0): 1})
    assert q.arrows() == [(0, 1, 1)]


def test_a2_pentagon():
    s, _ = canonical_seed(LeDiagram(5, (3, 3), frozenset(itertools.product((1, 2), (1, 2, 3)))), symbolic=True)
    a, b = sorted(s.quiver.mutable, key=sorted)
    start = dict(s.variables)
    seen = []
    cur = s
    for step in range(10):
        cur = seed_mutate(cur, (a, b)[step % 2])
        seen.append(frozenset(str(p) for p in cur.variables.values()))
    assert seen[-1] == frozenset(str(p) for p in start.values())
    assert len(set(seen[:5])) == 5


def test_exchange_variable_is_laurent_in_gr24():
    s, _ = canonical_seed(TOP_CELL_24, symbolic=True)
    (m,) = s.quiver.mutable
    t = seed_mutate(s, m)
    assert t.variables[m].is_subtraction_free() and len(t.variables[m].terms) == 2


def test_canonical_seed_values_are_path_sums():
    net = build_network(WEIRD)
    s, _ = canonical_seed(WEIRD, net)
    for v, p in s.variables.items():
        assert p == plucker_poly(s.tags[v], net)


def test_nw_corner_and_diagonals():
    d = TOP_CELL_24
    assert nw_corner(d) == (1, 1)
    assert diagonal_index(d, 1, 1).X == (1, 2) and diagonal_index(d, 1, 1).Y == (1, 2)
    assert diagonal_index(WEIRD, 1, 1) is None


def test_sweep_rejects_non_lpm():
    d = next(c for c in cells(4) if c.dots and lpm_bounds(c) is None)
    with pytest.raises(InputError):
        lpm_square_sweep(d)


def test_sweep_agrees_with_transform_at_n5():
    for d in lpm_cells(5):
        seed, steps = lpm_square_sweep(d)
        want = {EMPTY} | {diagonal_index(d, *x) for x in d.dots}
        assert seed.cluster() == want
        if is_weakly_connected(d):
            res = full_transform(d)
            assert [(s.removed, s.added) for s in res.trace.steps] == [(s.removed, s.added) for s in steps]
            assert res.basis == want


def test_edge_weight_formula_at_n5():
    for d in lpm_cells(5):
        net = build_network(d)
        for dot, sym in net.symbol_of_dot.items():
            assert edge_weight_formula(d, dot, net) == LaurentPolynomial.variable(sym, net.symbols)


def test_laurent_check_counts_gr25():
    d = LeDiagram(5, (3, 3), frozenset(itertools.product((1, 2), (1, 2, 3))))
    r = laurent_check(d, 8, LaurentCheck())
    assert r.failures == []
    assert r.sequences == 1 + 2 * 8
