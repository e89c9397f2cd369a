from __future__ import annotations

import itertools
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cells
from oracles import brute_plucker
from positroids.core import EMPTY, P, chi, decperm_to_necklace, positroid_of_necklace
from positroids.fixtures import TOP_CELL_24, WEIRD
from positroids.laurent import DivisionError, LaurentPolynomial
from positroids.network import (
    BasisError,
    boundary_matrix,
    build_network,
    expand_in_basis,
    is_unique_path,
    maximal_minor,
    nonzero_subsets,
    plucker_poly,
    plucker_poly_of_subset,
    solve_weights_from_basis,
    three_term_relations,
)

# path-family counts of the 2x2 top cell, from the brute-force oracle (dots are (row, col))
GR24 = {
    (1, 2): {(): 1},
    (2, 3): {((1, 2),): 1},
    (1, 3): {((2, 2),): 1},
    (1, 4): {((2, 1), (2, 2)): 1},
    (2, 4): {((1, 1), (1, 2)): 1, ((1, 2), (2, 1)): 1},
    (3, 4): {((1, 1), (1, 2), (2, 2)): 1},
}


def _as_terms(counter: Counter, net) -> dict:
    sym = net.symbol_of_dot
    out = {}
    for dots, m in counter.items():
        e = [0] * net.d
        for dot in dots:
            e[net.symbols.index(sym[dot])] += 1
        out[tuple(e)] = m
    return out


def test_gr24_oracle_values_are_frozen():
    d = TOP_CELL_24
    for j, want in GR24.items():
        assert dict(brute_plucker(d.shape, set(d.dots), d.n, frozenset(j))) == want


def test_gr24_symbolic_values():
    net = build_network(TOP_CELL_24)
    assert net.symbol_of_dot == {(1, 1): "a", (1, 2): "b", (2, 1): "c", (2, 2): "d"}
    got = {j: str(plucker_poly_of_subset(j, net)) for j in GR24}
    assert got == {(1, 2): "1", (2, 3): "b", (1, 3): "d", (1, 4): "c*d", (2, 4): "a*b + b*c", (3, 4): "a*b*d"}


def test_path_sums_match_brute_force():
    for d in cells(4):
        net = build_network(d)
        for j in itertools.combinations(range(1, d.n + 1), d.k):
            want = _as_terms(brute_plucker(d.shape, set(d.dots), d.n, frozenset(j)), net)
            assert plucker_poly_of_subset(j, net).terms == want, (d, j)


def test_minors_of_boundary_matrix_match_path_sums():
    for d in cells(5):
        net = build_network(d)
        a = boundary_matrix(net)
        for j in itertools.combinations(range(1, d.n + 1), d.k):
            assert maximal_minor(a, j, net.symbols) == plucker_poly_of_subset(j, net)


def test_three_term_relations_hold():
    for d in cells(6, 4):
        net = build_network(d)
        f = lambda s: plucker_poly_of_subset(s, net)
        for s, (w, x, y, z) in three_term_relations(d):
            lhs = f(s | {w, y}) * f(s | {x, z})
            rhs = f(s | {w, x}) * f(s | {y, z}) + f(s | {w, z}) * f(s | {x, y})
            assert lhs == rhs


def test_nonzero_pattern_is_the_positroid():
    for d in cells(5):
        net = build_network(d)
        neck = decperm_to_necklace(chi(d))
        assert nonzero_subsets(net) == positroid_of_necklace(neck).bases


def test_unique_path_and_weights():
    net = build_network(TOP_CELL_24)
    basis = [EMPTY, P(1, 1), P(1, 2), P(2, 1), P(2, 2)]
    assert not is_unique_path(P(1, 1), net)
    with pytest.raises(BasisError):
        solve_weights_from_basis(basis, net)
    good = [EMPTY, P(1, 2), P(2, 1), P(2, 2), P(12, 12)]
    w = solve_weights_from_basis(good, net)
    assert all(v.is_monomial() for v in w.values())
    e = expand_in_basis(P(1, 1), good, net, w)
    assert e.is_subtraction_free() and len(e.terms) == 2


def test_weird_cell_has_zero_minor():
    net = build_network(WEIRD)
    zeros = [j for j in itertools.combinations(range(1, 5), 2) if plucker_poly_of_subset(j, net).is_zero()]
    assert len(zeros) == 1


_symbols = ("x", "y", "z")
_polys = st.dictionaries(st.tuples(*(st.integers(-2, 3) for _ in _symbols)), st.integers(-4, 4),
                         max_size=4).map(lambda t: LaurentPolynomial(_symbols, t))


@given(_polys, _polys)
@settings(max_examples=200, deadline=None)
def test_laurent_exact_division_inverts_multiplication(p, q):
    if q.is_zero():
        return
    assert (p * q).exact_div(q) == p


def test_laurent_division_remainder():
    x = LaurentPolynomial.variable("x", ("x", "y"))
    y = LaurentPolynomial.variable("y", ("x", "y"))
    with pytest.raises(DivisionError):
        (x * x + y).exact_div(x + y)
    assert ((x + y) * (x - y)).exact_div(x - y) == x + y
