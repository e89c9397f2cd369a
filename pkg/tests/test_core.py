from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cells
from oracles import boundary_labels, decorated_permutation_count, positroid_from_necklace
from positroids.core import (
    DecoratedPermutation,
    GrassmannNecklace,
    InputError,
    LeDiagram,
    LePropertyError,
    P,
    PluckerIndex,
    Positroid,
    chi,
    chi_inverse,
    decperm_to_necklace,
    is_matroid,
    lattice_path_matroid,
    lpm_bounds,
    lpm_le_diagram,
    necklace_of_matroid,
    necklace_to_decperm,
    plucker_index_of,
    plucker_resolve,
    positroid_of_necklace,
)
from positroids.fixtures import TOP_CELL_24, WEIRD


@st.composite
def decorated_permutations(draw, max_n=7):
    n = draw(st.integers(0, max_n))
    perm = tuple(draw(st.permutations(range(1, n + 1))))
    col = {i: draw(st.sampled_from((1, -1))) for i in range(1, n + 1) if perm[i - 1] == i}
    return DecoratedPermutation(perm, col)


def test_census_size_matches_decorated_permutations():
    for n in range(1, 7):
        assert len(cells(n, n)) == decorated_permutation_count(n)


def test_top_cell_gr24_permutation():
    assert chi(TOP_CELL_24).perm == (3, 4, 1, 2)


def test_labels_agree_with_boundary_walk():
    for d in cells(5):
        rows, cols = boundary_labels(d.shape, d.n)
        assert d.row_labels == tuple(rows[r] for r in range(1, d.k + 1))
        assert d.col_labels == tuple(cols[c] for c in range(1, d.ncols + 1))


@given(decorated_permutations())
@settings(max_examples=300, deadline=None)
def test_decperm_roundtrips(dp):
    neck = decperm_to_necklace(dp)
    assert necklace_to_decperm(neck) == dp
    d = chi_inverse(dp)
    assert d.le_violation() is None
    assert chi(d) == dp


def test_necklace_of_positroid_roundtrip():
    for d in cells(5):
        neck = decperm_to_necklace(chi(d))
        m = positroid_of_necklace(neck)
        assert necklace_of_matroid(m) == neck
        assert m.bases == frozenset(positroid_from_necklace(neck.sets, d.n))


def test_le_property_rejected():
    with pytest.raises(LePropertyError):
        LeDiagram(4, (2, 2), frozenset({(1, 2), (2, 1)}))


def test_plucker_index_resolution_is_a_bijection():
    for d in (TOP_CELL_24, WEIRD):
        seen = set()
        for j in itertools.combinations(range(1, d.n + 1), d.k):
            idx = plucker_index_of(j, d)
            assert plucker_resolve(idx, d) == frozenset(j)
            seen.add(idx)
        assert len(seen) == 6


def test_plucker_index_parse():
    assert PluckerIndex.parse("D[13|12]") == P(13, 12)
    assert PluckerIndex.parse("1,3|1,2") == P(13, 12)
    assert PluckerIndex.parse("|").is_empty
    with pytest.raises(InputError):
        PluckerIndex.parse("13")


def test_matroid_exchange_axiom():
    good = [frozenset(s) for s in ({1, 2}, {1, 3}, {2, 3})]
    bad = [frozenset(s) for s in ({1, 2}, {3, 4})]
    assert is_matroid(good, 3)
    assert not is_matroid(bad, 4)


def test_necklace_validation():
    with pytest.raises(InputError):
        GrassmannNecklace(3, (frozenset({2}), frozenset({3}), frozenset({3})))


def test_lattice_path_matroid_cells():
    for n in range(2, 6):
        for k in range(1, n):
            for i_set in itertools.combinations(range(1, n + 1), k):
                for j_set in itertools.combinations(range(1, n + 1), k):
                    try:
                        m = lattice_path_matroid(i_set, j_set, n)
                    except InputError:
                        continue
                    d = lpm_le_diagram(i_set, j_set, n)
                    assert lpm_bounds(d) == (frozenset(i_set), frozenset(j_set))
                    assert positroid_of_necklace(decperm_to_necklace(chi(d))).bases == m.bases
