from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cells
from oracles import adjacency_rule, boundary_labels, dot_label
from positroids.core import chi
from positroids.fixtures import TOP_CELL_24, WEIRD
from positroids.plabic import (
    BLACK,
    WHITE,
    MoveError,
    PlabicGraph,
    apply_M1,
    apply_M2_contract,
    apply_M2_split,
    apply_M3_insert,
    apply_M3_remove,
    canonical_plabic,
    dual_quiver,
    face_labels,
    normalize_square,
    random_move,
    square_faces,
)

CELLS6 = cells(6)


def test_trip_permutation_is_chi():
    for d in CELLS6:
        assert canonical_plabic(d).trip_permutation() == chi(d)


def test_face_labels_are_cover_chain_labels():
    for d in cells(5):
        g = canonical_plabic(d)
        rows, _ = boundary_labels(d.shape, d.n)
        want = {frozenset(rows.values())} | {dot_label(d.shape, set(d.dots), d.n, x) for x in d.dots}
        labs = face_labels(g)
        assert len(labs) == len(set(labs)) == len(d.dots) + 1
        assert set(labs) == want


def _raw_adjacency(g: PlabicGraph):
    """Mutable-face adjacency across bicolored edges, before any cancellation."""
    labels = g.face_labels()
    fod = g.face_of_dart
    frozen = {labels[i] for i, f in enumerate(g.faces) if f.is_boundary}
    out = set()
    for e, (a, b) in g.ends.items():
        if g.is_boundary(a) or g.is_boundary(b) or g.color[a] == g.color[b]:
            continue
        x, y = labels[fod[(e, a)]], labels[fod[(e, b)]]
        if x != y and x not in frozen and y not in frozen:
            out.add(frozenset({x, y}))
    return out, frozen


def test_adjacency_rule_matches_dual_graph():
    for d in CELLS6:
        g = canonical_plabic(d)
        raw, frozen = _raw_adjacency(g)
        lab = {x: dot_label(d.shape, set(d.dots), d.n, x) for x in d.dots}
        rule = {frozenset(lab[x] for x in pair) for pair in adjacency_rule(set(d.dots))}
        rule = {p for p in rule if not p & frozen}
        assert rule == raw, d
        # the quiver may only lose adjacencies to 2-cycle cancellation
        q = dual_quiver(g)
        mut = {frozenset({i, j}) for i, j, _ in q.arrows() if i in q.mutable and j in q.mutable}
        assert mut <= raw


def test_dual_quiver_of_top_gr24():
    q = dual_quiver(canonical_plabic(TOP_CELL_24))
    assert len(q.vertices) == 5 and len(q.mutable) == 1
    (m,) = q.mutable
    assert m == frozenset({2, 4})
    assert len(q.in_neighbors(m)) == 2 and len(q.out_neighbors(m)) == 2


def test_json_roundtrip_and_validation():
    for d in (TOP_CELL_24, WEIRD):
        g = canonical_plabic(d)
        h = PlabicGraph.from_json(g.to_json())
        h.validate()
        assert h.canonical_form() == g.canonical_form()
        assert g.to_dot().startswith("graph plabic {")


def test_m1_is_an_involution_and_changes_labels():
    g, _ = normalize_square(canonical_plabic(TOP_CELL_24), {2, 4})
    (i,) = square_faces(g)
    h = apply_M1(g, i)
    assert apply_M1(h, i).canonical_form() == g.canonical_form()
    assert h.trip_permutation() == g.trip_permutation()
    assert set(face_labels(h)) ^ set(face_labels(g)) == {frozenset({2, 4}), frozenset({1, 3})}


def test_m1_refuses_non_square():
    g = canonical_plabic(TOP_CELL_24)
    boundary = next(i for i, f in enumerate(g.faces) if f.is_boundary)
    with pytest.raises(MoveError):
        apply_M1(g, boundary)


def test_normalize_square_keeps_labels():
    d = cells(6, 6)[-1]
    g = canonical_plabic(d)
    labs = set(face_labels(g))
    q = dual_quiver(g)
    for v in q.mutable:
        h, _ = normalize_square(g, v)
        assert set(face_labels(h)) == labs
        assert any(set(face_labels(apply_M1(h, i))) != labs for i in square_faces(h))


@given(st.integers(0, len(CELLS6) - 1), st.integers(0, 2 ** 32 - 1), st.integers(1, 10))
@settings(max_examples=150, deadline=None)
def test_random_moves_preserve_trip_permutation(idx, seed, steps):
    d = CELLS6[idx]
    rng = random.Random(seed)
    g = canonical_plabic(d)
    for _ in range(steps):
        r = random_move(g, rng)
        if r is None:
            break
        g, _ = r
        g.validate()
    assert g.trip_permutation() == chi(d)
    cf = g.canonical_form()
    e = rng.choice(sorted(g.ends))
    h, v = apply_M3_insert(g, e, rng.choice((BLACK, WHITE)))
    assert h.trip_permutation() == chi(d)
    assert apply_M3_remove(h, v).canonical_form() == cf
    for e, (a, b) in sorted(g.ends.items()):
        if g.is_boundary(a) or g.is_boundary(b) or g.color[a] != g.color[b]:
            continue
        try:
            h = apply_M2_contract(g, e)
        except MoveError:
            continue
        back, _, _ = apply_M2_split(h, a, len(g.rot[a]) - 1, len(g.rot[b]) - 1)
        assert back.canonical_form() == cf
        break
