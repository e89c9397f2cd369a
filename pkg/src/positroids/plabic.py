"""Plabic graphs as rotation systems.

Boundary vertices are 1..n and sit clockwise on the disk; every boundary
vertex has exactly one edge.  Interior vertices are colored "B" or "W" and
store their incident edge ids in counterclockwise order.  Faces are never
stored; they are traced from the rotation system on demand.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .core import DecoratedPermutation, InputError, LeDiagram, PluckerIndex, plucker_index_of

BLACK, WHITE = "B", "W"


class MoveError(ValueError):
    """A move's precondition does not hold; the message names the element."""


Dart = tuple[int, int]  # (edge id, tail vertex)


@dataclass(frozen=True)
class Face:
    darts: tuple[Dart, ...]
    arcs: tuple[int, ...]  # boundary vertices i such that the arc (i-1, i) lies on this face

    @property
    def is_boundary(self) -> bool:
        return bool(self.arcs)


@dataclass
class PlabicGraph:
    n: int
    color: dict[int, str]
    ends: dict[int, tuple[int, int]]
    rot: dict[int, list[int]]
    next_id: int = 0

    def __post_init__(self) -> None:
        if not self.next_id:
            self.next_id = max(list(self.color) + list(self.ends) + [self.n]) + 1

    # -- basic structure ---------------------------------------------------

    def copy(self) -> "PlabicGraph":
        return PlabicGraph(self.n, dict(self.color), dict(self.ends), {v: list(es) for v, es in self.rot.items()},
                           self.next_id)

    def fresh(self) -> int:
        self.next_id += 1
        return self.next_id - 1

    def is_boundary(self, v: int) -> bool:
        return 1 <= v <= self.n

    def interior(self) -> list[int]:
        return sorted(self.color)

    def degree(self, v: int) -> int:
        return len(self.rot[v])

    def other(self, e: int, v: int) -> int:
        a, b = self.ends[e]
        return b if a == v else a

    def validate(self) -> None:
        for i in range(1, self.n + 1):
            if len(self.rot.get(i, [])) != 1:
                raise InputError(f"boundary vertex {i} must have degree 1")
        for v, es in self.rot.items():
            for e in es:
                if v not in self.ends[e]:
                    raise InputError(f"rotation of {v} lists edge {e} that does not touch it")
        for e, (a, b) in self.ends.items():
            if a == b:
                raise InputError(f"edge {e} is a loop")
            if self.rot[a].count(e) != 1 or self.rot[b].count(e) != 1:
                raise InputError(f"edge {e} is not listed once at each end")

    # -- traversals ----------------------------------------------------------

    def _face_step(self, dart: Dart) -> tuple[Dart, int | None]:
        e, tail = dart
        head = self.other(e, tail)
        if self.is_boundary(head):
            prev = self.n if head == 1 else head - 1
            (e2,) = self.rot[prev]
            return (e2, prev), head
        es = self.rot[head]
        e2 = es[(es.index(e) - 1) % len(es)]
        return (e2, head), None

    @cached_property
    def faces(self) -> list[Face]:
        """Interior faces; each dart lies on exactly one face (the face on its left)."""
        seen: set[Dart] = set()
        out = []
        for e in sorted(self.ends):
            for tail in self.ends[e]:
                start = (e, tail)
                if start in seen:
                    continue
                darts, arcs = [], []
                d = start
                while d not in seen:
                    seen.add(d)
                    darts.append(d)
                    d, arc = self._face_step(d)
                    if arc is not None:
                        arcs.append(arc)
                out.append(Face(tuple(darts), tuple(sorted(arcs))))
        return out

    @cached_property
    def face_of_dart(self) -> dict[Dart, int]:
        return {d: i for i, f in enumerate(self.faces) for d in f.darts}

    def trip(self, i: int) -> tuple[int, list[Dart]]:
        (e,) = self.rot[i]
        dart = (e, i)
        path = [dart]
        while True:
            e, tail = dart
            head = self.other(e, tail)
            if self.is_boundary(head):
                return head, path
            es = self.rot[head]
            idx = es.index(e)
            step = 1 if self.color[head] == BLACK else -1
            e2 = es[(idx + step) % len(es)]
            dart = (e2, head)
            path.append(dart)
            if len(path) > 4 * len(self.ends) + 4:
                raise InputError("trip does not terminate: malformed rotation system")

    def lollipop_color(self, i: int) -> str | None:
        """Color of the leaf at the end of a stem from boundary vertex i, if the stem ends in one."""
        (e,) = self.rot[i]
        prev, v = i, self.other(e, i)
        while not self.is_boundary(v) and self.degree(v) == 2:
            e = next(f for f in self.rot[v] if f != e)
            prev, v = v, self.other(e, v)
        if not self.is_boundary(v) and self.degree(v) == 1:
            return self.color[v]
        return None

    def trip_permutation(self) -> DecoratedPermutation:
        perm, col = [], {}
        for i in range(1, self.n + 1):
            j, _ = self.trip(i)
            perm.append(j)
            if j == i:
                lc = self.lollipop_color(i)
                if lc is None:
                    raise InputError(f"trip from {i} returns without a lollipop")
                col[i] = -1 if lc == WHITE else 1
        return DecoratedPermutation(tuple(perm), col)

    def face_labels(self) -> list[frozenset[int]]:
        """For each face, the ends of the trips that have the face on their left."""
        faces = self.faces
        labels: list[set[int]] = [set() for _ in faces]
        fod = self.face_of_dart
        for i in range(1, self.n + 1):
            j, path = self.trip(i)
            if j == i and self.lollipop_color(i) is not None:
                if self.lollipop_color(i) == WHITE:
                    for lab in labels:
                        lab.add(i)
                continue
            trip_edges = {e for e, _ in path}
            region = {fod[d] for d in path}
            stack = list(region)
            while stack:
                f = stack.pop()
                for (e, tail) in faces[f].darts:
                    if e in trip_edges:
                        continue
                    g = fod[(e, self.other(e, tail))]
                    if g not in region:
                        region.add(g)
                        stack.append(g)
            for f in region:
                labels[f].add(j)
        return [frozenset(s) for s in labels]

    # -- quiver --------------------------------------------------------------

    def dual_quiver(self, labels: list[frozenset[int]] | None = None) -> "Quiver":
        """Arrows cross bicolored edges, with white on the left of the crossing arrow."""
        from .cluster import Quiver

        if labels is None:
            labels = self.face_labels()
        if len(set(labels)) != len(labels):
            raise InputError("face labels are not distinct; the graph is not reduced")
        fod = self.face_of_dart
        frozen = {labels[i] for i, f in enumerate(self.faces) if f.is_boundary}
        arrows: dict[tuple[frozenset, frozenset], int] = {}
        for e, (a, b) in self.ends.items():
            if self.is_boundary(a) or self.is_boundary(b):
                continue
            ca, cb = self.color[a], self.color[b]
            if ca == cb:
                continue
            w, bl = (a, b) if ca == WHITE else (b, a)
            # face left of w->b is the source, face left of b->w the target
            src, dst = labels[fod[(e, w)]], labels[fod[(e, bl)]]
            if src == dst:
                continue
            arrows[(src, dst)] = arrows.get((src, dst), 0) + 1
        return Quiver.from_arrows(set(labels), frozen, arrows)

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "boundary": list(range(1, self.n + 1)),
            "vertices": [{"id": v, "color": self.color[v], "rotation": self.rot[v]} for v in self.interior()],
            "edges": [{"id": e, "ends": list(self.ends[e])} for e in sorted(self.ends)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PlabicGraph":
        n = data["n"]
        ends = {int(d["id"]): tuple(d["ends"]) for d in data["edges"]}
        color = {int(d["id"]): d["color"] for d in data["vertices"]}
        rot = {int(d["id"]): list(d["rotation"]) for d in data["vertices"]}
        for e, (a, b) in ends.items():
            for v in (a, b):
                if 1 <= v <= n:
                    rot.setdefault(v, []).append(e)
        g = cls(n, color, ends, rot)
        g.validate()
        return g

    def to_dot(self) -> str:
        lines = ["graph plabic {"]
        for i in range(1, self.n + 1):
            lines.append(f'  {i} [shape=plaintext, label="{i}"];')
        for v in self.interior():
            fill = "black" if self.color[v] == BLACK else "white"
            lines.append(f"  {v} [shape=circle, style=filled, fillcolor={fill}, label=\"\"];")
        for e in sorted(self.ends):
            a, b = self.ends[e]
            lines.append(f"  {a} -- {b};")
        lines.append("}")
        return "\n".join(lines)

    def canonical_form(self) -> str:
        """Relabel vertices and edges by a traversal from the boundary; equal iff isomorphic as embedded graphs."""
        vmap: dict[int, int] = {i: i for i in range(1, self.n + 1)}
        emap: dict[int, int] = {}
        queue: list[tuple[int, int]] = []  # (vertex, edge it was entered by)
        for i in range(1, self.n + 1):
            (e,) = self.rot[i]
            queue.append((i, e))
        k = 0
        while k < len(queue):
            v, via = queue[k]
            k += 1
            es = self.rot[v]
            start = es.index(via)
            for e in es[start:] + es[:start]:
                if e not in emap:
                    emap[e] = len(emap)
                    w = self.other(e, v)
                    if w not in vmap:
                        vmap[w] = self.n + 1 + len(vmap) - self.n
                        queue.append((w, e))
        rows = []
        for v in sorted(self.color, key=lambda x: vmap.get(x, -1)):
            if v not in vmap:
                continue
            es = self.rot[v]
            tags = [emap[e] for e in es]
            m = tags.index(min(tags))
            rows.append((vmap[v], self.color[v], tuple(tags[m:] + tags[:m])))
        edges = sorted(tuple(sorted((vmap[a], vmap[b]))) + (emap[e],) for e, (a, b) in self.ends.items())
        return json.dumps({"n": self.n, "v": rows, "e": edges})


# ---------------------------------------------------------------------------
# Construction from a Le-diagram
# ---------------------------------------------------------------------------


def face_labels(g: PlabicGraph) -> list[frozenset[int]]:
    return g.face_labels()


def dual_quiver(g: PlabicGraph, labels: list[frozenset[int]] | None = None) -> "Quiver":
    return g.dual_quiver(labels)


def canonical_plabic(diagram: LeDiagram) -> PlabicGraph:
    """Each dot becomes a black vertex (NE) and a white vertex (SW) joined by an edge.

    The black vertex takes the row line from the east and the column line from
    the north; the white vertex continues the row to the west and the column to
    the south.  Empty rows get white lollipops, empty columns black ones.
    """
    n = diagram.n
    color: dict[int, str] = {}
    ends: dict[int, tuple[int, int]] = {}
    slots: dict[int, dict[str, int]] = {}
    nid = [n + 1]
    eid = [0]

    def vertex(c: str) -> int:
        v = nid[0]
        nid[0] += 1
        color[v] = c
        slots[v] = {}
        return v

    def edge(a: int, sa: str | None, b: int, sb: str | None) -> None:
        e = eid[0]
        eid[0] += 1
        ends[e] = (a, b)
        if sa is not None:
            slots[a][sa] = e
        if sb is not None:
            slots[b][sb] = e

    black: dict[tuple[int, int], int] = {}
    white: dict[tuple[int, int], int] = {}
    for dot in diagram.sorted_dots():
        b, w = vertex(BLACK), vertex(WHITE)
        black[dot], white[dot] = b, w
        edge(b, "link", w, "link")
    boundary_edge: dict[int, int] = {}
    rows, cols = diagram.row_labels, diagram.col_labels
    for r in range(1, diagram.k + 1):
        cs = sorted(diagram.dots_in_row(r), reverse=True)
        label = rows[r - 1]
        if not cs:
            v = vertex(WHITE)
            edge(label, None, v, "stem")
            continue
        edge(label, None, black[(r, cs[0])], "E")
        for right, left in zip(cs, cs[1:]):
            edge(white[(r, right)], "W", black[(r, left)], "E")
    for c in range(1, diagram.ncols + 1):
        rs = sorted(diagram.dots_in_col(c))
        label = cols[c - 1]
        if not rs:
            v = vertex(BLACK)
            edge(label, None, v, "stem")
            continue
        for up, down in zip(rs, rs[1:]):
            edge(white[(up, c)], "S", black[(down, c)], "N")
        edge(white[(rs[-1], c)], "S", label, None)
    order = {BLACK: ("E", "N", "link"), WHITE: ("link", "W", "S")}
    rot: dict[int, list[int]] = {}
    for v, c in color.items():
        if "stem" in slots[v]:
            rot[v] = [slots[v]["stem"]]
        else:
            rot[v] = [slots[v][s] for s in order[c] if s in slots[v]]
    for e, (a, b) in ends.items():
        for v in (a, b):
            if 1 <= v <= n:
                rot[v] = [e]
    g = PlabicGraph(n, color, ends, rot)
    g.validate()
    return g


def face_indices(g: PlabicGraph, diagram: LeDiagram) -> dict[frozenset[int], PluckerIndex]:
    """Face label subsets translated into Plucker indices of the diagram's shape."""
    return {lab: plucker_index_of(lab, diagram) for lab in g.face_labels()}


# ---------------------------------------------------------------------------
# Moves
# ---------------------------------------------------------------------------


def square_faces(g: PlabicGraph) -> list[int]:
    """Faces bounded by four trivalent interior vertices of alternating colors."""
    out = []
    for i, f in enumerate(g.faces):
        if f.is_boundary or len(f.darts) != 4:
            continue
        vs = [tail for _, tail in f.darts]
        if len(set(vs)) != 4 or any(g.is_boundary(v) or g.degree(v) != 3 for v in vs):
            continue
        cs = [g.color[v] for v in vs]
        if all(cs[j] != cs[(j + 1) % 4] for j in range(4)):
            out.append(i)
    return out


def _face_index(g: PlabicGraph, face) -> int:
    if isinstance(face, int):
        return face
    labels = g.face_labels()
    try:
        return labels.index(frozenset(face))
    except ValueError:
        raise MoveError(f"no face labeled {sorted(face)}") from None


def apply_M1(g: PlabicGraph, face) -> PlabicGraph:
    """Square move: swap the colors around an alternating quadrilateral of trivalent vertices."""
    i = _face_index(g, face)
    if i not in square_faces(g):
        raise MoveError(f"face {i} is not an alternating square of trivalent vertices")
    h = g.copy()
    for _, v in g.faces[i].darts:
        h.color[v] = WHITE if g.color[v] == BLACK else BLACK
    return h


def apply_M2_contract(g: PlabicGraph, e: int) -> PlabicGraph:
    """Contract an edge joining two interior vertices of the same color; the first end survives."""
    if e not in g.ends:
        raise MoveError(f"no edge {e}")
    u, v = g.ends[e]
    if g.is_boundary(u) or g.is_boundary(v) or g.color[u] != g.color[v]:
        raise MoveError(f"edge {e} does not join two interior vertices of one color")
    if any(set(g.ends[f]) == {u, v} for f in g.ends if f != e):
        raise MoveError(f"edge {e} has a parallel edge")
    h = g.copy()
    ru, rv = h.rot[u], h.rot[v]
    iu, iv = ru.index(e), rv.index(e)
    merged = ru[iu + 1:] + ru[:iu] + rv[iv + 1:] + rv[:iv]
    h.rot[u] = merged
    del h.rot[v], h.color[v], h.ends[e]
    for f in list(h.ends):
        a, b = h.ends[f]
        h.ends[f] = (u if a == v else a, u if b == v else b)
    return h


def apply_M2_split(g: PlabicGraph, v: int, start: int, length: int) -> tuple[PlabicGraph, int, int]:
    """Split v: the ``length`` edges starting at rotation position ``start`` move to a new vertex.

    Returns (graph, new vertex, new edge).
    """
    if g.is_boundary(v) or v not in g.color:
        raise MoveError(f"{v} is not an interior vertex")
    d = g.degree(v)
    if not 0 <= length <= d:
        raise MoveError(f"split of {v} cannot move {length} of {d} edges")
    h = g.copy()
    es = h.rot[v]
    moved = [es[(start + j) % d] for j in range(length)]
    kept = [es[(start + length + j) % d] for j in range(d - length)]
    w = h.fresh()
    e = h.fresh()
    h.color[w] = g.color[v]
    h.ends[e] = (v, w)
    h.rot[v] = kept + [e]
    h.rot[w] = moved + [e]
    for f in moved:
        a, b = h.ends[f]
        h.ends[f] = (w if a == v else a, w if b == v else b)
    return h, w, e


def apply_M3_insert(g: PlabicGraph, e: int, color: str) -> tuple[PlabicGraph, int]:
    """Insert a degree-2 vertex of the given color in the middle of edge e."""
    if e not in g.ends:
        raise MoveError(f"no edge {e}")
    h = g.copy()
    a, b = h.ends[e]
    v = h.fresh()
    e2 = h.fresh()
    h.color[v] = color
    h.ends[e] = (a, v)
    h.ends[e2] = (v, b)
    h.rot[b] = [e2 if f == e else f for f in h.rot[b]]
    h.rot[v] = [e, e2]
    return h, v


def apply_M3_remove(g: PlabicGraph, v: int) -> PlabicGraph:
    """Remove a degree-2 interior vertex, merging its two edges."""
    if g.is_boundary(v) or v not in g.color or g.degree(v) != 2:
        raise MoveError(f"{v} is not an interior vertex of degree 2")
    e1, e2 = g.rot[v]
    a, b = g.other(e1, v), g.other(e2, v)
    if a == b:
        raise MoveError(f"removing {v} would create a loop")
    h = g.copy()
    h.ends[e1] = (a, b)
    h.rot[b] = [e1 if f == e2 else f for f in h.rot[b]]
    del h.ends[e2], h.rot[v], h.color[v]
    return h


def apply_M2(g: PlabicGraph, e: int) -> PlabicGraph:
    return apply_M2_contract(g, e)


def apply_M3(g: PlabicGraph, target: int, color: str | None = None) -> PlabicGraph:
    """Insert into edge ``target`` when a color is given, else remove vertex ``target``."""
    if color is not None:
        return apply_M3_insert(g, target, color)[0]
    return apply_M3_remove(g, target)


@dataclass
class Move:
    kind: str
    args: tuple

    def to_json(self) -> dict:
        return {"move": self.kind, "args": list(self.args)}


def random_move(g: PlabicGraph, rng: random.Random) -> tuple[PlabicGraph, Move] | None:
    """Apply one uniformly chosen applicable move (M1, M2 contract/split, M3 insert/remove)."""
    options: list[tuple[str, tuple]] = []
    for i in square_faces(g):
        options.append(("M1", (i,)))
    for e, (a, b) in g.ends.items():
        if not g.is_boundary(a) and not g.is_boundary(b) and g.color[a] == g.color[b]:
            if not any(set(g.ends[f]) == {a, b} for f in g.ends if f != e):
                options.append(("M2c", (e,)))
    for v in g.interior():
        d = g.degree(v)
        if d >= 4:
            options.append(("M2s", (v, rng.randrange(d), rng.randrange(2, d - 1))))
        if d == 2 and g.other(g.rot[v][0], v) != g.other(g.rot[v][1], v):
            options.append(("M3r", (v,)))
    inserts = len([e for e in g.ends])
    if inserts and len(g.color) < 6 * g.n + 40:
        e = rng.choice(sorted(g.ends))
        options.append(("M3i", (e, rng.choice((BLACK, WHITE)))))
    if not options:
        return None
    kind, args = rng.choice(options)
    if kind == "M1":
        return apply_M1(g, args[0]), Move(kind, args)
    if kind == "M2c":
        return apply_M2_contract(g, args[0]), Move(kind, args)
    if kind == "M2s":
        h, _, _ = apply_M2_split(g, *args)
        return h, Move(kind, args)
    if kind == "M3r":
        return apply_M3_remove(g, args[0]), Move(kind, args)
    h, _ = apply_M3_insert(g, *args)
    return h, Move(kind, args)


def normalize_square(g: PlabicGraph, label: Iterable[int]) -> tuple[PlabicGraph, list[Move]]:
    """Turn the face with this label into an alternating square of trivalent vertices.

    Uses M3 removals of degree-2 vertices, M2 contractions of unicolored
    edges and M2 splits that peel extra edges off the corners.  The face set
    and its labels are unchanged.
    """
    label = frozenset(label)
    moves: list[Move] = []
    for _ in range(200):
        i = _face_index(g, label)
        f = g.faces[i]
        if f.is_boundary:
            raise MoveError(f"face {sorted(label)} touches the boundary")
        vs = [tail for _, tail in f.darts]
        changed = False
        for v in vs:
            if g.degree(v) == 2 and g.other(g.rot[v][0], v) != g.other(g.rot[v][1], v):
                g = apply_M3_remove(g, v)
                moves.append(Move("M3r", (v,)))
                changed = True
                break
        if changed:
            continue
        for e, tail in f.darts:
            head = g.other(e, tail)
            if g.color.get(tail) == g.color.get(head) and tail != head:
                try:
                    g = apply_M2_contract(g, e)
                except MoveError:
                    continue
                moves.append(Move("M2c", (e,)))
                changed = True
                break
        if changed:
            continue
        if len(f.darts) != 4:
            raise MoveError(f"face {sorted(label)} has {len(f.darts)} sides after contraction")
        for j, (e_out, v) in enumerate(f.darts):
            e_in = f.darts[j - 1][0]
            if g.degree(v) > 3:
                es = g.rot[v]
                # keep the two face edges (consecutive in rotation) and peel the rest
                k = es.index(e_in)
                rest_start = (k + 1) % len(es)
                if es[rest_start] == e_out:
                    raise MoveError("unexpected rotation around a face corner")
                g, w, _ = apply_M2_split(g, v, rest_start, len(es) - 2)
                moves.append(Move("M2s", (v, rest_start, len(es) - 2)))
                changed = True
                break
        if not changed:
            return g, moves
    raise MoveError("square normalization does not terminate")
