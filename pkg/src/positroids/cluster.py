"""Quivers, seeds and seed mutation, plus the square-move sweep on LPM cells."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from .core import EMPTY, InputError, LeDiagram, PluckerIndex, fmt_subset, lpm_bounds, plucker_index_of, plucker_resolve
from .laurent import LaurentPolynomial
from .network import LeNetwork, build_network, plucker_poly
from .plabic import Move, PlabicGraph, apply_M1, canonical_plabic, normalize_square, square_faces

V = Hashable


class FrozenVertexError(InputError):
    pass


def _key(v: V) -> str:
    if isinstance(v, frozenset):
        return fmt_subset(v)
    return str(v)


@dataclass(frozen=True)
class Quiver:
    """Arrow multiplicities as a skew-symmetric matrix stored sparsely (b[i, j] > 0 means i -> j)."""

    vertices: frozenset
    frozen: frozenset
    b: Mapping[tuple[V, V], int] = field(default_factory=dict)

    @classmethod
    def from_arrows(cls, vertices: Iterable[V], frozen: Iterable[V], arrows: Mapping[tuple[V, V], int]) -> "Quiver":
        vertices, frozen = frozenset(vertices), frozenset(frozen)
        b: dict[tuple[V, V], int] = {}
        for (i, j), m in arrows.items():
            if i == j:
                raise InputError(f"loop at {_key(i)}")
            if i in frozen and j in frozen:
                continue
            b[(i, j)] = b.get((i, j), 0) + m
            b[(j, i)] = b.get((j, i), 0) - m
        return cls(vertices, frozen, {k: m for k, m in b.items() if m})

    @property
    def mutable(self) -> frozenset:
        return self.vertices - self.frozen

    def entry(self, i: V, j: V) -> int:
        return self.b.get((i, j), 0)

    def arrows(self) -> list[tuple[V, V, int]]:
        out = [(i, j, m) for (i, j), m in self.b.items() if m > 0]
        return sorted(out, key=lambda a: (_key(a[0]), _key(a[1])))

    def in_neighbors(self, k: V) -> dict[V, int]:
        return {i: m for (i, j), m in self.b.items() if j == k and m > 0}

    def out_neighbors(self, k: V) -> dict[V, int]:
        return {j: m for (i, j), m in self.b.items() if i == k and m > 0}

    def mutate(self, k: V) -> "Quiver":
        if k not in self.vertices:
            raise InputError(f"no vertex {_key(k)}")
        if k in self.frozen:
            raise FrozenVertexError(f"vertex {_key(k)} is frozen")
        b: dict[tuple[V, V], int] = {}
        ins, outs = self.in_neighbors(k), self.out_neighbors(k)
        for (i, j), m in self.b.items():
            if k in (i, j):
                b[(j, i)] = m
            else:
                b[(i, j)] = b.get((i, j), 0) + m
        # add i -> j for every path i -> k -> j; opposite arrows cancel
        for i, mi in ins.items():
            for j, mj in outs.items():
                if i in self.frozen and j in self.frozen:
                    continue
                b[(i, j)] = b.get((i, j), 0) + mi * mj
                b[(j, i)] = b.get((j, i), 0) - mi * mj
        return Quiver(self.vertices, self.frozen, {key: m for key, m in b.items() if m})

    def relabel(self, mapping: Mapping[V, V]) -> "Quiver":
        f = lambda v: mapping.get(v, v)  # noqa: E731
        if len({f(v) for v in self.vertices}) != len(self.vertices):
            raise InputError("relabeling is not injective")
        return Quiver(frozenset(map(f, self.vertices)), frozenset(map(f, self.frozen)),
                      {(f(i), f(j)): m for (i, j), m in self.b.items()})

    def mutable_graph(self):
        """Underlying simple graph of the mutable part, as a networkx graph."""
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(_key(v) for v in self.mutable)
        for i, j, _ in self.arrows():
            if i in self.mutable and j in self.mutable:
                g.add_edge(_key(i), _key(j))
        return g

    def to_json(self) -> dict:
        return {
            "vertices": sorted(_key(v) for v in self.vertices),
            "frozen": sorted(_key(v) for v in self.frozen),
            "arrows": [[_key(i), _key(j), m] for i, j, m in self.arrows()],
        }

    def to_dot(self, names: Mapping[V, str] | None = None) -> str:
        name = (lambda v: names.get(v, _key(v))) if names else _key
        lines = ["digraph quiver {"]
        for v in sorted(self.vertices, key=name):
            shape = "box" if v in self.frozen else "ellipse"
            lines.append(f'  "{name(v)}" [shape={shape}];')
        for i, j, m in self.arrows():
            for _ in range(m):
                lines.append(f'  "{name(i)}" -> "{name(j)}";')
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Seed:
    quiver: Quiver
    variables: Mapping[V, LaurentPolynomial]
    tags: Mapping[V, PluckerIndex] = field(default_factory=dict)

    def tagged_quiver(self) -> Quiver:
        return self.quiver.relabel(dict(self.tags))

    def cluster(self) -> frozenset:
        return frozenset(self.tags[v] for v in self.quiver.vertices)

    def to_json(self) -> dict:
        return {
            "quiver": self.tagged_quiver().to_json() if self.tags else self.quiver.to_json(),
            "variables": {str(self.tags.get(v, _key(v))): str(p) for v, p in self.variables.items()},
        }


def seed_mutate(seed: Seed, k: V, new_tag: PluckerIndex | None = None) -> Seed:
    """x_k x_k' = prod_{i -> k} x_i + prod_{k -> j} x_j, with exact division."""
    q = seed.quiver
    if k in q.frozen:
        raise FrozenVertexError(f"vertex {_key(k)} is frozen")
    xk = seed.variables[k]
    one = LaurentPolynomial.constant(1, xk.symbols)
    p_in, p_out = one, one
    for i, m in q.in_neighbors(k).items():
        p_in = p_in * seed.variables[i] ** m
    for j, m in q.out_neighbors(k).items():
        p_out = p_out * seed.variables[j] ** m
    new = (p_in + p_out).exact_div(xk)
    variables = dict(seed.variables)
    variables[k] = new
    tags = dict(seed.tags)
    if new_tag is not None:
        tags[k] = new_tag
    elif k in tags:
        del tags[k]
    return Seed(q.mutate(k), variables, tags)


def cluster_symbol(v: V) -> str:
    return "x" + "".join(f"_{i}" for i in sorted(v)) if isinstance(v, frozenset) else f"x_{v}"


def initial_seed(quiver: Quiver, tags: Mapping[V, PluckerIndex] | None = None) -> Seed:
    """Seed whose variables are independent symbols, one per vertex."""
    order = sorted(quiver.vertices, key=_key)
    symbols = tuple(cluster_symbol(v) for v in order)
    variables = {v: LaurentPolynomial.variable(s, symbols) for v, s in zip(order, symbols)}
    return Seed(quiver, variables, dict(tags or {}))


def canonical_seed(diagram: LeDiagram, net: LeNetwork | None = None, symbolic: bool = False) -> tuple[Seed, PlabicGraph]:
    """Seed of the canonical plabic graph; vertices are face label subsets.

    With ``symbolic`` the variables are independent cluster symbols, otherwise
    they are the Plucker polynomials over the network's edge symbols.
    """
    g = canonical_plabic(diagram)
    q = g.dual_quiver()
    tags = {v: plucker_index_of(v, diagram) for v in q.vertices}
    if symbolic:
        return initial_seed(q, tags), g
    net = net or build_network(diagram)
    return Seed(q, {v: plucker_poly(tags[v], net) for v in q.vertices}, tags), g


# ---------------------------------------------------------------------------
# Square-move sweep on lattice-path-matroid cells
# ---------------------------------------------------------------------------


@dataclass
class SweepStep:
    corner: tuple[int, int]
    removed: PluckerIndex
    added: PluckerIndex
    moves: list[Move]

    def to_json(self) -> dict:
        return {
            "corner": list(self.corner),
            "removed": str(self.removed),
            "added": str(self.added),
            "moves": [m.to_json() for m in self.moves],
        }


def _diag(a: int, b: int, t: int) -> PluckerIndex:
    return PluckerIndex(tuple(range(a, a + t + 1)), tuple(range(b, b + t + 1)))


def nw_corner(diagram: LeDiagram) -> tuple[int, int]:
    """The uppermost dot with no dot weakly NW of it other than itself."""
    free = [d for d in diagram.sorted_dots()
            if not any((r, c) != d and r <= d[0] and c <= d[1] for r, c in diagram.dots)]
    if not free:
        raise InputError("diagram has no dots")
    return min(free)


def lpm_square_sweep(diagram: LeDiagram, check: bool = True) -> tuple[Seed, list[SweepStep]]:
    """Mutate the canonical seed of an LPM cell into the diagonal cluster by square moves.

    Each mutation is realized on the plabic graph: the face is made into an
    alternating square of trivalent vertices (M3 removals, M2 contractions and
    re-splits), then M1 is applied.  With ``check`` the new face label, the
    mutated variable and the mutated quiver are compared against the graph.
    """
    if lpm_bounds(diagram) is None:
        raise InputError("diagram is not a lattice path matroid cell")
    net = build_network(diagram)
    seed, g = canonical_seed(diagram, net)
    by_tag = {t: v for v, t in seed.tags.items()}
    steps: list[SweepStep] = []
    cur = diagram
    while cur.dots:
        a, b = nw_corner(cur)
        t = 0
        while (a + t + 1, b + t + 1) in cur.dots:
            old, new = _diag(a, b, t), _diag(a + 1, b + 1, t)
            v = by_tag.pop(old)
            label = plucker_resolve(seed.tags[v], diagram)
            # the face keeps its vertex id; find it in the graph by its current label
            g, moves = normalize_square(g, label)
            faces_before = g.face_labels()
            i = faces_before.index(label)
            if i not in square_faces(g):
                raise InputError(f"face {old} is not a square after rewiring")
            g = apply_M1(g, i)
            moves.append(Move("M1", (i,)))
            seed = seed_mutate(seed, v, new)
            by_tag[new] = v
            if check:
                got = g.face_labels()[i]
                if got != plucker_resolve(new, diagram):
                    raise AssertionError(f"square move at {old} relabels the face as {fmt_subset(got)}")
                if seed.variables[v] != plucker_poly(new, net):
                    raise AssertionError(f"exchange at {old} does not produce {new}")
                q_graph = g.dual_quiver().relabel({s: plucker_index_of(s, diagram) for s in g.face_labels()})
                if q_graph != seed.tagged_quiver():
                    raise AssertionError(f"quiver after the square move at {old} differs from the mutated quiver")
            steps.append(SweepStep((a, b), old, new, moves))
            t += 1
        cur = cur.without_dot((a, b))
    return seed, steps


def diagonal_index(diagram: LeDiagram, x: int, y: int) -> PluckerIndex | None:
    """Delta_{X_{x,y}, Y_{x,y}}: the longest dotted diagonal starting at dot (x, y)."""
    if (x, y) not in diagram.dots:
        return None
    t = 0
    while (x + t + 1, y + t + 1) in diagram.dots:
        t += 1
    return _diag(x, y, t)


def edge_weight_formula(diagram: LeDiagram, dot: tuple[int, int], net: LeNetwork) -> LaurentPolynomial:
    """The edge weight at ``dot`` written as a ratio of diagonal Plucker polynomials."""
    x, y = dot

    def s(i: int, j: int) -> LaurentPolynomial:
        idx = diagonal_index(diagram, i, j)
        if idx is None:
            return LaurentPolynomial.constant(1, net.symbols)
        return plucker_poly(idx, net)

    return (s(x, y) * s(x + 1, y + 2)).exact_div(s(x, y + 1) * s(x + 1, y + 1))


def lpm_cells(n_max: int) -> list[LeDiagram]:
    from .core import all_le_diagrams, young_shapes

    out = []
    for n in range(1, n_max + 1):
        for k in range(0, n + 1):
            for sh in young_shapes(n, k):
                out.extend(d for d in all_le_diagrams(n, sh) if lpm_bounds(d) is not None)
    return out


def seeds_equal(a: Seed, b: Seed) -> bool:
    return a.quiver == b.quiver and dict(a.variables) == dict(b.variables)


def quiver_json(q: Quiver) -> str:
    return json.dumps(q.to_json(), sort_keys=True)


@dataclass
class LaurentCheck:
    cells: int = 0
    sequences: int = 0
    mutations: int = 0
    failures: list[str] = field(default_factory=list)


def laurent_check(diagram: LeDiagram, max_len: int = 8, result: LaurentCheck | None = None) -> LaurentCheck:
    """Mutate the canonical seed along every sequence of length <= max_len.

    Sequences with an immediate repetition are skipped: mu_k mu_k is the
    identity, so they reach seeds already visited by shorter sequences.
    Every new variable is computed by exact division over the initial cluster
    symbols; a remainder is recorded as a failure.
    """
    from .laurent import DivisionError

    result = result or LaurentCheck()
    result.cells += 1
    seed, _ = canonical_seed(diagram, symbolic=True)
    mutable = sorted(seed.quiver.mutable, key=_key)

    def rec(s: Seed, last, depth: int, path: list) -> None:
        result.sequences += 1
        if depth == max_len:
            return
        for v in mutable:
            if v == last:
                continue
            try:
                nxt = seed_mutate(s, v)
            except DivisionError as exc:
                result.failures.append(f"{diagram.to_text()!r} {[_key(p) for p in path + [v]]}: {exc}")
                continue
            result.mutations += 1
            if nxt.variables[v].is_zero():
                result.failures.append(f"{diagram.to_text()!r} {[_key(p) for p in path + [v]]}: zero variable")
            rec(nxt, v, depth + 1, path + [v])

    rec(seed, None, 0, [])
    return result
