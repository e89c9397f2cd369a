"""Le-networks and Plucker coordinates as sums over vertex-disjoint path families."""

from __future__ import annotations

import itertools
import json
import os
import string
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

from .core import EMPTY, InputError, LeDiagram, PluckerIndex, plucker_index_of, plucker_resolve
from .laurent import LaurentPolynomial, monomial_exponents

CACHE_ENV = "POSITROIDS_CACHE_DIR"

Vertex = tuple  # ("src", row) | ("snk", col) | ("dot", r, c) | ("x", r, c)


def default_symbols(diagram: LeDiagram) -> tuple[str, ...]:
    """Letters a, b, c, ... for dots in reading order; x_r_c once letters run out."""
    dots = diagram.sorted_dots()
    if len(dots) <= 26:
        return tuple(string.ascii_lowercase[i] for i in range(len(dots)))
    return tuple(f"x_{r}_{c}" for r, c in dots)


@dataclass(frozen=True, eq=False)
class LeNetwork:
    diagram: LeDiagram
    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[Vertex, Vertex, int | None], ...]  # (tail, head, symbol index or None)
    symbols: tuple[str, ...]

    @cached_property
    def out_edges(self) -> dict[Vertex, list[tuple[Vertex, int | None]]]:
        out: dict[Vertex, list] = {v: [] for v in self.vertices}
        for tail, head, sym in self.edges:
            out[tail].append((head, sym))
        return out

    @cached_property
    def symbol_of_dot(self) -> dict[tuple[int, int], str]:
        return dict(zip(self.diagram.sorted_dots(), self.symbols))

    @property
    def d(self) -> int:
        return len(self.symbols)

    @cached_property
    def _poly_cache(self) -> dict:
        return {}

    @cached_property
    def _family_cache(self) -> dict:
        return {}

    def to_json(self) -> dict:
        def name(v: Vertex) -> str:
            return ":".join(map(str, v))
        return {
            "n": self.diagram.n,
            "k": self.diagram.k,
            "symbols": list(self.symbols),
            "vertices": [name(v) for v in self.vertices],
            "edges": [[name(t), name(h), None if s is None else self.symbols[s]] for t, h, s in self.edges],
        }


def build_network(diagram: LeDiagram, symbols: Iterable[str] | None = None) -> LeNetwork:
    """Horizontal edges point left, vertical edges point down.

    The weight symbol of dot (a, b) sits on the horizontal edge arriving at the
    dot from its right.
    """
    dots = diagram.sorted_dots()
    symbols = tuple(symbols) if symbols is not None else default_symbols(diagram)
    if len(symbols) != len(dots):
        raise InputError(f"need {len(dots)} symbols, got {len(symbols)}")
    sym_index = {dot: i for i, dot in enumerate(dots)}
    hpass = set()
    vpass = set()
    for r, c in diagram.dots:
        hpass.update((r, cc) for cc in range(c, diagram.shape[r - 1] + 1))
        vpass.update((rr, c) for rr in range(r, diagram.column_height(c) + 1))
    inner = sorted((hpass & vpass) | set(diagram.dots))
    vertices: list[Vertex] = [("src", r) for r in range(1, diagram.k + 1)]
    vertices += [("snk", c) for c in range(1, diagram.ncols + 1)]
    vertices += [("dot", r, c) if (r, c) in diagram.dots else ("x", r, c) for r, c in inner]
    node = {(v[1], v[2]): v for v in vertices if v[0] in ("dot", "x")}
    edges = []
    for r in range(1, diagram.k + 1):
        row = sorted(c for (rr, c) in node if rr == r and (r, c) in hpass)
        prev: Vertex = ("src", r)
        for c in reversed(row):
            sym = sym_index.get((r, c))
            edges.append((prev, node[(r, c)], sym))
            prev = node[(r, c)]
    for c in range(1, diagram.ncols + 1):
        col = sorted(r for (r, cc) in node if cc == c and (r, c) in vpass)
        if not col:
            continue
        for r1, r2 in zip(col, col[1:]):
            edges.append((node[(r1, c)], node[(r2, c)], None))
        edges.append((node[(col[-1], c)], ("snk", c), None))
    return LeNetwork(diagram, tuple(vertices), tuple(edges), symbols)


# ---------------------------------------------------------------------------
# Path families
# ---------------------------------------------------------------------------


def _paths_from(net: LeNetwork, start: Vertex, targets: set[Vertex], blocked: frozenset) -> list[tuple[tuple[Vertex, ...], tuple[int, ...]]]:
    """All directed paths from start to a target avoiding blocked vertices."""
    out = []

    def dfs(v: Vertex, path: list, syms: list) -> None:
        if v in targets:
            out.append((tuple(path), tuple(syms)))
            return
        for w, s in net.out_edges[v]:
            if w in blocked:
                continue
            path.append(w)
            if s is not None:
                syms.append(s)
            dfs(w, path, syms)
            if s is not None:
                syms.pop()
            path.pop()

    dfs(start, [start], [])
    return out


def path_families(net: LeNetwork, rows: Iterable[int], cols: Iterable[int]) -> list[tuple[tuple[Vertex, ...], ...]]:
    """Every vertex-disjoint family joining the sources ``rows`` to the sinks ``cols``."""
    rows, cols = tuple(sorted(rows)), tuple(sorted(cols))
    if len(rows) != len(cols):
        raise InputError("source and sink sets differ in size")
    key = (rows, cols)
    cache = net._family_cache
    if key in cache:
        return cache[key]
    sinks = {("snk", c) for c in cols}
    families: list = []

    def rec(i: int, used: frozenset, chosen: list) -> None:
        if i == len(rows):
            families.append(tuple(chosen))
            return
        remaining = sinks - used
        for path, _ in _paths_from(net, ("src", rows[i]), remaining, used):
            if used.isdisjoint(path):
                chosen.append(path)
                rec(i + 1, used | frozenset(path), chosen)
                chosen.pop()

    rec(0, frozenset(), [])
    cache[key] = families
    return families


def _family_weight(net: LeNetwork, family) -> tuple[int, ...]:
    exp = [0] * net.d
    sym_of = {(t, h): s for t, h, s in net.edges}
    for path in family:
        for t, h in zip(path, path[1:]):
            s = sym_of[(t, h)]
            if s is not None:
                exp[s] += 1
    return tuple(exp)


def _disk_cache_path(net: LeNetwork) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    d = net.diagram
    key = f"n{d.n}_s{'-'.join(map(str, d.shape))}_d{'-'.join(f'{r}.{c}' for r, c in d.sorted_dots())}"
    return Path(root) / f"{key}.json"


def _load_disk_cache(net: LeNetwork) -> None:
    path = _disk_cache_path(net)
    if path is None or getattr(net, "_disk_loaded", False):
        return
    object.__setattr__(net, "_disk_loaded", True)
    if not path.exists():
        return
    try:
        data = json.loads(path.read_text())
    except (OSError, ValueError):
        return
    for entry in data.get("polys", []):
        idx = PluckerIndex(tuple(entry["X"]), tuple(entry["Y"]))
        net._poly_cache.setdefault(idx, LaurentPolynomial(net.symbols, {tuple(e): c for e, c in entry["terms"]}))


def save_disk_cache(net: LeNetwork) -> None:
    """Write memoized path sums to the cache directory named by the environment."""
    path = _disk_cache_path(net)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    polys = [{"X": list(i.X), "Y": list(i.Y), "terms": [[list(e), c] for e, c in p.sorted_terms()]}
             for i, p in sorted(net._poly_cache.items())]
    path.write_text(json.dumps({"polys": polys}))


def plucker_poly(idx: PluckerIndex, net: LeNetwork) -> LaurentPolynomial:
    """Sum over vertex-disjoint families of the product of edge weights."""
    cache = net._poly_cache
    if idx in cache:
        return cache[idx]
    _load_disk_cache(net)
    if idx in cache:
        return cache[idx]
    plucker_resolve(idx, net.diagram)  # range check
    terms: dict[tuple[int, ...], int] = {}
    for fam in path_families(net, idx.X, idx.Y):
        e = _family_weight(net, fam)
        terms[e] = terms.get(e, 0) + 1
    poly = LaurentPolynomial(net.symbols, terms)
    cache[idx] = poly
    return poly


def plucker_poly_of_subset(subset: Iterable[int], net: LeNetwork) -> LaurentPolynomial:
    return plucker_poly(plucker_index_of(subset, net.diagram), net)


def is_nonzero(idx: PluckerIndex, net: LeNetwork) -> bool:
    return not plucker_poly(idx, net).is_zero()


def family_count(idx: PluckerIndex, net: LeNetwork) -> int:
    return len(path_families(net, idx.X, idx.Y))


def is_unique_path(idx: PluckerIndex, net: LeNetwork) -> bool:
    return family_count(idx, net) == 1


def all_indices(diagram: LeDiagram) -> list[PluckerIndex]:
    out = []
    for r in range(0, min(diagram.k, diagram.ncols) + 1):
        for x in itertools.combinations(range(1, diagram.k + 1), r):
            for y in itertools.combinations(range(1, diagram.ncols + 1), r):
                out.append(PluckerIndex(x, y))
    return out


def nonzero_indices(net: LeNetwork) -> list[PluckerIndex]:
    return [i for i in all_indices(net.diagram) if is_nonzero(i, net)]


def nonzero_subsets(net: LeNetwork) -> frozenset[frozenset[int]]:
    return frozenset(plucker_resolve(i, net.diagram) for i in nonzero_indices(net))


def rank_of_cell(net: LeNetwork) -> int:
    return max(i.rank for i in nonzero_indices(net))


# ---------------------------------------------------------------------------
# Boundary measurement matrix
# ---------------------------------------------------------------------------


def boundary_matrix(net: LeNetwork) -> list[list[LaurentPolynomial]]:
    """k x n matrix with A_I = identity and signed single-source path sums elsewhere."""
    d = net.diagram
    rows, cols = d.row_labels, d.col_labels
    one = LaurentPolynomial.constant(1, net.symbols)
    zero = LaurentPolynomial(net.symbols, {})
    label_of_col = {cols[y - 1]: y for y in range(1, d.ncols + 1)}
    matrix = []
    for r in range(1, d.k + 1):
        i_r = rows[r - 1]
        row = []
        for j in range(1, d.n + 1):
            if j in d.lower_set:
                row.append(one if j == i_r else zero)
                continue
            m = plucker_poly(PluckerIndex((r,), (label_of_col[j],)), net)
            lo, hi = sorted((i_r, j))
            s = sum(1 for i in d.lower_set if lo < i < hi)
            row.append(m if s % 2 == 0 else -m)
        matrix.append(row)
    return matrix


def determinant(matrix: list[list[LaurentPolynomial]], symbols: tuple[str, ...]) -> LaurentPolynomial:
    """Laplace expansion along rows with memoized column subsets."""
    k = len(matrix)
    if k == 0:
        return LaurentPolynomial.constant(1, symbols)
    memo: dict[tuple[int, frozenset], LaurentPolynomial] = {}

    def minor(r: int, cols: frozenset) -> LaurentPolynomial:
        if r == k:
            return LaurentPolynomial.constant(1, symbols)
        key = (r, cols)
        if key in memo:
            return memo[key]
        total = LaurentPolynomial(symbols, {})
        ordered = sorted(cols)
        for pos, c in enumerate(ordered):
            entry = matrix[r][c]
            if entry.is_zero():
                continue
            sub = minor(r + 1, cols - {c})
            term = entry * sub
            total = total + (term if pos % 2 == 0 else -term)
        memo[key] = total
        return total

    return minor(0, frozenset(range(len(matrix[0]))))


def maximal_minor(matrix: list[list[LaurentPolynomial]], subset: Iterable[int], symbols: tuple[str, ...]) -> LaurentPolynomial:
    cols = sorted(subset)
    return determinant([[row[j - 1] for j in cols] for row in matrix], symbols)


# ---------------------------------------------------------------------------
# Solving edge weights from a unique-path basis
# ---------------------------------------------------------------------------


class BasisError(ValueError):
    pass


def basis_symbol(idx: PluckerIndex) -> str:
    return str(idx)


def _solve_rational(rows: list[list[Fraction]], rhs_cols: list[list[Fraction]]) -> list[list[Fraction]] | None:
    """Solve A z = b for each b; A is m x d with full column rank, returns z per b."""
    m = len(rows)
    d = len(rows[0]) if rows else 0
    aug = [list(rows[i]) + [b[i] for b in rhs_cols] for i in range(m)]
    pivots = []
    r = 0
    for c in range(d):
        p = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if len(pivots) < d:
        return None
    # consistency
    for i in range(r, m):
        if any(x != 0 for x in aug[i][d:]):
            raise BasisError("target lies outside the lattice spanned by the basis")
    sols = []
    for j in range(len(rhs_cols)):
        z = [Fraction(0)] * d
        for row_i, c in enumerate(pivots):
            z[c] = aug[row_i][d + j]
        sols.append(z)
    return sols


def exponent_matrix(basis: Iterable[PluckerIndex], net: LeNetwork) -> tuple[list[PluckerIndex], list[tuple[int, ...]]]:
    members = sorted(i for i in basis if not i.is_empty())
    exps = []
    for idx in members:
        if not is_unique_path(idx, net):
            raise BasisError(f"{idx} is not a unique-path variable")
        exps.append(monomial_exponents(plucker_poly(idx, net)))
    return members, exps


def integer_rank(vectors: list[tuple[int, ...]]) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    if not rows:
        return 0
    rank = 0
    ncols = len(rows[0])
    for c in range(ncols):
        p = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def solve_weights_from_basis(basis: Iterable[PluckerIndex], net: LeNetwork) -> dict[str, LaurentPolynomial]:
    """Each edge symbol as an integer-exponent monomial in the basis variables.

    With basis exponent vectors e_B (over edge symbols) we need integers c_B with
    sum_B c_B e_B equal to each unit vector.
    """
    members, exps = exponent_matrix(basis, net)
    d = net.d
    if len(members) != d:
        raise BasisError(f"basis has {len(members)} non-trivial members, cell has {d} edge symbols")
    if integer_rank(exps) != d:
        raise BasisError("exponent matrix is rank deficient")
    # A has rows = edge symbols, columns = basis members
    a = [[Fraction(exps[b][s]) for b in range(len(members))] for s in range(d)]
    units = [[Fraction(int(i == s)) for i in range(d)] for s in range(d)]
    sols = _solve_rational(a, units)
    if sols is None:
        raise BasisError("exponent matrix is rank deficient")
    bsyms = tuple(basis_symbol(m) for m in members)
    out = {}
    for s, z in enumerate(sols):
        if any(x.denominator != 1 for x in z):
            raise BasisError(f"edge symbol {net.symbols[s]} has no integral monomial solution")
        out[net.symbols[s]] = LaurentPolynomial.monomial(bsyms, [int(x) for x in z])
    return out


def expand_in_basis(idx: PluckerIndex, basis: Iterable[PluckerIndex], net: LeNetwork,
                    weights: Mapping[str, LaurentPolynomial] | None = None) -> LaurentPolynomial:
    basis = list(basis)
    if weights is None:
        weights = solve_weights_from_basis(basis, net)
    bsyms = tuple(basis_symbol(m) for m in sorted(i for i in basis if not i.is_empty()))
    return plucker_poly(idx, net).substitute(weights, bsyms)


def three_term_relations(diagram: LeDiagram):
    """All (S, w<x<y<z) with S disjoint from the four; yields resolved subsets."""
    n, k = diagram.n, diagram.k
    ground = range(1, n + 1)
    for quad in itertools.combinations(ground, 4):
        rest = [i for i in ground if i not in quad]
        for s in itertools.combinations(rest, k - 2) if k >= 2 else ():
            yield frozenset(s), quad


def empty_network_value(net: LeNetwork) -> LaurentPolynomial:
    return plucker_poly(EMPTY, net)
