"""Slow, direct reference computations used to cross-check the library.

Nothing here imports the package, so a shared bug cannot make both sides
agree.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter

import networkx as nx


def boundary_labels(shape: tuple[int, ...], n: int) -> tuple[dict[int, int], dict[int, int]]:
    """Walk the boundary of the shape from the NE corner: down steps label rows, left steps columns."""
    k = len(shape)
    rows, cols = {}, {}
    r, c = 0, n - k
    for label in range(1, n + 1):
        if r < k and shape[r] == c:
            r += 1
            rows[r] = label
        else:
            cols[c] = label
            c -= 1
    return rows, cols


def network_graph(shape: tuple[int, ...], dots: set[tuple[int, int]], n: int) -> nx.DiGraph:
    """Each dot sends a ray right (toward its row source) and a ray down (toward its column sink).

    Walkers enter at a row's right end, travel left and turn down at any
    vertex. The weight of a dot sits on the horizontal edge entering it.
    """
    rows, cols = boundary_labels(shape, n)
    k = len(shape)
    G = nx.DiGraph()
    row_first = {r: min((c for rr, c in dots if rr == r), default=None) for r in range(1, k + 1)}
    col_first = {c: min((r for r, cc in dots if cc == c), default=None) for c in range(1, n - k + 1)}
    verts = {(r, c) for r in range(1, k + 1) for c in range(1, shape[r - 1] + 1)
             if (r, c) in dots or (row_first[r] is not None and col_first[c] is not None
                                    and row_first[r] <= c and col_first[c] <= r)}
    for r in range(1, k + 1):
        line = sorted((c for rr, c in verts if rr == r), reverse=True)
        prev = ("in", rows[r])
        for c in line:
            G.add_edge(prev, (r, c), dot=(r, c) if (r, c) in dots else None)
            prev = (r, c)
    for c in range(1, n - k + 1):
        line = sorted(r for r, cc in verts if cc == c)
        for a, b in zip(line, line[1:]):
            G.add_edge((a, c), (b, c), dot=None)
        if line:
            G.add_edge((line[-1], c), ("out", cols[c]), dot=None)
    return G


def brute_plucker(shape: tuple[int, ...], dots: set[tuple[int, int]], n: int,
                  subset: frozenset[int]) -> Counter:
    """Vertex-disjoint path families from I(shape) minus J to J minus I(shape).

    Returns a Counter from sorted tuples of the dots whose weights appear
    (with multiplicity) to the number of families with that weight.
    """
    rows, _ = boundary_labels(shape, n)
    lower = set(rows.values())
    sources = sorted(lower - subset)
    sinks = sorted(subset - lower)
    if len(sources) != len(sinks):
        return Counter()
    if not sources:
        return Counter({(): 1})
    G = network_graph(shape, dots, n)
    per_source = []
    for s in sources:
        paths = []
        for t in sinks:
            if ("in", s) in G and ("out", t) in G:
                paths.extend(nx.all_simple_paths(G, ("in", s), ("out", t)))
        per_source.append(paths)
    out: Counter = Counter()
    for fam in itertools.product(*per_source):
        seen: set = set()
        ok = True
        for p in fam:
            inner = p[1:-1]
            if seen.intersection(inner) or p[-1] in seen:
                ok = False
                break
            seen.update(inner)
            seen.add(p[-1])
        if not ok:
            continue
        weight = []
        for p in fam:
            weight.extend(G.edges[a, b]["dot"] for a, b in zip(p, p[1:]) if G.edges[a, b]["dot"])
        out[tuple(sorted(weight))] += 1
    return out


def decorated_permutation_count(n: int) -> int:
    """sum over permutations of 2^(fixed points), via the derangement formula."""
    return sum(math.comb(n, f) * 2 ** f * _derangements(n - f) for f in range(n + 1))


def _derangements(m: int) -> int:
    return round(math.factorial(m) / math.e) if m else 1


def gale_leq_shifted(a: frozenset[int], b: frozenset[int], i: int, n: int) -> bool:
    key = lambda x: (x - i) % n
    return all(x <= y for x, y in zip(sorted(map(key, a)), sorted(map(key, b))))


def positroid_from_necklace(necklace: tuple[frozenset[int], ...], n: int) -> set[frozenset[int]]:
    """Intersection of the shifted Schubert matroids, straight from the definition."""
    if not necklace:
        return {frozenset()}
    k = len(necklace[0])
    return {frozenset(b) for b in itertools.combinations(range(1, n + 1), k)
            if all(gale_leq_shifted(necklace[i - 1], frozenset(b), i, n) for i in range(1, n + 1))}


def d7_tree() -> nx.Graph:
    G = nx.path_graph(5)
    G.add_edges_from([(4, 5), (4, 6)])
    return G


def cover(dots: set[tuple[int, int]], dot: tuple[int, int]) -> tuple[int, int] | None:
    nw = [(r, c) for r, c in dots if r < dot[0] and c < dot[1]]
    return max(nw) if nw else None


def dot_label(shape: tuple[int, ...], dots: set[tuple[int, int]], n: int, dot: tuple[int, int]) -> frozenset[int]:
    """I(shape) with the rows of the cover chain of ``dot`` swapped for its columns."""
    rows, cols = boundary_labels(shape, n)
    out = set(rows.values())
    d = dot
    while d is not None:
        out.discard(rows[d[0]])
        out.add(cols[d[1]])
        d = cover(dots, d)
    return frozenset(out)


def adjacency_rule(dots: set[tuple[int, int]]) -> set[frozenset]:
    """Consecutive dots in a row, consecutive dots in a column, and each dot with its cover."""
    out = set()
    for r, c in dots:
        right = [cc for rr, cc in dots if rr == r and cc > c]
        if right:
            out.add(frozenset({(r, c), (r, min(right))}))
        below = [rr for rr, cc in dots if cc == c and rr > r]
        if below:
            out.add(frozenset({(r, c), (min(below), c)}))
        cv = cover(dots, (r, c))
        if cv is not None:
            out.add(frozenset({(r, c), cv}))
    return out
