"""Ground combinatorics for positroid cells.

Subsets of [n] are frozensets of ints.  Boxes of a Le-diagram are (row, col)
pairs with row 1 at the top and column 1 at the left.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

Subset = frozenset
Box = tuple


class InputError(ValueError):
    """Malformed or inconsistent input."""


class LePropertyError(InputError):
    def __init__(self, witness: tuple[Box, Box, Box]):
        above, left, corner = witness
        super().__init__(
            f"Le-property fails: dots at {above} and {left} but box {corner} is empty"
        )
        self.witness = witness


def fmt_subset(s: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in sorted(s)) + "}"


# ---------------------------------------------------------------------------
# Orders
# ---------------------------------------------------------------------------


def shift_order(t: int, n: int) -> tuple[int, ...]:
    """The elements of [n] listed in increasing <_t order: t < t+1 < ... < t-1."""
    if not 1 <= t <= n:
        raise InputError(f"shift index {t} outside 1..{n}")
    return tuple(((t - 1 + i) % n) + 1 for i in range(n))


def _rank_table(order: Sequence[int]) -> dict[int, int]:
    return {v: i for i, v in enumerate(order)}


def gale_leq(a: Iterable[int], b: Iterable[int], order: Sequence[int] | int = 1,
             n: int | None = None) -> bool:
    """Gale comparison A <=_w B.

    ``order`` is either an explicit listing of [n] from smallest to largest or a
    shift index t (then ``n`` is required, or inferred from the subsets).
    """
    a, b = frozenset(a), frozenset(b)
    if len(a) != len(b):
        raise InputError(f"size mismatch {fmt_subset(a)} vs {fmt_subset(b)}")
    if isinstance(order, int):
        if n is None:
            n = max(a | b | {order}, default=order)
        order = shift_order(order, n)
    rank = _rank_table(order)
    try:
        sa = sorted(rank[x] for x in a)
        sb = sorted(rank[x] for x in b)
    except KeyError as exc:
        raise InputError(f"element {exc.args[0]} not covered by the order") from None
    return all(x <= y for x, y in zip(sa, sb))


def k_subsets(n: int, k: int) -> list[frozenset[int]]:
    return [frozenset(c) for c in itertools.combinations(range(1, n + 1), k)]


def _check_family(collection: Iterable[Iterable[int]]) -> tuple[list[frozenset[int]], int]:
    members = [frozenset(c) for c in collection]
    sizes = {len(m) for m in members}
    if len(sizes) > 1:
        raise InputError(f"members of different sizes {sorted(sizes)}")
    return members, (sizes.pop() if sizes else 0)


def is_matroid(collection: Iterable[Iterable[int]], n: int) -> bool:
    """Unique <_w-maximal member for every permutation w of [n] (brute force)."""
    members, _ = _check_family(collection)
    if not members:
        return False
    if n > 8:
        raise InputError("is_matroid is brute force; n must be at most 8")
    # in a finite poset a unique maximal element is the maximum
    for w in itertools.permutations(range(1, n + 1)):
        rank = _rank_table(w)
        keys = [sorted(rank[x] for x in m) for m in members]
        tops = [ki for ki in keys if all(all(x >= y for x, y in zip(ki, kj)) for kj in keys)]
        if len(tops) != 1:
            return False
    return True


@dataclass(frozen=True)
class Positroid:
    n: int
    k: int
    bases: frozenset[frozenset[int]]

    def __post_init__(self) -> None:
        if not self.bases:
            raise InputError("a positroid needs at least one basis")
        if any(len(b) != self.k for b in self.bases):
            raise InputError("basis of wrong size")

    def sorted_bases(self) -> list[tuple[int, ...]]:
        return sorted(tuple(sorted(b)) for b in self.bases)


def schubert_matroid(i_set: Iterable[int], n: int, t: int = 1) -> Positroid:
    i_set = frozenset(i_set)
    order = shift_order(t, n)
    bases = frozenset(h for h in k_subsets(n, len(i_set)) if gale_leq(i_set, h, order))
    return Positroid(n, len(i_set), bases)


# ---------------------------------------------------------------------------
# Grassmann necklaces and decorated permutations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GrassmannNecklace:
    n: int
    sets: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if len(self.sets) != self.n:
            raise InputError(f"necklace needs {self.n} sets, got {len(self.sets)}")
        sizes = {len(s) for s in self.sets}
        if len(sizes) > 1:
            raise InputError("necklace sets differ in size")
        for i in range(1, self.n + 1):
            cur = self.sets[i - 1]
            nxt = self.sets[i % self.n]
            if not cur <= frozenset(range(1, self.n + 1)):
                raise InputError(f"I_{i} is not a subset of [n]")
            if i in cur:
                if not (cur - {i}) <= nxt:
                    raise InputError(f"step {i}: I_{i + 1} is not I_{i} minus {i} plus one element")
            elif nxt != cur:
                raise InputError(f"step {i}: {i} not in I_{i} but I_{i + 1} differs")

    @property
    def k(self) -> int:
        return len(self.sets[0]) if self.sets else 0

    def __getitem__(self, i: int) -> frozenset[int]:
        """1-based, cyclic."""
        return self.sets[(i - 1) % self.n]

    def render(self) -> str:
        return " ".join(fmt_subset(s) for s in self.sets)


@dataclass(frozen=True)
class DecoratedPermutation:
    perm: tuple[int, ...]
    col: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = len(self.perm)
        if sorted(self.perm) != list(range(1, n + 1)):
            raise InputError(f"not a permutation of 1..{n}: {self.perm}")
        fixed = {i for i in range(1, n + 1) if self.perm[i - 1] == i}
        if set(self.col) != fixed:
            raise InputError(f"colors must be given exactly on fixed points {sorted(fixed)}")
        if any(c not in (1, -1) for c in self.col.values()):
            raise InputError("fixed point colors must be +1 or -1")
        object.__setattr__(self, "col", dict(sorted(self.col.items())))

    @property
    def n(self) -> int:
        return len(self.perm)

    def __call__(self, i: int) -> int:
        return self.perm[i - 1]

    def inverse(self, i: int) -> int:
        return self.perm.index(i) + 1

    def __hash__(self) -> int:
        return hash((self.perm, tuple(self.col.items())))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DecoratedPermutation):
            return NotImplemented
        return self.perm == other.perm and dict(self.col) == dict(other.col)

    def render(self) -> str:
        cols = ", ".join(f"{i}:{'+' if c > 0 else '-'}" for i, c in self.col.items())
        return " ".join(map(str, self.perm)) + " col: {" + cols + "}"


def necklace_of_matroid(m: Positroid) -> GrassmannNecklace:
    sets = []
    for t in range(1, m.n + 1):
        order = shift_order(t, m.n)
        minima = [b for b in m.bases if all(gale_leq(b, c, order) for c in m.bases)]
        if len(minima) != 1:
            raise InputError(f"no unique <_{t}-minimal member")
        sets.append(minima[0])
    return GrassmannNecklace(m.n, tuple(sets))


def positroid_of_necklace(neck: GrassmannNecklace) -> Positroid:
    n = neck.n
    orders = [shift_order(t, n) for t in range(1, n + 1)]
    bases = frozenset(
        h for h in k_subsets(n, neck.k)
        if all(gale_leq(neck[t], h, orders[t - 1]) for t in range(1, n + 1))
    )
    return Positroid(n, neck.k, bases)


def necklace_to_decperm(neck: GrassmannNecklace) -> DecoratedPermutation:
    n = neck.n
    perm = [0] * n
    col = {}
    for i in range(1, n + 1):
        cur, nxt = neck[i], neck[i + 1]
        if i in cur and i not in nxt:
            (j,) = nxt - cur
            perm[i - 1] = j
        else:
            perm[i - 1] = i
            col[i] = -1 if i in cur else 1
    return DecoratedPermutation(tuple(perm), col)


def decperm_to_necklace(dp: DecoratedPermutation) -> GrassmannNecklace:
    n = dp.n
    sets = []
    for r in range(1, n + 1):
        rank = _rank_table(shift_order(r, n))
        members = set()
        for i in range(1, n + 1):
            pre = dp.inverse(i)
            if pre == i:
                if dp.col[i] == -1:
                    members.add(i)
            elif rank[i] < rank[pre]:
                members.add(i)
        sets.append(frozenset(members))
    return GrassmannNecklace(n, tuple(sets))


# ---------------------------------------------------------------------------
# Le-diagrams
# ---------------------------------------------------------------------------


def shape_of_subset(i_set: Iterable[int], n: int) -> tuple[int, ...]:
    """The Young shape in a k x (n-k) box whose boundary path has vertical steps I."""
    i_set = frozenset(i_set)
    k = len(i_set)
    c = n - k
    rows = []
    for label in range(1, n + 1):
        if label in i_set:
            rows.append(c)
        else:
            c -= 1
    return tuple(rows)


def subset_of_shape(shape: tuple[int, ...], n: int) -> frozenset[int]:
    """Inverse of shape_of_subset: the labels of the vertical boundary steps."""
    k = len(shape)
    c = n - k
    label = 1
    members = []
    for r in range(k):
        while c > shape[r]:
            label += 1
            c -= 1
        members.append(label)
        label += 1
    return frozenset(members)


@dataclass(frozen=True)
class LeDiagram:
    """A dotted Young shape inside a k x (n-k) rectangle with the Le-property."""

    n: int
    shape: tuple[int, ...]
    dots: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        shape = tuple(self.shape)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "dots", frozenset(tuple(d) for d in self.dots))
        k = len(shape)
        if not 0 <= k <= self.n:
            raise InputError(f"{k} rows do not fit n={self.n}")
        if any(a < b for a, b in zip(shape, shape[1:])):
            raise InputError(f"row lengths {shape} are not weakly decreasing")
        if shape and (shape[0] > self.n - k or shape[-1] < 0):
            raise InputError(f"shape {shape} does not fit a {k} x {self.n - k} box")
        for r, c in self.dots:
            if not (1 <= r <= k and 1 <= c <= shape[r - 1]):
                raise InputError(f"dot {(r, c)} outside the shape")
        witness = self.le_violation()
        if witness is not None:
            raise LePropertyError(witness)

    def le_violation(self) -> tuple[Box, Box, Box] | None:
        for (r1, c1) in self.dots:
            for (r2, c2) in self.dots:
                if r1 < r2 and c2 < c1 and self.in_shape(r2, c1) and (r2, c1) not in self.dots:
                    return ((r1, c1), (r2, c2), (r2, c1))
        return None

    # -- sizes and labels ---------------------------------------------------

    @property
    def k(self) -> int:
        return len(self.shape)

    @property
    def ncols(self) -> int:
        return self.n - self.k

    @cached_property
    def boxes(self) -> tuple[tuple[int, int], ...]:
        return tuple((r, c) for r in range(1, self.k + 1) for c in range(1, self.shape[r - 1] + 1))

    def in_shape(self, r: int, c: int) -> bool:
        return 1 <= r <= self.k and 1 <= c <= self.shape[r - 1]

    def column_height(self, c: int) -> int:
        return sum(1 for length in self.shape if length >= c)

    @cached_property
    def _labels(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        rows = [0] * self.k
        cols = [0] * self.ncols
        c = self.ncols
        label = 1
        for r in range(1, self.k + 1):
            while c > self.shape[r - 1]:
                cols[c - 1] = label
                label += 1
                c -= 1
            rows[r - 1] = label
            label += 1
        while c > 0:
            cols[c - 1] = label
            label += 1
            c -= 1
        return tuple(rows), tuple(cols)

    @property
    def row_labels(self) -> tuple[int, ...]:
        """i_1 < ... < i_k: the boundary label at the right end of each row."""
        return self._labels[0]

    @property
    def col_labels(self) -> tuple[int, ...]:
        """j_1 > ... > j_{n-k}: the boundary label at the bottom of each column."""
        return self._labels[1]

    @property
    def lower_set(self) -> frozenset[int]:
        """I(lambda)."""
        return frozenset(self.row_labels)

    # -- dot geometry ------------------------------------------------------

    def dots_in_row(self, r: int) -> list[int]:
        return sorted(c for (rr, c) in self.dots if rr == r)

    def dots_in_col(self, c: int) -> list[int]:
        return sorted(r for (r, cc) in self.dots if cc == c)

    def sorted_dots(self) -> list[tuple[int, int]]:
        return sorted(self.dots)

    def cover(self, dot: tuple[int, int]) -> tuple[int, int] | None:
        """The dot covering ``dot``: SE-most dot strictly NW of it, if any."""
        a, b = dot
        region = [(r, c) for (r, c) in self.dots if r < a and c < b]
        if not region:
            return None
        best = max(region)
        if not all(r <= best[0] and c <= best[1] for r, c in region):
            raise AssertionError(f"no unique maximal dot NW of {dot}")
        return best

    def cover_chain(self, dot: tuple[int, int]) -> list[tuple[int, int]]:
        chain = [dot]
        nxt = self.cover(dot)
        while nxt is not None:
            chain.append(nxt)
            nxt = self.cover(nxt)
        return chain

    # -- edits -------------------------------------------------------------

    def without_dot(self, dot: tuple[int, int]) -> "LeDiagram":
        return LeDiagram(self.n, self.shape, self.dots - {dot})

    # -- text form ---------------------------------------------------------

    def to_text(self) -> str:
        lines = []
        for r in range(1, self.k + 1):
            lines.append("".join("D" if (r, c) in self.dots else "." for c in range(1, self.shape[r - 1] + 1)))
        return "\n".join(lines)

    def __str__(self) -> str:
        return f"LeDiagram(n={self.n}, k={self.k})\n" + self.to_text()

    @classmethod
    def from_text(cls, text: str, n: int | None = None, k: int | None = None) -> "LeDiagram":
        """Parse rows of 'D' and '.'; empty rows are empty lines.

        ``n`` defaults to rows + longest row, ``k`` to the number of rows.
        """
        lines = text.split("\n")
        while lines and lines[-1].strip() == "" and (k is None or len(lines) > k):
            lines.pop()
        if k is not None:
            if len(lines) > k:
                raise InputError(f"{len(lines)} rows given but k={k}")
            lines += [""] * (k - len(lines))
        shape = []
        dots = set()
        for r, line in enumerate(lines, start=1):
            line = line.rstrip("\r")
            for c, ch in enumerate(line, start=1):
                if ch == "D":
                    dots.add((r, c))
                elif ch != ".":
                    raise InputError(f"line {r}, column {c}: unexpected character {ch!r}")
            shape.append(len(line))
        width = max(shape, default=0)
        if n is None:
            n = len(shape) + width
        return cls(n, tuple(shape), frozenset(dots))


# ---------------------------------------------------------------------------
# Plucker indices
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class PluckerIndex:
    """Delta_{X,Y}: rows X of I(lambda) replaced by columns Y."""

    X: tuple[int, ...] = ()
    Y: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        x, y = tuple(sorted(set(self.X))), tuple(sorted(set(self.Y)))
        if len(x) != len(self.X) or len(y) != len(self.Y):
            raise InputError("repeated index")
        if len(x) != len(y):
            raise InputError(f"|X|={len(x)} differs from |Y|={len(y)}")
        object.__setattr__(self, "X", x)
        object.__setattr__(self, "Y", y)

    @property
    def rank(self) -> int:
        return len(self.X)

    @property
    def position(self) -> tuple[int, int] | None:
        if not self.X:
            return None
        return (self.X[-1], self.Y[-1])

    def is_empty(self) -> bool:
        return not self.X

    def __str__(self) -> str:
        if not self.X:
            return "D[|]"
        return "D[" + "".join(map(str, self.X)) + "|" + "".join(map(str, self.Y)) + "]" \
            if max(self.X + self.Y) < 10 else \
            "D[" + ",".join(map(str, self.X)) + "|" + ",".join(map(str, self.Y)) + "]"

    def __repr__(self) -> str:
        return str(self)

    @classmethod
    def parse(cls, text: str) -> "PluckerIndex":
        """Accepts 'D[13|12]', '13|12', '1,3|1,2' and '|' for the empty index."""
        s = text.strip()
        if s.startswith("D[") and s.endswith("]"):
            s = s[2:-1]
        if s.count("|") != 1:
            raise InputError(f"expected one '|' in Plucker index {text!r}")
        left, right = s.split("|")

        def parts(p: str) -> tuple[int, ...]:
            p = p.strip()
            if not p:
                return ()
            if "," in p:
                vals = p.split(",")
            else:
                vals = list(p)
            try:
                return tuple(int(v) for v in vals)
            except ValueError:
                raise InputError(f"bad index component in {text!r}") from None

        return cls(parts(left), parts(right))


def P(x: Iterable[int] | int | str = (), y: Iterable[int] | int | str = ()) -> PluckerIndex:
    """Short constructor: P(13, 12) or P('13', '12') means rows {1,3}, columns {1,2}."""

    def conv(v) -> tuple[int, ...]:
        if isinstance(v, int):
            return tuple(int(ch) for ch in str(v))
        if isinstance(v, str):
            return tuple(int(ch) for ch in v)
        return tuple(v)

    return PluckerIndex(conv(x), conv(y))


EMPTY = PluckerIndex()


def plucker_resolve(idx: PluckerIndex, diagram: LeDiagram) -> frozenset[int]:
    if any(not 1 <= x <= diagram.k for x in idx.X):
        raise InputError(f"row index out of range in {idx}")
    if any(not 1 <= y <= diagram.ncols for y in idx.Y):
        raise InputError(f"column index out of range in {idx}")
    rows, cols = diagram.row_labels, diagram.col_labels
    return (diagram.lower_set - {rows[x - 1] for x in idx.X}) | {cols[y - 1] for y in idx.Y}


def plucker_index_of(subset: Iterable[int], diagram: LeDiagram) -> PluckerIndex:
    """Inverse of plucker_resolve."""
    subset = frozenset(subset)
    rows, cols = diagram.row_labels, diagram.col_labels
    x = tuple(r for r in range(1, diagram.k + 1) if rows[r - 1] not in subset)
    y = tuple(c for c in range(1, diagram.ncols + 1) if cols[c - 1] in subset)
    return PluckerIndex(x, y)


# ---------------------------------------------------------------------------
# chi: Le-diagram -> decorated permutation, by the rules of the road
# ---------------------------------------------------------------------------


def chi(diagram: LeDiagram) -> DecoratedPermutation:
    witness = diagram.le_violation()
    if witness is not None:
        raise LePropertyError(witness)
    rows, cols = diagram.row_labels, diagram.col_labels
    row_dots = {r: diagram.dots_in_row(r) for r in range(1, diagram.k + 1)}
    col_dots = {c: diagram.dots_in_col(c) for c in range(1, diagram.ncols + 1)}
    perm = [0] * diagram.n
    col: dict[int, int] = {}

    def travel(r: int, c: int, heading: str) -> int:
        # we are standing on dot (r, c) having arrived with the given heading
        while True:
            if heading == "W":
                above = [x for x in col_dots[c] if x < r]
                if above:
                    r, heading = above[-1], "N"
                    continue
                return cols[c - 1]
            # heading N
            left = [y for y in row_dots[r] if y < c]
            if left:
                c, heading = left[-1], "W"
                continue
            return rows[r - 1]

    for r in range(1, diagram.k + 1):
        start = rows[r - 1]
        if row_dots[r]:
            perm[start - 1] = travel(r, row_dots[r][-1], "W")
        else:
            perm[start - 1] = start
            col[start] = -1
    for c in range(1, diagram.ncols + 1):
        start = cols[c - 1]
        if col_dots[c]:
            perm[start - 1] = travel(col_dots[c][-1], c, "N")
        else:
            perm[start - 1] = start
            col[start] = 1
    assert all(perm), "every boundary label gets an image"
    return DecoratedPermutation(tuple(perm), col)


def all_le_diagrams(n: int, shape: tuple[int, ...]) -> list[LeDiagram]:
    """Every Le-filling of one shape, built row by row with pruning."""
    k = len(shape)
    out: list[LeDiagram] = []

    def rec(r: int, dots: set, col_has_dot: frozenset) -> None:
        if r > k:
            out.append(LeDiagram(n, shape, frozenset(dots)))
            return
        length = shape[r - 1]
        for mask in range(1 << length):
            row = [c + 1 for c in range(length) if mask >> c & 1]
            if row:
                leftmost = row[0]
                forced = [c for c in col_has_dot if leftmost < c <= length]
                if any(c not in row for c in forced):
                    continue
            rec(r + 1, dots | {(r, c) for c in row}, col_has_dot | frozenset(row))

    rec(1, set(), frozenset())
    return out


def young_shapes(n: int, k: int) -> list[tuple[int, ...]]:
    return [shape_of_subset(s, n) for s in k_subsets(n, k)]


@lru_cache(maxsize=None)
def _chi_table(n: int, shape: tuple[int, ...]) -> dict[DecoratedPermutation, LeDiagram]:
    table: dict[DecoratedPermutation, LeDiagram] = {}
    for d in all_le_diagrams(n, shape):
        dp = chi(d)
        if dp in table:
            raise AssertionError(f"chi is not injective on shape {shape}")
        table[dp] = d
    return table


def chi_inverse(dp: DecoratedPermutation) -> LeDiagram:
    if dp.n == 0:
        return LeDiagram(0, (), frozenset())
    neck = decperm_to_necklace(dp)
    shape = shape_of_subset(neck[1], dp.n)
    try:
        return _chi_table(dp.n, shape)[dp]
    except KeyError:
        raise InputError(f"no Le-diagram of shape {shape} has decorated permutation {dp.render()}") from None


# ---------------------------------------------------------------------------
# Lattice path matroids
# ---------------------------------------------------------------------------


def lattice_path_matroid(i_set: Iterable[int], j_set: Iterable[int], n: int) -> Positroid:
    i_set, j_set = frozenset(i_set), frozenset(j_set)
    if not gale_leq(i_set, j_set, 1, n):
        raise InputError(f"{fmt_subset(i_set)} is not Gale below {fmt_subset(j_set)}")
    bases = frozenset(h for h in k_subsets(n, len(i_set)) if gale_leq(i_set, h, 1, n) and gale_leq(h, j_set, 1, n))
    return Positroid(n, len(i_set), bases)


def lpm_decperm(i_set: Iterable[int], j_set: Iterable[int], n: int) -> DecoratedPermutation:
    """pi(j_r) = i_r on the sets, pi(d_r) = c_r on the complements, in increasing order."""
    i_set, j_set = frozenset(i_set), frozenset(j_set)
    if not gale_leq(i_set, j_set, 1, n):
        raise InputError(f"{fmt_subset(i_set)} is not Gale below {fmt_subset(j_set)}")
    full = frozenset(range(1, n + 1))
    perm = [0] * n
    for src, dst in ((sorted(j_set), sorted(i_set)), (sorted(full - j_set), sorted(full - i_set))):
        for a, b in zip(src, dst):
            perm[a - 1] = b
    col = {t: (-1 if t in j_set else 1) for t in range(1, n + 1) if perm[t - 1] == t}
    return DecoratedPermutation(tuple(perm), col)


def lpm_le_diagram(i_set: Iterable[int], j_set: Iterable[int], n: int) -> LeDiagram:
    """Shape lambda(I) with dots on the boxes outside lambda(J), i.e. below/right of J's path."""
    i_set, j_set = frozenset(i_set), frozenset(j_set)
    if not gale_leq(i_set, j_set, 1, n):
        raise InputError(f"{fmt_subset(i_set)} is not Gale below {fmt_subset(j_set)}")
    outer = shape_of_subset(i_set, n)
    inner = shape_of_subset(j_set, n)
    dots = frozenset((r, c) for r in range(1, len(outer) + 1) for c in range(inner[r - 1] + 1, outer[r - 1] + 1))
    return LeDiagram(n, outer, dots)


def lpm_bounds(diagram: LeDiagram) -> tuple[frozenset[int], frozenset[int]] | None:
    """(I, J) if the diagram is a lattice path matroid cell, else None."""
    inner = []
    for r in range(1, diagram.k + 1):
        row = diagram.dots_in_row(r)
        length = diagram.shape[r - 1]
        if row and row != list(range(row[0], length + 1)):
            return None
        inner.append(row[0] - 1 if row else length)
    if any(a < b for a, b in zip(inner, inner[1:])):
        return None
    return diagram.lower_set, subset_of_shape(tuple(inner), diagram.n)
