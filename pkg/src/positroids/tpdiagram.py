"""TP-diagrams and Plucker mutations.

Every local move (fold, push, pull, jump) is an exchange of one member for a
new Plucker variable.  ``exchange`` finds the unique 3-term relation linking
the two, decides which of the three admissible mutation cases applies, checks
the membership and vanishing conditions, and records the step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .core import EMPTY, LeDiagram, PluckerIndex, plucker_index_of, plucker_resolve
from .laurent import LaurentPolynomial
from .network import LeNetwork, build_network, is_nonzero, plucker_poly


class MutationError(RuntimeError):
    """A requested mutation does not satisfy any admissible case."""


# ---------------------------------------------------------------------------
# Cell context: the network used for vanishing checks and verification
# ---------------------------------------------------------------------------


class Cell:
    """A Le-diagram with its network and memoized index helpers."""

    def __init__(self, diagram: LeDiagram, net: LeNetwork | None = None):
        self.diagram = diagram
        self.net = net if net is not None else build_network(diagram)
        self._subset: dict[PluckerIndex, frozenset[int]] = {}
        self._index: dict[frozenset[int], PluckerIndex] = {}

    def subset(self, idx: PluckerIndex) -> frozenset[int]:
        s = self._subset.get(idx)
        if s is None:
            s = plucker_resolve(idx, self.diagram)
            self._subset[idx] = s
        return s

    def index(self, subset: frozenset[int]) -> PluckerIndex:
        i = self._index.get(subset)
        if i is None:
            i = plucker_index_of(subset, self.diagram)
            self._index[subset] = i
        return i

    def nonzero(self, idx: PluckerIndex) -> bool:
        return is_nonzero(idx, self.net)

    def poly(self, idx: PluckerIndex) -> LaurentPolynomial:
        return plucker_poly(idx, self.net)


# ---------------------------------------------------------------------------
# Relations and steps
# ---------------------------------------------------------------------------


def _prod(a: PluckerIndex, b: PluckerIndex) -> frozenset:
    return frozenset((a, b)) if a != b else frozenset(((a, 2),))


@dataclass(frozen=True)
class Relation:
    """Delta_{H1} Delta_{H2} = Delta_{H3} Delta_{H4} + Delta_{H5} Delta_{H6}."""

    H: tuple[PluckerIndex, ...]
    zero: tuple[bool, ...] = (False, False, False, False, False, False)

    def products(self) -> tuple[tuple[PluckerIndex, PluckerIndex], ...]:
        h = self.H
        return ((h[0], h[1]), (h[2], h[3]), (h[4], h[5]))

    def rhs_zero(self, which: int) -> bool:
        """which = 1 for H3*H4, 2 for H5*H6."""
        a, b = (2, 3) if which == 1 else (4, 5)
        return self.zero[a] or self.zero[b]

    def normalized(self):
        """Comparison key: 3-term relations keep their sides, 2-term ones are unordered."""
        lhs = _prod(self.H[0], self.H[1])
        rhs = [_prod(self.H[2], self.H[3]) if not self.rhs_zero(1) else None,
               _prod(self.H[4], self.H[5]) if not self.rhs_zero(2) else None]
        rhs = [r for r in rhs if r is not None]
        if len(rhs) == 2:
            return ("3", lhs, frozenset(rhs))
        return ("2", frozenset([lhs] + rhs))

    def render(self) -> str:
        left = f"{self.H[0]}*{self.H[1]}"
        parts = []
        if not self.rhs_zero(1):
            parts.append(f"{self.H[2]}*{self.H[3]}")
        if not self.rhs_zero(2):
            parts.append(f"{self.H[4]}*{self.H[5]}")
        return left + " = " + " + ".join(parts)

    def holds(self, cell: Cell) -> bool:
        """Exact identity check; a product flagged zero must vanish (the EMPTY pair is a placeholder)."""
        p = cell.poly
        lhs = p(self.H[0]) * p(self.H[1])
        rhs = None
        for which, (a, b) in ((1, self.products()[1]), (2, self.products()[2])):
            term = p(a) * p(b)
            if self.rhs_zero(which):
                if (a, b) != (EMPTY, EMPTY) and not term.is_zero():
                    return False
                continue
            rhs = term if rhs is None else rhs + term
        return rhs is not None and lhs == rhs


def parse_relation(text: str) -> Relation:
    """Parse 'A B = C D + E F' or 'A B = C D' with indices like '13,12' or '|'.

    Two-term relations are stored with a placeholder zero product.
    """
    left, right = text.split("=")
    lhs = [PluckerIndex.parse(_norm(t)) for t in left.split()]
    prods = []
    for chunk in right.split("+"):
        prods.append([PluckerIndex.parse(_norm(t)) for t in chunk.split()])
    if len(lhs) != 2 or any(len(p) != 2 for p in prods) or len(prods) not in (1, 2):
        raise ValueError(f"cannot parse relation {text!r}")
    if len(prods) == 1:
        return Relation((lhs[0], lhs[1], EMPTY, EMPTY, prods[0][0], prods[0][1]),
                        (False, False, True, True, False, False))
    return Relation((lhs[0], lhs[1], prods[0][0], prods[0][1], prods[1][0], prods[1][1]))


def _norm(token: str) -> str:
    token = token.strip()
    if token in ("|", "0", "empty"):
        return "|"
    if "|" in token or token.startswith("D["):
        return token
    x, y = token.split(",")
    return f"{x}|{y}"


@dataclass(frozen=True)
class MutationStep:
    kind: str
    removed: PluckerIndex
    added: PluckerIndex
    relation: Relation
    case: int
    note: str = ""

    def inverse(self, kind: str | None = None) -> "MutationStep":
        return MutationStep(kind or _INVERSE_KIND.get(self.kind, self.kind), self.added, self.removed,
                            self.relation, self.case, self.note)

    def to_json(self) -> dict:
        roles = ["H1", "H2", "H3", "H4", "H5", "H6"]
        return {
            "kind": self.kind,
            "removed": str(self.removed),
            "added": str(self.added),
            "case": self.case,
            "indices": {r: str(h) for r, h in zip(roles, self.relation.H)},
            "zero": [r for r, z in zip(roles, self.relation.zero) if z],
            "relation": self.relation.render(),
            "note": self.note,
        }

    @classmethod
    def from_json(cls, data: dict) -> "MutationStep":
        roles = ["H1", "H2", "H3", "H4", "H5", "H6"]
        h = tuple(PluckerIndex.parse(data["indices"][r]) for r in roles)
        zero = tuple(r in data.get("zero", ()) for r in roles)
        return cls(data["kind"], PluckerIndex.parse(data["removed"]), PluckerIndex.parse(data["added"]),
                   Relation(h, zero), int(data["case"]), data.get("note", ""))


_INVERSE_KIND = {"push": "pull", "pull": "push"}


def _exchange_relation(cell: Cell, removed: PluckerIndex, added: PluckerIndex):
    """The 3-term relation through removed*added.

    Returns (crossing, relation) where relation.H has removed/added placed
    according to the role they play; ``crossing`` tells whether the pair is the
    left-hand side.
    """
    r, a = cell.subset(removed), cell.subset(added)
    if len(r - a) != 2:
        raise MutationError(f"{removed} and {added} do not differ by two elements")
    s = r & a
    w, x, y, z = sorted((r - a) | (a - r))
    idx = lambda *extra: cell.index(s | frozenset(extra))
    wy, xz = idx(w, y), idx(x, z)
    wx, yz = idx(w, x), idx(y, z)
    wz, xy = idx(w, z), idx(x, y)
    return {"cross": (wy, xz), "p": (wx, yz), "q": (wz, xy)}


@dataclass(frozen=True)
class ExchangePlan:
    relation: Relation
    case: int
    needed: frozenset[PluckerIndex]


def plan_exchange(members: frozenset[PluckerIndex], removed: PluckerIndex, added: PluckerIndex,
                  cell: Cell) -> tuple[ExchangePlan | None, list[frozenset[PluckerIndex]]]:
    """Find an admissible mutation case for removed -> added.

    Returns (plan, alternatives).  When no case applies, ``alternatives`` lists
    sets of variables whose presence would make the exchange admissible.
    """
    have = members | {EMPTY}
    terms = _exchange_relation(cell, removed, added)
    cross, p, q = terms["cross"], terms["p"], terms["q"]
    nz = cell.nonzero
    wants: list[frozenset[PluckerIndex]] = []
    if added in have:
        raise MutationError(f"{added} is already a member")
    if removed not in have:
        raise MutationError(f"{removed} is not a member")
    pair = {removed, added}
    if pair == set(cross):
        h1, h2 = added, removed
        zp = not (nz(p[0]) and nz(p[1]))
        zq = not (nz(q[0]) and nz(q[1]))
        if zp and zq:
            raise MutationError(f"both products vanish for {removed} -> {added}")
        if not zp and not zq:
            need = frozenset(p + q)
            rel = Relation((h1, h2, p[0], p[1], q[0], q[1]))
            if need <= have:
                return ExchangePlan(rel, 1, need), []
            wants.append(need - have)
            return None, wants
        zero_prod, other = (p, q) if zp else (q, p)
        rel = Relation((h1, h2, zero_prod[0], zero_prod[1], other[0], other[1]),
                       (False, False, not nz(zero_prod[0]), not nz(zero_prod[1]), False, False))
        need = frozenset(other)
        if need <= have:
            return ExchangePlan(rel, 2, need), []
        wants.append(need - have)
        return None, wants
    for mine, theirs in ((p, q), (q, p)):
        if pair == set(mine):
            if nz(theirs[0]) and nz(theirs[1]):
                raise MutationError(f"{removed} -> {added} is not an exchange: the other product is nonzero")
            h5, h6 = added, removed
            rel = Relation((cross[0], cross[1], theirs[0], theirs[1], h5, h6),
                           (False, False, not nz(theirs[0]), not nz(theirs[1]), False, False))
            need = frozenset(cross)
            if need <= have:
                return ExchangePlan(rel, 3, need), []
            wants.append(need - have)
            return None, wants
    raise MutationError(f"{removed} -> {added} fits no relation")  # pragma: no cover


# ---------------------------------------------------------------------------
# TP-diagrams
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TPDiagram:
    """A set of Plucker variables drawn in the shape of ``diagram``.

    ``members`` never contains the empty index, which is always implicitly present.
    """

    diagram: LeDiagram
    members: frozenset[PluckerIndex]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(m for m in self.members if not m.is_empty()))

    def __contains__(self, idx: PluckerIndex) -> bool:
        return idx.is_empty() or idx in self.members

    def __len__(self) -> int:
        return len(self.members)

    def with_members(self, members: Iterable[PluckerIndex]) -> "TPDiagram":
        return TPDiagram(self.diagram, frozenset(members))

    def basis(self) -> frozenset[PluckerIndex]:
        """Members plus Delta_{empty,empty}."""
        return self.members | {EMPTY}

    @cached_property
    def by_position(self) -> dict[tuple[int, int], list[PluckerIndex]]:
        out: dict[tuple[int, int], list[PluckerIndex]] = {}
        for m in sorted(self.members):
            out.setdefault(m.position, []).append(m)
        return out

    def at(self, pos: tuple[int, int]) -> list[PluckerIndex]:
        return self.by_position.get(pos, [])

    def position_conflicts(self) -> list[tuple[int, int]]:
        return [p for p, ms in self.by_position.items() if len(ms) > 1]

    def nearest(self, pos: tuple[int, int], direction: str) -> tuple[int, int] | None:
        """The nearest occupied position strictly N, S, E or W of pos."""
        r, c = pos
        best = None
        for (rr, cc) in self.by_position:
            if direction == "N" and cc == c and rr < r and (best is None or rr > best[0]):
                best = (rr, cc)
            elif direction == "S" and cc == c and rr > r and (best is None or rr < best[0]):
                best = (rr, cc)
            elif direction == "W" and rr == r and cc < c and (best is None or cc > best[1]):
                best = (rr, cc)
            elif direction == "E" and rr == r and cc > c and (best is None or cc < best[1]):
                best = (rr, cc)
        return best

    def render(self) -> str:
        """Grid with one '{X|Y}' cell per box plus a legend line."""
        d = self.diagram
        cells = []
        width = 1
        for r in range(1, d.k + 1):
            row = []
            for c in range(1, d.shape[r - 1] + 1):
                ms = self.at((r, c))
                txt = "/".join("{" + "".join(map(str, m.X)) + "|" + "".join(map(str, m.Y)) + "}" for m in ms) or "."
                row.append(txt)
                width = max(width, len(txt))
            cells.append(row)
        lines = [" ".join(t.ljust(width) for t in row).rstrip() for row in cells]
        lines.append("legend: {X|Y} at row max X, column max Y is Delta_{X,Y}; Delta_{|} is implicit")
        return "\n".join(lines)


def canonical_tp_diagram(diagram: LeDiagram) -> TPDiagram:
    """Label every dot along its maximal cover chain."""
    members = []
    for dot in diagram.sorted_dots():
        chain = list(reversed(diagram.cover_chain(dot)))
        members.append(PluckerIndex(tuple(r for r, _ in chain), tuple(c for _, c in chain)))
    return TPDiagram(diagram, frozenset(members))


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------


@dataclass
class MutationTrace:
    initial: frozenset[PluckerIndex]
    steps: list[MutationStep] = field(default_factory=list)
    snapshot_every: int = 32
    snapshots: dict[int, frozenset[PluckerIndex]] = field(default_factory=dict)
    final: frozenset[PluckerIndex] | None = None

    def append(self, step: MutationStep, state_after: frozenset[PluckerIndex]) -> None:
        self.steps.append(step)
        if len(self.steps) % self.snapshot_every == 0:
            self.snapshots[len(self.steps)] = state_after
        self.final = state_after

    def extend(self, other: "MutationTrace") -> None:
        for step in other.steps:
            state = replay_step(self.final if self.final is not None else self.initial, step)
            self.append(step, state)

    @property
    def current(self) -> frozenset[PluckerIndex]:
        return self.final if self.final is not None else self.initial

    def replay(self, start: frozenset[PluckerIndex] | None = None) -> frozenset[PluckerIndex]:
        state = self.initial if start is None else start
        for step in self.steps:
            state = replay_step(state, step)
        return state

    def reversed(self) -> "MutationTrace":
        out = MutationTrace(self.current)
        for step in reversed(self.steps):
            inv = step.inverse()
            out.append(inv, replay_step(out.current, inv))
        return out

    def relations(self) -> list[Relation]:
        return [s.relation for s in self.steps]

    def to_jsonl(self) -> str:
        return "\n".join(json.dumps(s.to_json()) for s in self.steps)

    @classmethod
    def from_jsonl(cls, initial: Iterable[PluckerIndex], text: str) -> "MutationTrace":
        trace = cls(frozenset(initial))
        for line in text.splitlines():
            if line.strip():
                step = MutationStep.from_json(json.loads(line))
                trace.append(step, replay_step(trace.current, step))
        return trace


def replay_step(state: frozenset[PluckerIndex], step: MutationStep) -> frozenset[PluckerIndex]:
    if step.removed not in state:
        raise MutationError(f"replay: {step.removed} missing")
    if step.added in state:
        raise MutationError(f"replay: {step.added} already present")
    return (state - {step.removed}) | {step.added}


# ---------------------------------------------------------------------------
# The mutation engine
# ---------------------------------------------------------------------------


class Mutator:
    """Applies verified exchanges to a member set and records them.

    ``check`` is the cell whose network decides vanishing and verifies
    relations.  ``verify`` turns on the symbolic identity check per step.
    """

    def __init__(self, members: Iterable[PluckerIndex], check: Cell, verify: bool = True,
                 trace: MutationTrace | None = None):
        self.members = frozenset(m for m in members if not m.is_empty())
        self.check = check
        self.verify = verify
        self.trace = trace if trace is not None else MutationTrace(self.members)

    def plan(self, removed: PluckerIndex, added: PluckerIndex):
        return plan_exchange(self.members, removed, added, self.check)

    def can_exchange(self, removed: PluckerIndex, added: PluckerIndex) -> bool:
        try:
            plan, _ = self.plan(removed, added)
        except MutationError:
            return False
        return plan is not None

    def exchange(self, removed: PluckerIndex, added: PluckerIndex, kind: str = "generic",
                 note: str = "") -> MutationStep:
        plan, wants = self.plan(removed, added)
        if plan is None:
            missing = ", ".join("{" + ", ".join(map(str, sorted(w))) + "}" for w in wants)
            raise MutationError(f"{kind} {removed} -> {added}: missing {missing}")
        if not self.check.nonzero(added):
            raise MutationError(f"{kind}: {added} vanishes in the cell")
        if self.verify and not plan.relation.holds(self.check):
            raise MutationError(f"relation {plan.relation.render()} fails symbolically")
        step = MutationStep(kind, removed, added, plan.relation, plan.case, note)
        self.members = (self.members - {removed}) | {added}
        self.trace.append(step, self.members)
        return step

    def apply(self, step: MutationStep) -> MutationStep:
        return self.exchange(step.removed, step.added, step.kind, step.note)

    def state(self, diagram: LeDiagram) -> TPDiagram:
        return TPDiagram(diagram, self.members)


def mutate(state: TPDiagram, step: MutationStep, cell: Cell | None = None, verify: bool = True) -> TPDiagram:
    """Re-validate one recorded step against ``cell`` and apply it."""
    cell = cell or Cell(state.diagram)
    m = Mutator(state.members, cell, verify)
    m.exchange(step.removed, step.added, step.kind, step.note)
    return state.with_members(m.members)


# ---------------------------------------------------------------------------
# Rank-lines
# ---------------------------------------------------------------------------


def dominates(a: PluckerIndex, b: PluckerIndex) -> bool:
    r = a.rank
    return b.rank > r and b.X[:r] == a.X and b.Y[:r] == a.Y


def dominated_or_equal(a: PluckerIndex, b: PluckerIndex) -> bool:
    return a == b or dominates(a, b)


def trim(idx: PluckerIndex, anchor: tuple[int, int]) -> PluckerIndex:
    """Drop the anchor's row and column when both are present."""
    a, b = anchor
    if a in idx.X and b in idx.Y:
        return PluckerIndex(tuple(x for x in idx.X if x != a), tuple(y for y in idx.Y if y != b))
    return idx


class RankLines:
    """Rank-line geometry of a TP-diagram, optionally restricted to an anchor."""

    def __init__(self, state: TPDiagram, anchor: PluckerIndex | None = None):
        self.state = state
        self.anchor = anchor

    def in_line(self, idx: PluckerIndex) -> bool:
        return self.anchor is None or dominated_or_equal(self.anchor, idx)

    def line(self, k: int) -> list[PluckerIndex]:
        return sorted((m for m in self.state.members if m.rank == k and self.in_line(m)),
                      key=lambda m: m.position)

    def max_rank(self) -> int:
        ranks = [m.rank for m in self.state.members if self.in_line(m)]
        return max(ranks, default=0)

    def neighbor(self, idx: PluckerIndex, direction: str) -> PluckerIndex | None:
        """Adjacent dot on the same (anchored) rank-line in a compass direction."""
        pos = self.state.nearest(idx.position, direction)
        if pos is None:
            return None
        for m in self.state.at(pos):
            if m.rank == idx.rank and self.in_line(m):
                return m
        return None

    def neighbors(self, idx: PluckerIndex) -> list[PluckerIndex]:
        return [n for d in "NSEW" if (n := self.neighbor(idx, d)) is not None]

    def components(self, k: int) -> list[list[PluckerIndex]]:
        todo = set(self.line(k))
        comps = []
        while todo:
            start = todo.pop()
            comp, stack = [start], [start]
            while stack:
                v = stack.pop()
                for w in self.neighbors(v):
                    if w in todo:
                        todo.remove(w)
                        comp.append(w)
                        stack.append(w)
            comps.append(sorted(comp, key=lambda m: m.position))
        return comps

    def nw_corners(self, k: int) -> list[PluckerIndex]:
        return [m for m in self.line(k) if self.neighbor(m, "N") is None and self.neighbor(m, "W") is None]

    def se_corners(self, k: int) -> list[PluckerIndex]:
        return [m for m in self.line(k) if self.neighbor(m, "N") is not None and self.neighbor(m, "W") is not None]

    def sw_end(self, k: int) -> PluckerIndex | None:
        line = self.line(k)
        if not line:
            return None
        return max(line, key=lambda m: (m.position[0], -m.position[1]))

    def ne_end(self, k: int) -> PluckerIndex | None:
        line = self.line(k)
        if not line:
            return None
        return min(line, key=lambda m: (m.position[0], -m.position[1]))

    def end(self, k: int, side: int) -> PluckerIndex | None:
        """side -1 is the SW-end, +1 the NE-end."""
        return self.sw_end(k) if side < 0 else self.ne_end(k)

    def is_monotone(self, k: int) -> bool:
        line = self.line(k)
        return all((p.position[0] <= q.position[0]) == (p.position[1] >= q.position[1]) or p.position == q.position
                   or (p.position[0] == q.position[0]) or (p.position[1] == q.position[1])
                   for p in line for q in line)

    def adjacent(self, p: PluckerIndex, q: PluckerIndex) -> bool:
        """Adjacency of two dots regardless of rank."""
        for d in "NSEW":
            pos = self.state.nearest(p.position, d)
            if pos is not None and pos == q.position:
                return True
        return False


def ends_connected(lines: RankLines, k: int, side: int) -> bool:
    e1, e2 = lines.end(k, side), lines.end(k + 1, side)
    if e1 is None or e2 is None:
        return False
    return dominates(e1, e2) or lines.adjacent(e1, e2)


def _anchors(state: TPDiagram) -> Iterator[PluckerIndex]:
    yield from sorted(state.members, key=lambda m: m.position)


def rklines_connected(diagram: LeDiagram) -> tuple[bool, int | None]:
    state = canonical_tp_diagram(diagram)
    lines = RankLines(state)
    for k in range(1, lines.max_rank() + 1):
        if len(lines.components(k)) > 1:
            return False, k
    return True, None


def weak_parities(state: TPDiagram, anchor: PluckerIndex) -> list[int]:
    """The parities t in {0, 1} for which the alternating end condition holds at anchor.

    With parity t, rank k uses its SW-end when k + t is odd and its NE-end otherwise.
    """
    lines = RankLines(state, anchor)
    m = lines.max_rank()
    good = []
    for t in (0, 1):
        if all(ends_connected(lines, k, side_for(k, t)) for k in range(anchor.rank, m)):
            good.append(t)
    return good


def side_for(k: int, t: int) -> int:
    return -1 if (k + t) % 2 == 1 else 1


def connectivity_failure(diagram: LeDiagram, weak: bool) -> str | None:
    """None when the (weak) connectivity condition holds, else a description of the failure."""
    ok, k = rklines_connected(diagram)
    if not ok:
        return f"the {k}-rkline is not connected"
    state = canonical_tp_diagram(diagram)
    for anchor in _anchors(state):
        lines = RankLines(state, anchor)
        m = lines.max_rank()
        if weak:
            if not weak_parities(state, anchor):
                return f"anchor {anchor}: no alternating choice of connected ends (ranks {anchor.rank}..{m})"
        else:
            for k in range(anchor.rank, m):
                for side in (-1, 1):
                    if not ends_connected(lines, k, side):
                        name = "SW" if side < 0 else "NE"
                        return f"anchor {anchor}: {name}-ends of ranks {k} and {k + 1} are not connected"
    return None


def is_connected(diagram: LeDiagram) -> bool:
    return connectivity_failure(diagram, weak=False) is None


def is_weakly_connected(diagram: LeDiagram) -> bool:
    return connectivity_failure(diagram, weak=True) is None
