"""Straighten, refine, jump and trim: the TP-basis transformation pipeline.

One round works on a Le-diagram D_i relative to the uppermost NW-corner
alpha of its 1-rkline and ends with the canonical state of D_i minus alpha
plus one extra unique-path variable.  ``full_transform`` chains the rounds.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .core import EMPTY, InputError, LeDiagram, PluckerIndex
from .tpdiagram import (
    Cell,
    MutationError,
    MutationStep,
    MutationTrace,
    Mutator,
    RankLines,
    TPDiagram,
    canonical_tp_diagram,
    connectivity_failure,
    dominated_or_equal,
    ends_connected,
    side_for,
    trim,
    weak_parities,
)

log = logging.getLogger(__name__)

SW, NE = -1, 1


class PipelineError(RuntimeError):
    """An internal precondition of the pipeline failed."""


class NotWeaklyConnected(InputError):
    pass


# ---------------------------------------------------------------------------
# Working context
# ---------------------------------------------------------------------------


class Work:
    """Mutable context for one round: the mutator plus geometry helpers."""

    def __init__(self, diagram: LeDiagram, mut: Mutator, decide: Cell, anchor: PluckerIndex,
                 extras: Iterable[PluckerIndex] = ()):
        self.diagram = diagram
        self.mut = mut
        self.decide = decide
        self.anchor = anchor
        self.extras = frozenset(extras)
        self.notes: list[str] = []

    @property
    def geom(self) -> TPDiagram:
        return TPDiagram(self.diagram, self.mut.members - self.extras)

    @property
    def lines(self) -> RankLines:
        return RankLines(self.geom, self.anchor)

    @property
    def a(self) -> int:
        return self.anchor.X[0]

    @property
    def b(self) -> int:
        return self.anchor.Y[0]

    def exchange(self, removed, added, kind, note="") -> MutationStep:
        return self.mut.exchange(removed, added, kind, note)

    def dominated(self) -> list[PluckerIndex]:
        return sorted((m for m in self.geom.members if dominated_or_equal(self.anchor, m)),
                      key=lambda m: m.position)


# ---------------------------------------------------------------------------
# Local moves
# ---------------------------------------------------------------------------


def fold_target(lines: RankLines, idx: PluckerIndex) -> PluckerIndex:
    """Fold at an SE-corner: take rows from the N-neighbor and columns from the W-neighbor."""
    up, left = lines.neighbor(idx, "N"), lines.neighbor(idx, "W")
    if up is None or left is None:
        raise PipelineError(f"{idx} is not an SE-corner")
    if up.Y != idx.Y or left.X != idx.X or len(set(idx.X) - set(up.X)) != 1 or len(set(idx.Y) - set(left.Y)) != 1:
        raise PipelineError(f"fold at {idx}: neighbors {up}, {left} are not smooth")
    return PluckerIndex(up.X, left.Y)


def push_target(prev: PluckerIndex, v: PluckerIndex, side: int, a: int, b: int) -> PluckerIndex:
    """Push v away from its block; prev is its block neighbor toward alpha_k."""
    if side == SW:
        return PluckerIndex(tuple(x for x in prev.X if x != a), v.Y[:-1])
    return PluckerIndex(v.X[:-1], tuple(y for y in prev.Y if y != b))


def fold_at(state: TPDiagram, idx: PluckerIndex, anchor: PluckerIndex | None = None,
            cell: Cell | None = None) -> tuple[TPDiagram, MutationStep]:
    cell = cell or Cell(state.diagram)
    new = fold_target(RankLines(state, anchor), idx)
    m = Mutator(state.members, cell)
    step = m.exchange(idx, new, "fold")
    return state.with_members(m.members), step


def push(state: TPDiagram, idx: PluckerIndex, side: int, anchor: PluckerIndex,
         cell: Cell | None = None) -> tuple[TPDiagram, MutationStep]:
    """Push one block dot; its neighbor toward the block corner must be present."""
    cell = cell or Cell(state.diagram)
    lines = RankLines(state, anchor)
    prev = lines.neighbor(idx, "N" if side == SW else "W")
    if prev is None:
        raise PipelineError(f"{idx} has no block neighbor to push against")
    new = push_target(prev, idx, side, anchor.X[0], anchor.Y[0])
    m = Mutator(state.members, cell)
    step = m.exchange(idx, new, "push")
    return state.with_members(m.members), step


def pull(state: TPDiagram, push_step: MutationStep, cell: Cell | None = None) -> tuple[TPDiagram, MutationStep]:
    cell = cell or Cell(state.diagram)
    m = Mutator(state.members, cell)
    step = m.exchange(push_step.added, push_step.removed, "pull")
    return state.with_members(m.members), step


# ---------------------------------------------------------------------------
# Straightening
# ---------------------------------------------------------------------------


def choose_anchor(diagram: LeDiagram) -> PluckerIndex:
    """The uppermost NW-corner of the 1-rkline, asserted to be the rightmost too."""
    state = canonical_tp_diagram(diagram)
    corners = RankLines(state).nw_corners(1)
    if not corners:
        raise PipelineError("no NW-corner on the 1-rkline")
    top = min(corners, key=lambda m: (m.position[0], -m.position[1]))
    right = max(corners, key=lambda m: (m.position[1], -m.position[0]))
    if top != right:
        raise PipelineError(f"uppermost corner {top} differs from rightmost corner {right}")
    return top


def _straighten(w: Work) -> None:
    m = w.lines.max_rank()
    for k in range(m, 1, -1):
        guard = 0
        while True:
            corners = w.lines.se_corners(k)
            if not corners:
                break
            guard += 1
            if guard > 500:
                raise PipelineError("straightening does not terminate")
            cur = corners[0]
            while cur is not None:
                lines = w.lines
                new = fold_target(lines, cur)
                w.exchange(cur, new, "fold")
                below = [x for x in w.geom.at(new.position)
                         if x != new and x.rank == cur.rank - 1 and dominated_or_equal(w.anchor, x)]
                cur = below[0] if below else None
                if cur is not None and cur.rank < 2:
                    raise PipelineError(f"fold chain reached the anchor at {new.position}")
            clash = w.geom.position_conflicts()
            if clash:
                raise PipelineError(f"fold chain left two variables at {clash}")


def straighten(state: TPDiagram, anchor: PluckerIndex, cell: Cell | None = None) -> tuple[TPDiagram, MutationTrace]:
    cell = cell or Cell(state.diagram)
    mut = Mutator(state.members, cell)
    w = Work(state.diagram, mut, cell, anchor)
    _straighten(w)
    return state.with_members(mut.members), mut.trace


# ---------------------------------------------------------------------------
# Blocks
# ---------------------------------------------------------------------------


@dataclass
class Block:
    k: int
    corner: PluckerIndex
    sw: list[PluckerIndex]
    ne: list[PluckerIndex]

    def side(self, s: int) -> list[PluckerIndex]:
        return self.sw if s == SW else self.ne


@dataclass
class BlockView:
    anchor: PluckerIndex
    m: int
    blocks: dict[int, Block]
    lblock: dict[tuple[int, int], list[PluckerIndex]]
    sblock: dict[tuple[int, int], list[PluckerIndex]]
    dot_swappable: dict[PluckerIndex, bool]
    dot_uploadable: dict[PluckerIndex, bool]
    conditions: dict[PluckerIndex, PluckerIndex]
    upload_conditions: dict[PluckerIndex, PluckerIndex]
    helpers: dict[PluckerIndex, PluckerIndex | None]

    def swappable(self, k: int, side: int) -> bool:
        return all(self.dot_swappable[v] for v in self.lblock[(k, side)])

    def uploadable(self, k: int, side: int) -> bool:
        return all(self.dot_uploadable[v] for v in self.blocks[k].side(side))

    def minimal_swappable(self, side: int) -> int:
        for k in range(2, self.m + 1):
            if self.swappable(k, side):
                return k
        return self.m + 1

    @property
    def k1(self) -> int:
        return self.minimal_swappable(SW)

    @property
    def k2(self) -> int:
        return self.minimal_swappable(NE)

    def summary(self) -> dict:
        out = {}
        for k, blk in self.blocks.items():
            for s, name in ((SW, "SW"), (NE, "NE")):
                out[f"{k}-{name}"] = {
                    "dots": [str(v) for v in blk.side(s)],
                    "lblock": [str(v) for v in self.lblock[(k, s)]],
                    "swappable": self.swappable(k, s),
                    "uploadable": self.uploadable(k, s),
                }
        return out


def blocks_of(lines: RankLines) -> dict[int, Block]:
    out = {}
    for k in range(2, lines.max_rank() + 1):
        line = lines.line(k)
        corners = lines.nw_corners(k)
        if len(corners) != 1:
            raise PipelineError(f"{k}/alpha-rkline has {len(corners)} NW-corners")
        c = corners[0]
        r0, c0 = c.position
        sw = sorted((v for v in line if v.position[1] == c0 and v.position[0] > r0), key=lambda v: v.position[0])
        ne = sorted((v for v in line if v.position[0] == r0 and v.position[1] > c0), key=lambda v: v.position[1])
        if len(sw) + len(ne) + 1 != len(line):
            raise PipelineError(f"{k}/alpha-rkline is not L-shaped")
        out[k] = Block(k, c, sw, ne)
    return out


def _classify(w: Work, blocks: dict[int, Block]) -> BlockView:
    a, b = w.a, w.b
    m = max(blocks, default=1)
    nz = w.decide.nonzero
    lblock, sblock = {}, {}
    swap, upl, cond, ucond = {}, {}, {}, {}
    for k, blk in blocks.items():
        nxt = blocks.get(k + 1)
        for s in (SW, NE):
            dots = blk.side(s)
            if nxt is None:
                lb = list(dots)
            elif s == SW:
                lb = [v for v in dots if v.position[0] >= nxt.corner.position[0]]
            else:
                lb = [v for v in dots if v.position[1] >= nxt.corner.position[1]]
            lblock[(k, s)] = lb
            sblock[(k, s)] = [v for v in dots if v not in lb]
            chain = [blk.corner] + dots
            for prev, v in zip(chain, chain[1:]):
                if s == SW:
                    h = PluckerIndex(tuple(x for x in prev.X if x != a) + (v.X[-1],), v.Y)
                else:
                    h = PluckerIndex(v.X, tuple(y for y in prev.Y if y != b) + (v.Y[-1],))
                u = push_target(prev, v, s, a, b)
                cond[v], ucond[v] = h, u
                swap[v] = not nz(h)
                upl[v] = nz(u)
    helpers = {}
    for v, ok in swap.items():
        if ok:
            continue
        nxt = blocks.get(v.rank + 1)
        cands = [] if nxt is None else [u for u in nxt.sw + nxt.ne if ucond.get(u) == cond[v]]
        helpers[v] = cands[0] if cands else None
    return BlockView(w.anchor, m, blocks, lblock, sblock, swap, upl, cond, ucond, helpers)


def classify_blocks(state: TPDiagram, anchor: PluckerIndex, cell: Cell | None = None) -> BlockView:
    cell = cell or Cell(state.diagram)
    w = Work(state.diagram, Mutator(state.members, cell), cell, anchor)
    return _classify(w, blocks_of(w.lines))


# ---------------------------------------------------------------------------
# Planner
# ---------------------------------------------------------------------------

Vertex = tuple[int, int]  # (column in {-1, 0, 1}, rank)


@dataclass
class PlannerGraph:
    m: int
    k1: int
    k2: int
    t: int
    vertices: set[Vertex]
    edges: set[tuple[Vertex, Vertex]]
    deleted: list[Vertex]
    pushes: list[tuple[int, int, str]]  # (side, rank, "block" | "lblock")
    added_edges: list[tuple[Vertex, Vertex]] = field(default_factory=list)

    def successors(self, v: Vertex) -> list[Vertex]:
        return sorted(h for (t, h) in self.edges if t == v)

    def hamiltonian_paths(self, limit: int = 50) -> list[list[Vertex]]:
        start = (0, 1)
        found: list[list[Vertex]] = []

        def rec(path: list[Vertex], seen: set[Vertex]) -> None:
            if len(found) >= limit:
                return
            if len(path) == len(self.vertices):
                if path[-1][1] == self.m:
                    found.append(list(path))
                return
            for nxt in self.successors(path[-1]):
                if nxt not in seen:
                    seen.add(nxt)
                    path.append(nxt)
                    rec(path, seen)
                    path.pop()
                    seen.remove(nxt)

        if start in self.vertices:
            rec([start], {start})
        return found

    def hamiltonian_path(self) -> list[Vertex] | None:
        paths = self.hamiltonian_paths(limit=1)
        return paths[0] if paths else None

    def to_json(self) -> dict:
        return {
            "m": self.m, "k1": self.k1, "k2": self.k2, "t": self.t,
            "vertices": sorted(map(list, self.vertices)),
            "edges": sorted([list(a), list(b)] for a, b in self.edges),
            "deleted": sorted(map(list, self.deleted)),
            "pushes": [list(p) for p in self.pushes],
            "implied_edges": sorted([list(a), list(b)] for a, b in self.added_edges),
        }


def build_planner(m: int, k1: int, k2: int, t: int, conn: Callable[[int, int], bool],
                  decide: bool = True) -> PlannerGraph:
    """Grid graph on <column, rank>; conn(side, k) says the side-ends of ranks k, k+1 are connected.

    The rules are written for k1 <= k2; the other case is the mirror image with t flipped.
    With ``decide=False`` neither the k1 nor the k2 block is pushed.
    """
    flip = k1 > k2
    if flip:
        k1, k2, lt = k2, k1, 1 - t
        lconn = lambda s, k: conn(-s, k)
    else:
        lt, lconn = t, conn
    par = lambda x: x % 2
    V: set[Vertex] = {(0, k) for k in range(1, m + 1)}
    V |= {(SW, k) for k in range(k1, m + 1)}
    V |= {(NE, k) for k in range(k2, m + 1)}
    E: set[tuple[Vertex, Vertex]] = set()
    pushes: list[tuple[int, int, str]] = []
    deleted: list[Vertex] = []
    if k1 == 2:
        E.add(((0, 1), (SW, 2)))
    if k2 == 2:
        E.add(((0, 1), (NE, 2)))
    for k in range(k1, m):
        if lconn(SW, k):
            E.add(((SW, k), (SW, k + 1)))
    for k in range(k2, m):
        if lconn(NE, k):
            E.add(((NE, k), (NE, k + 1)))
    for k in range(1, k1 - 1):
        E.add(((0, k), (0, k + 1)))
    for k in range(1, m):
        s = side_for(k, lt)
        if (s, k) in V and (s, k + 1) in V:
            E.add(((s, k), (s, k + 1)))
    if k1 <= m and decide:
        if k1 == k2:
            if par(k1) == par(lt):
                pushes.append((SW, k1, "lblock"))
                deleted.append((SW, k1))
            else:
                pushes.append((NE, k1, "lblock"))
                deleted.append((NE, k1))
            E.add(((0, k1 - 1), (0, k1)))
        else:
            if par(k1) == par(lt):
                pushes.append((SW, k1, "block"))
                deleted.append((SW, k1))
            for k in range(max(1, k1 - 1), k2):
                if par(k) == par(lt):
                    E.add(((0, k), (0, k + 1)))
            if k2 <= m and par(k2) != par(lt):
                pushes.append((NE, k2, "block"))
                deleted.append((NE, k2))
    V -= set(deleted)
    E = {(x, y) for (x, y) in E if x in V and y in V}
    added: list[tuple[Vertex, Vertex]] = []
    for k in range(1, m):
        if (SW, k + 1) not in V and (NE, k + 1) not in V:
            e = ((0, k), (0, k + 1))
            if e not in E:
                E.add(e)
                added.append(e)
    for k in range(1, m + 1):
        present = [s for s in (SW, 0, NE) if (s, k) in V]
        if par(k) != par(lt):
            present.reverse()
        for x, y in zip(present, present[1:]):
            E.add(((x, k), (y, k)))
    if flip:
        mir = lambda v: (-v[0], v[1])
        V = {mir(v) for v in V}
        E = {(mir(x), mir(y)) for x, y in E}
        deleted = [mir(v) for v in deleted]
        pushes = [(-s, k, kind) for s, k, kind in pushes]
        added = [(mir(x), mir(y)) for x, y in added]
        k1, k2 = k2, k1
    return PlannerGraph(m, k1, k2, t, V, E, deleted, pushes, added)


# ---------------------------------------------------------------------------
# Refining
# ---------------------------------------------------------------------------


class Refiner:
    """Pushes blocks and remembers how to undo each push."""

    def __init__(self, w: Work, view: BlockView):
        self.w = w
        self.view = view
        self.pushed: dict[tuple[int, int], list[MutationStep]] = {}

    def chain(self, k: int, side: int) -> list[PluckerIndex]:
        blk = self.view.blocks[k]
        return [blk.corner] + blk.side(side)

    def push_dots(self, k: int, side: int, count: int | None = None, note: str = "") -> list[MutationStep]:
        """Push the last ``count`` dots of a block side, outermost first."""
        chain = self.chain(k, side)
        done = self.pushed.setdefault((k, side), [])
        already = {s.removed for s in done}
        todo = [v for v in chain[1:] if v not in already]
        if count is not None:
            todo = todo[len(todo) - count:] if count else []
        steps = []
        for v in reversed(todo):
            prev = chain[chain.index(v) - 1]
            new = push_target(prev, v, side, self.w.a, self.w.b)
            step = self.w.exchange(v, new, "push", note)
            done.append(step)
            steps.append(step)
        return steps

    def pull_back(self, k: int, side: int, count: int | None = None, note: str = "") -> list[MutationStep]:
        done = self.pushed.get((k, side), [])
        n = len(done) if count is None else min(count, len(done))
        steps = []
        for _ in range(n):
            push_step = done.pop()
            steps.append(self.w.exchange(push_step.added, push_step.removed, "pull", note))
        return steps

    def pushed_dots(self, k: int, side: int) -> list[PluckerIndex]:
        return [s.removed for s in self.pushed.get((k, side), [])]


def _choose_parity(w: Work) -> int:
    options = weak_parities(canonical_tp_diagram(w.diagram), w.anchor)
    if not options:
        raise NotWeaklyConnected(f"anchor {w.anchor}: consecutive rank-lines are not linked at alternating ends")
    return options[0]


def _refine(w: Work, t: int) -> tuple[Refiner, list[PlannerGraph]]:
    """Push the unswappable blocks; return candidate planners, deletion-free first.

    The planner's own pushes are not applied here (see ``apply_planner``).
    """
    view = _classify(w, blocks_of(w.lines))
    ref = Refiner(w, view)
    m = view.m
    if m <= 1:
        return ref, [build_planner(1, 2, 2, t, lambda s, k: False)]
    k1, k2 = view.k1, view.k2
    for k in range(2, m + 1):
        for s in (SW, NE):
            if not view.swappable(k, s) and k > (k1 if s == SW else k2):
                w.notes.append(f"rank {k} {'SW' if s == SW else 'NE'}-block unswappable above the minimal swappable rank")
    for side, kk in ((SW, k1), (NE, k2)):
        top = min(kk, m)
        if kk <= m and not view.uploadable(kk, side):
            w.notes.append(f"minimal swappable {'SW' if side == SW else 'NE'}-block {kk} is not uploadable")
            top = kk - 1
        for k in range(top, 1, -1):
            if view.blocks[k].side(side):
                ref.push_dots(k, side)
        if top == kk:
            ref.pull_back(kk, side)
    lines = w.lines
    conn = lambda s, k: ends_connected(lines, k, s)
    free = build_planner(m, k1, k2, t, conn, decide=False)
    ruled = build_planner(m, k1, k2, t, conn)
    out = [free] if free.hamiltonian_path() is not None else []
    if ruled.pushes or not out:
        out.append(ruled)
    return ref, out


def apply_planner(ref: Refiner, planner: PlannerGraph) -> None:
    for side, k, kind in planner.pushes:
        if kind == "block":
            ref.push_dots(k, side)
        else:
            ref.push_dots(k, side, len(ref.view.lblock[(k, side)]))


def refine(state: TPDiagram, anchor: PluckerIndex, cell: Cell | None = None, t: int | None = None):
    cell = cell or Cell(state.diagram)
    mut = Mutator(state.members, cell)
    w = Work(state.diagram, mut, cell, anchor)
    t = _choose_parity(w) if t is None else t
    ref, planners = _refine(w, t)
    planner = planners[-1]
    apply_planner(ref, planner)
    return state.with_members(mut.members), mut.trace, planner


# ---------------------------------------------------------------------------
# Jumping
# ---------------------------------------------------------------------------


class Jumper:
    def __init__(self, w: Work, ref: Refiner):
        self.w = w
        self.ref = ref
        self.current = w.anchor

    def jump(self, target: PluckerIndex) -> None:
        if target == self.current:
            return
        new = trim(target, (self.w.a, self.w.b))
        if self.w.mut.can_exchange(self.current, new):
            self.w.exchange(self.current, new, "jump")
        else:
            self._enabled_jump(target, new)
        self.current = target

    def _enabled_jump(self, target: PluckerIndex, new: PluckerIndex) -> None:
        """Temporarily push block segments until the jump becomes admissible."""
        view = self.ref.view
        avoid = {self.current, target}
        for k in sorted(view.blocks):
            for side in (NE, SW):
                chain = self.ref.chain(k, side)
                live = [v for v in chain[1:] if v in self.w.mut.members and v not in avoid]
                if not live or any(v in avoid for v in chain[chain.index(live[0]):]):
                    continue
                done = []
                try:
                    for v in reversed(live):
                        prev = chain[chain.index(v) - 1]
                        step = self.w.exchange(v, push_target(prev, v, side, self.w.a, self.w.b), "push", "enable")
                        done.append(step)
                        if self.w.mut.can_exchange(self.current, new):
                            break
                except MutationError:
                    pass
                if self.w.mut.can_exchange(self.current, new):
                    self.w.exchange(self.current, new, "jump")
                    for step in reversed(done):
                        self.w.exchange(step.added, step.removed, "pull", "enable")
                    return
                for step in reversed(done):
                    self.w.exchange(step.added, step.removed, "pull", "undo")
        self.w.exchange(self.current, new, "jump")  # raises with the missing variables


def _row_order(w: Work, ref: Refiner, k: int) -> list[PluckerIndex]:
    """Live dots of block k from its SW-end through alpha_k to its NE-end."""
    blk = ref.view.blocks[k]
    live = lambda vs: [v for v in vs if v in w.mut.members]
    return list(reversed(live(blk.sw))) + [blk.corner] + live(blk.ne)


def _execute(w: Work, ref: Refiner, planner: PlannerGraph, path: list[Vertex]) -> None:
    jp = Jumper(w, ref)
    rows: list[list[Vertex]] = []
    for v in path[1:]:
        if rows and rows[-1][-1][1] == v[1]:
            rows[-1].append(v)
        else:
            rows.append([v])
    for i, seg in enumerate(rows):
        k = seg[0][1]
        order = _row_order(w, ref, k)
        ci = order.index(ref.view.blocks[k].corner)
        place = {SW: 0, 0: ci, NE: len(order) - 1}
        start, stop = place[seg[0][0]], place[seg[-1][0]]
        step = 1 if stop >= start else -1
        visit = order[start:stop + step:step] if stop + step >= 0 else order[start::step]
        covered = set(visit)
        exits_mid = seg[-1][0] == 0 and i + 1 < len(rows) and rows[i + 1][0][0] == 0
        if exits_mid:
            for side in (NE, SW) if planner.k1 <= planner.k2 else (SW, NE):
                side_live = [v for v in _row_order(w, ref, k) if v not in covered and v != ref.view.blocks[k].corner
                             and v in ref.view.blocks[k].side(side)]
                pushed_s = [v for v in ref.pushed_dots(k, side) if v in ref.view.sblock[(k, side)]]
                if pushed_s and not side_live:
                    ref.pull_back(k, side, len(pushed_s), "mid")
                    side_live = [v for v in ref.view.blocks[k].side(side) if v in w.mut.members]
                if side_live:
                    visit += side_live
                    covered |= set(side_live)
                    break
        for v in visit:
            jp.jump(v)
    leftover = [v for v in w.dominated() if v != jp.current]
    if leftover:
        raise PipelineError(f"jumping left dominated dots {leftover}")


def _search_jumps(w: Work, ref: Refiner, budget: int = 20000) -> bool:
    """Fallback: depth-first search over jump orders (with enabling pushes) reaching a JLE state."""
    a, b = w.a, w.b
    m = ref.view.m
    seen: set = set()
    count = [0]

    def rec(current: PluckerIndex) -> bool:
        count[0] += 1
        if count[0] > budget:
            return False
        left = [v for v in w.dominated() if v != current]
        if not left:
            return current.rank == m
        key = (w.mut.members, current)
        if key in seen:
            return False
        seen.add(key)
        for v in left:
            mark = len(w.mut.trace.steps)
            state = w.mut.members
            jp = Jumper(w, ref)
            jp.current = current
            try:
                jp.jump(v)
            except (MutationError, PipelineError):
                _rollback(w, mark, state)
                continue
            if rec(v):
                return True
            _rollback(w, mark, state)
        return False

    return rec(w.anchor)


def _rollback(w: Work, mark: int, state: frozenset[PluckerIndex]) -> None:
    del w.mut.trace.steps[mark:]
    for key in [s for s in w.mut.trace.snapshots if s > mark]:
        del w.mut.trace.snapshots[key]
    w.mut.members = state
    w.mut.trace.final = state


def _jump_phase(w: Work, ref: Refiner, planners: list[PlannerGraph]) -> tuple[PluckerIndex, PlannerGraph, list[Vertex] | None]:
    """Apply a planner's pushes and execute its Hamiltonian paths, trying planners in order."""
    if planners[0].m <= 1:
        return w.anchor, planners[0], None
    mark, state = len(w.mut.trace.steps), w.mut.members
    pushed = {key: list(v) for key, v in ref.pushed.items()}
    errors = []
    for planner in planners:
        paths = planner.hamiltonian_paths()
        if not paths:
            errors.append("planner graph has no Hamiltonian path")
            continue
        for path in paths:
            try:
                apply_planner(ref, planner)
                _execute(w, ref, planner, path)
                return _final_token(w), planner, path
            except (MutationError, PipelineError) as exc:
                errors.append(str(exc))
                _rollback(w, mark, state)
                ref.pushed = {key: list(v) for key, v in pushed.items()}
    w.notes.append("planned jump order failed, searched instead: " + errors[0])
    planner = planners[-1]
    try:
        apply_planner(ref, planner)
    except MutationError:
        _rollback(w, mark, state)
        ref.pushed = {key: list(v) for key, v in pushed.items()}
    if _search_jumps(w, ref):
        return _final_token(w), planner, None
    raise PipelineError("no jump order reaches a single dominated variable: " + "; ".join(errors[:3]))


def _final_token(w: Work) -> PluckerIndex:
    dom = w.dominated()
    if len(dom) != 1:
        raise PipelineError(f"expected one dominated variable, found {dom}")
    return dom[0]


def jump_and_sweep(state: TPDiagram, anchor: PluckerIndex, cell: Cell | None = None, t: int | None = None):
    """Refine then jump; returns the JLE state, its trace, the planner and the final variable."""
    cell = cell or Cell(state.diagram)
    mut = Mutator(state.members, cell)
    w = Work(state.diagram, mut, cell, anchor)
    t = _choose_parity(w) if t is None else t
    ref, planners = _refine(w, t)
    beta, planner, _ = _jump_phase(w, ref, planners)
    return state.with_members(mut.members), mut.trace, planner, beta


# ---------------------------------------------------------------------------
# Trimming and the full transformation
# ---------------------------------------------------------------------------


def _imitation_steps(steps: list[MutationStep]) -> list[MutationStep]:
    """Round steps that move the trimmed picture: everything except jumps and undone enabling pushes."""
    out = []
    for s in steps:
        if s.kind == "jump" or s.note in ("enable", "undo"):
            continue
        out.append(s)
    return out


def _trim(w: Work, round_steps: list[MutationStep], beta: PluckerIndex, cell2: Cell,
          diagram2: LeDiagram) -> MutationTrace:
    anchor = (w.a, w.b)
    start = canonical_tp_diagram(diagram2).members
    imit = Mutator(start, cell2, verify=w.mut.verify)
    for s in _imitation_steps(round_steps):
        r, n = trim(s.removed, anchor), trim(s.added, anchor)
        if r == n:
            continue
        if r.is_empty() or n.is_empty():
            raise PipelineError(f"imitation of {s.kind} touches the deleted anchor")
        kind = "fold" if s.kind in ("fold", "push") else "pull" if s.kind == "pull" else s.kind
        try:
            imit.exchange(r, n, kind)
        except MutationError as exc:
            raise PipelineError(f"imitation of {s.kind} {s.removed}->{s.added} failed: {exc}") from exc
    jle = w.mut.members - w.extras
    if jle != imit.members | {beta}:
        raise PipelineError("trimmed JLE state does not match the imitation on the smaller diagram")
    back = imit.trace.reversed()
    for s in back.steps:
        w.exchange(s.removed, s.added, "pull" if s.kind == "push" else s.kind, "trim")
    target = start | {beta}
    if w.mut.members - w.extras != target:
        raise PipelineError("trimming did not reach the canonical state of the smaller diagram")
    return imit.trace


@dataclass
class RoundRecord:
    diagram: LeDiagram
    anchor: PluckerIndex
    parity: int
    planner: PlannerGraph | None
    path: list[Vertex] | None
    beta: PluckerIndex
    phases: dict[str, tuple[int, int]]
    notes: list[str]
    imitation: MutationTrace | None


@dataclass
class TransformResult:
    diagram: LeDiagram
    basis: frozenset[PluckerIndex]
    trace: MutationTrace
    rounds: list[RoundRecord]

    def relations(self):
        return self.trace.relations()


def run_round(diagram: LeDiagram, mut: Mutator, extras: frozenset[PluckerIndex],
              decide: Cell | None = None) -> tuple[RoundRecord, Cell]:
    decide = decide or Cell(diagram)
    anchor = choose_anchor(diagram)
    w = Work(diagram, mut, decide, anchor, extras)
    phases: dict[str, tuple[int, int]] = {}
    n0 = len(mut.trace.steps)
    _straighten(w)
    n1 = len(mut.trace.steps)
    phases["straighten"] = (n0, n1)
    lines = w.lines
    m = lines.max_rank()
    t = _choose_parity(w) if m > 1 else 0
    ref, planners = _refine(w, t)
    n2 = len(mut.trace.steps)
    phases["refine"] = (n1, n2)
    beta, planner, path = _jump_phase(w, ref, planners)
    n3 = len(mut.trace.steps)
    phases["jump"] = (n2, n3)
    diagram2 = diagram.without_dot(anchor.position)
    cell2 = Cell(diagram2)
    imitation = None
    if m > 1:
        imitation = _trim(w, mut.trace.steps[n0:n3], beta, cell2, diagram2)
    n4 = len(mut.trace.steps)
    phases["trim"] = (n3, n4)
    rec = RoundRecord(diagram, anchor, t, planner if m > 1 else None, path, beta, phases, w.notes, imitation)
    return rec, cell2


def full_transform(diagram: LeDiagram, verify: bool = True, check_connectivity: bool = True) -> TransformResult:
    """Mutate the canonical TP-basis into one made of unique-path variables."""
    if check_connectivity:
        failure = connectivity_failure(diagram, weak=True)
        if failure is not None:
            raise NotWeaklyConnected(failure)
    cell = Cell(diagram)
    mut = Mutator(canonical_tp_diagram(diagram).members, cell, verify)
    extras: set[PluckerIndex] = set()
    rounds = []
    cur = diagram
    decide = cell
    while cur.dots:
        rec, decide = run_round(cur, mut, frozenset(extras), decide)
        rounds.append(rec)
        extras.add(rec.beta)
        cur = cur.without_dot(rec.anchor.position)
    if mut.members != frozenset(extras):
        raise PipelineError("final state differs from the collected extra variables")
    return TransformResult(diagram, mut.members | {EMPTY}, mut.trace, rounds)


def direct_target_basis(diagram: LeDiagram) -> frozenset[PluckerIndex]:
    """Collect one end of the top rank-line per round without mutating anything."""
    failure = connectivity_failure(diagram, weak=True)
    if failure is not None:
        raise NotWeaklyConnected(failure)
    out = {EMPTY}
    cur = diagram
    while cur.dots:
        anchor = choose_anchor(cur)
        state = canonical_tp_diagram(cur)
        lines = RankLines(state, anchor)
        m = lines.max_rank()
        if m == 1:
            out.add(anchor)
        else:
            options = weak_parities(state, anchor)
            if not options:
                raise NotWeaklyConnected(f"anchor {anchor} in a smaller diagram")
            out.add(lines.end(m, side_for(m, options[0])))
        cur = cur.without_dot(anchor.position)
    return frozenset(out)
