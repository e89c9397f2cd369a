"""Text formats for diagrams, permutations, necklaces and bases."""

from __future__ import annotations

import json
import re

from . import fixtures
from .core import (
    DecoratedPermutation,
    GrassmannNecklace,
    InputError,
    LeDiagram,
    Positroid,
    fmt_subset,
    is_matroid,
    necklace_of_matroid,
    positroid_of_necklace,
)

NAMED = {
    "example1": lambda: fixtures.EXAMPLE_ONE,
    "example2": lambda: fixtures.EXAMPLE_TWO,
    "round": lambda: fixtures.ROUND_EXAMPLE,
    "weird": lambda: fixtures.WEIRD,
    "top24": lambda: fixtures.TOP_CELL_24,
    "a7": fixtures.a7_diagram,
    "d7": fixtures.d7_diagram,
}


def parse_diagram(text: str, n: int | None = None, k: int | None = None) -> LeDiagram:
    """Rows of 'D'/'.' separated by newlines or '/', a JSON object, or '@name' for a fixture."""
    s = text.strip("\n")
    if s.startswith("@"):
        name = s[1:].strip()
        if name not in NAMED:
            raise InputError(f"unknown fixture {name!r}; known: {', '.join(sorted(NAMED))}")
        return NAMED[name]()
    if s.lstrip().startswith("{"):
        try:
            data = json.loads(s)
        except json.JSONDecodeError as exc:
            raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return LeDiagram(int(data["n"]), tuple(data["shape"]), frozenset(tuple(x) for x in data["dots"]))
    if "/" in s and "\n" not in s:
        s = s.replace("/", "\n")
    return LeDiagram.from_text(s, n=n, k=k)


def format_diagram(d: LeDiagram) -> str:
    return d.to_text()


_FIXED = re.compile(r"^(\d+)([+-])$")


def parse_decperm(text: str) -> DecoratedPermutation:
    """'3 4 1 2', with fixed points as '2+' / '2-' or via a trailing 'col: {2:+, ...}'."""
    body, _, cols = text.partition("col:")
    col: dict[int, int] = {}
    perm: list[int] = []
    pos = 0
    for tok in body.split():
        pos = body.index(tok, pos) + 1
        m = _FIXED.match(tok)
        if m:
            i = int(m.group(1))
            perm.append(i)
            col[len(perm)] = 1 if m.group(2) == "+" else -1
            if i != len(perm):
                raise InputError(f"column {pos}: colored entry {tok!r} is not a fixed point")
            continue
        if not tok.isdigit():
            raise InputError(f"column {pos}: expected a number, got {tok!r}")
        perm.append(int(tok))
    cols = cols.strip().strip("{}")
    for part in filter(None, (p.strip() for p in cols.split(","))):
        i, _, sign = part.partition(":")
        if sign.strip() not in ("+", "-") or not i.strip().isdigit():
            raise InputError(f"bad color entry {part!r}")
        col[int(i)] = 1 if sign.strip() == "+" else -1
    for i, x in enumerate(perm, start=1):
        if x == i and i not in col:
            raise InputError(f"fixed point {i} needs a color, e.g. '{i}+' or '{i}-'")
    return DecoratedPermutation(tuple(perm), col)


def format_decperm(dp: DecoratedPermutation) -> str:
    return " ".join(f"{x}{'+' if dp.col[x] > 0 else '-'}" if x == i else str(x)
                    for i, x in enumerate(dp.perm, start=1))


_SET = re.compile(r"\{([^{}]*)\}")


def _parse_sets(text: str) -> list[frozenset[int]]:
    stripped = _SET.sub("", text).strip()
    if stripped:
        raise InputError(f"unexpected text outside braces: {stripped[:20]!r}")
    out = []
    for m in _SET.finditer(text):
        inner = m.group(1).strip()
        try:
            out.append(frozenset(int(x) for x in inner.split(",") if x.strip()))
        except ValueError:
            raise InputError(f"column {m.start() + 1}: bad set {m.group(0)!r}") from None
    return out


def parse_necklace(text: str) -> GrassmannNecklace:
    sets = _parse_sets(text)
    return GrassmannNecklace(len(sets), tuple(sets))


def format_necklace(neck: GrassmannNecklace) -> str:
    return neck.render()


def parse_bases(text: str, n: int | None = None) -> Positroid:
    """A positroid given by its bases; rejected with the failing condition otherwise."""
    sets = _parse_sets(text)
    if not sets:
        raise InputError("no bases given")
    if n is None:
        n = max((max(s) for s in sets if s), default=0)
    if not is_matroid(sets, n):
        raise InputError("the sets are not the bases of a matroid (exchange axiom fails)")
    m = Positroid(n, len(sets[0]), frozenset(sets))
    neck = necklace_of_matroid(m)
    if positroid_of_necklace(neck).bases != m.bases:
        raise InputError("matroid is not a positroid: it differs from the positroid of its necklace")
    return m


def format_bases(m: Positroid) -> str:
    return " ".join(fmt_subset(b) for b in sorted(m.bases, key=lambda b: sorted(b)))
