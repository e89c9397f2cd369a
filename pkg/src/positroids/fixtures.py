"""Reference cells used by tests, the CLI and documentation.

The two worked examples are pinned down by their relation lists: the dot
sets below are the Le-diagrams whose canonical labels and mutation traces
contain every relation in EXAMPLE_ONE_RELATIONS / EXAMPLE_TWO_RELATIONS.
"""

from __future__ import annotations

from .core import LeDiagram

EXAMPLE_ONE = LeDiagram(8, (4, 4, 4, 4), frozenset({
    (1, 1), (1, 4), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4), (4, 1), (4, 2), (4, 3), (4, 4),
}))

EXAMPLE_TWO = LeDiagram(9, (4, 4, 4, 4, 4), frozenset({
    (1, 1), (1, 4), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (3, 4), (4, 2), (4, 3), (4, 4), (5, 4),
}))

# example one with a fifth row of dots in columns 1..3
ROUND_EXAMPLE = LeDiagram(9, (4, 4, 4, 4, 3), EXAMPLE_ONE.dots | {(5, 1), (5, 2), (5, 3)})

# 2x2 shape without the top-left dot
WEIRD = LeDiagram(4, (2, 2), frozenset({(1, 2), (2, 1), (2, 2)}))

TOP_CELL_24 = LeDiagram(4, (2, 2), frozenset({(1, 1), (1, 2), (2, 1), (2, 2)}))

# expected relations for the two worked examples, as 'X,Y X,Y = X,Y X,Y [+ X,Y X,Y]'
EXAMPLE_ONE_RELATIONS = [
    "134,134 123,123 = 123,134 134,123",
    "13,13 12,12 = 12,13 13,12 + 1,1 123,123",
    "12,14 1,3 = 12,13 1,4",
    "12,13 1,2 = 12,12 1,3",
    "1,1 4,2 = 4,1 1,2 + | 14,12",
    "14,12 3,2 = 13,12 4,2",
    "13,12 2,2 = 12,12 3,2",
    "12,12 2,3 = 12,13 2,2",
    "12,13 2,4 = 12,14 2,3",
    "12,14 23,34 = 2,4 123,134",
    "123,134 23,23 = 123,123 23,34",
    "123,123 34,23 = 134,123 23,23",
]

# negative controls: near-miss sweep relations that are not identities
NON_IDENTITIES = [
    "12,12 2,3 = 12,13 2,3",
    "12,13 2,4 = 12,14 2,4",
]

EXAMPLE_TWO_RELATIONS = [
    "134,123 23,12 = 123,123 34,12",
    "13,12 2,1 = 12,12 3,1 + 23,12 1,1",
    "12,14 1,3 = 12,13 1,4",
    "12,13 1,2 = 12,12 1,3",
    "1,1 2,2 = 2,1 1,2 + | 12,12",
    "12,14 23,34 = 123,134 2,4",
    "134,123 345,234 = 1345,1234 34,23",
    "34,23 23,12 = 34,12 23,23",
    "2,1 3,2 = 2,2 3,1 + 23,12 |",
    "2,2 3,3 = 2,3 3,2 + 23,23 |",
    "23,23 34,34 = 23,34 34,23",
]

ROUND_EXAMPLE_BASIS = [
    "145,123", "1,4", "23,34", "2,4", "34,23", "34,34", "3,4", "45,12", "45,23",
    "4,3", "4,4", "5,1", "5,2", "5,3", "|",
]


def a7_diagram() -> LeDiagram:
    """Top cell of Gr(2, 10): its mutable quiver part is a path on 7 vertices."""
    return LeDiagram(10, (8, 8), frozenset((r, c) for r in (1, 2) for c in range(1, 9)))


def d7_diagram() -> LeDiagram:
    """Three rows of seven; the top row keeps only columns 2 and 7.  Found by exhaustive search at n = 10."""
    dots = {(1, 2), (1, 7)} | {(r, c) for r in (2, 3) for c in range(1, 8)}
    return LeDiagram(10, (7, 7, 7), frozenset(dots))
