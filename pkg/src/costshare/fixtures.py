"""The worked instances from the original mechanism write-up.

``figure1`` and ``figure3`` share one graph; the second adds budgets. Their
edge costs were recovered from the published values (coalition values
10/15/21/26, the shares, and the selected tree) rather than read off a
drawing. ``figure3``'s budget for A is only bounded below by those values
(any A >= 10 reproduces them); 10 is used.
"""
from fractions import Fraction

from .graph import Instance

_GRAPH_1_3 = (("s", "B", 7), ("A", "B", 8), ("s", "A", 10), ("A", "C", 6), ("A", "D", 5))
_TREE_2_4 = (("s", "A", 6), ("A", "B", 4), ("A", "C", 5))


def _instance(edges, budgets=None):
    nodes = sorted({u for u, _, _ in edges} | {v for _, v, _ in edges})
    return Instance(
        tuple(nodes),
        "s",
        tuple((u, v, Fraction(c)) for u, v, c in edges),
        {n: Fraction(b) for n, b in (budgets or {}).items()},
    )


def figure1() -> Instance:
    return _instance(_GRAPH_1_3)


def figure2() -> Instance:
    return _instance(_TREE_2_4)


def figure3() -> Instance:
    return _instance(_GRAPH_1_3, {"A": 10, "B": 9, "C": 7, "D": 6})


def figure4() -> Instance:
    return _instance(_TREE_2_4, {"A": 8, "B": 7, "C": 6})
