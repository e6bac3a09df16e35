"""Coalition value functions for the two mechanisms.

Coalitions are bitmasks over an ordered player tuple: bit ``k`` stands for
``players[k]``. Tables store integer numerators over the graph's ``scale``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import NamedTuple, Sequence

from .exceptions import CapExceededError
from .graph import Graph, edge_key, induced_mst_scaled

DEFAULT_MAX_COALITION_NODES = 16

CONNECTION = "connection"
SAVINGS = "savings"


@dataclass(frozen=True)
class ValueTable:
    """Dense exact table ``v(S)`` for every subset ``S`` of ``players``."""

    players: tuple[str, ...]
    numerators: tuple[int, ...]
    scale: int = 1
    flavor: str = CONNECTION

    def __post_init__(self):
        if len(self.numerators) != 1 << len(self.players):
            raise ValueError(
                f"table has {len(self.numerators)} entries, expected {1 << len(self.players)}"
            )

    @classmethod
    def from_values(cls, players, values: Sequence, flavor: str = CONNECTION) -> "ValueTable":
        values = [Fraction(v) for v in values]
        scale = 1
        for v in values:
            scale = lcm(scale, v.denominator)
        return cls(tuple(players), tuple(int(v * scale) for v in values), scale, flavor)

    def __len__(self):
        return len(self.numerators)

    def __getitem__(self, mask: int) -> Fraction:
        return Fraction(self.numerators[mask], self.scale)

    def mask(self, coalition) -> int:
        index = {p: k for k, p in enumerate(self.players)}
        m = 0
        for p in coalition:
            m |= 1 << index[p]
        return m

    def value(self, coalition) -> Fraction:
        return self[self.mask(coalition)]

    def members(self, mask: int) -> tuple[str, ...]:
        return tuple(p for k, p in enumerate(self.players) if mask >> k & 1)

    def to_dict(self) -> dict[int, Fraction]:
        return {m: self[m] for m in range(len(self))}


def check_cap(n_players: int, cap: int) -> None:
    if n_players > cap:
        raise CapExceededError(n_players, cap)


def _subset(players, mask):
    return frozenset(p for k, p in enumerate(players) if mask >> k & 1)


def steiner_value(graph: Graph, coalition, candidates) -> Fraction:
    """Cheapest tree joining ``coalition`` to the source via ``candidates``.

    Direct minimum over every ``W`` with ``coalition <= W <= candidates`` of
    the MST cost induced on ``W``; exponential in the number of optional
    nodes, used for spot checks. :func:`steiner_value_table` is the bulk path.
    """
    coalition = frozenset(coalition)
    extra = sorted(frozenset(candidates) - coalition)
    best = None
    for m in range(1 << len(extra)):
        cost = induced_mst_scaled(graph, coalition | _subset(extra, m))
        if cost is not None and (best is None or cost < best):
            best = cost
    if best is None:
        raise ValueError("coalition cannot reach the source through the candidates")
    return graph.rational(best)


def steiner_value_table(
    graph: Graph, selected, max_coalition_nodes: int = DEFAULT_MAX_COALITION_NODES
) -> ValueTable:
    """Connection values for every subset of ``selected``.

    Every subset gets its induced MST cost (infinite when disconnected),
    then a min-over-supersets sweep lets each coalition borrow any cheaper
    connected superset as Steiner intermediates.
    """
    players = tuple(sorted(selected))
    n = len(players)
    check_cap(n, max_coalition_nodes)
    size = 1 << n
    table = [None] * size
    for m in range(size):
        table[m] = induced_mst_scaled(graph, _subset(players, m))
    for k in range(n):
        bit = 1 << k
        for m in range(size):
            if not m & bit:
                sup = table[m | bit]
                if sup is not None and (table[m] is None or sup < table[m]):
                    table[m] = sup
    if size and table[size - 1] is None:
        raise ValueError("selected nodes are not all connected to the source")
    return ValueTable(players, tuple(table), graph.scale, CONNECTION)


class GStarTrace(NamedTuple):
    admitted: tuple[str, ...]
    admitting_edges: tuple[tuple[str, str], ...]
    deletions: tuple[int, ...]  # rejected edges before each admission, then after the last


def _scaled_budgets(graph: Graph, budgets):
    if budgets is None:
        return graph.budgets
    out = {}
    for n, b in budgets.items():
        out[n] = None if b is None else Fraction(b) * graph.scale
    return out


def g_star_trace(graph: Graph, subset, budgets=None) -> GStarTrace:
    """Budget-aware greedy selection, with bookkeeping.

    Starting from the source, repeatedly take the cheapest edge from the
    admitted set into ``subset``. The far node joins if its budget covers
    that edge, and the candidate edge pool is rebuilt; otherwise only that
    edge is dropped from the pool. Unlimited budgets always admit.
    ``budgets`` overrides the graph's own budgets when given.
    """
    s = graph.source
    subset = frozenset(subset)
    if s in subset:
        raise ValueError("subset must not contain the source")
    scaled = _scaled_budgets(graph, budgets)
    admitted = [s]
    inside = {s}
    via = []
    deletions = []

    def rebuild():
        return {
            (w, j, i)
            for i in inside
            for j, w in graph.adj[i].items()
            if j in subset and j not in inside
        }

    pool = rebuild()
    rejected = 0
    while pool:
        w, j, i = min(pool)
        b = scaled.get(j)
        if b is None or b >= w:
            admitted.append(j)
            inside.add(j)
            via.append(edge_key(i, j))
            deletions.append(rejected)
            rejected = 0
            pool = rebuild()
        else:
            pool.discard((w, j, i))
            rejected += 1
    deletions.append(rejected)
    return GStarTrace(tuple(admitted[1:]), tuple(via), tuple(deletions))


def g_star(graph: Graph, subset, budgets=None) -> tuple[str, ...]:
    """Nodes of ``subset`` the budget-aware greedy admits, in admission order."""
    return g_star_trace(graph, subset, budgets).admitted


def connection_cost(graph: Graph, admitted) -> Fraction:
    """MST cost of ``admitted`` plus the source, using only their own edges."""
    cost = induced_mst_scaled(graph, frozenset(admitted))
    assert cost is not None, "g_star output must be connected to the source"
    return graph.rational(cost)


def scsm_value_table(
    graph: Graph,
    selected,
    budgets=None,
    max_coalition_nodes: int = DEFAULT_MAX_COALITION_NODES,
) -> ValueTable:
    """Savings values: admitted budgets minus their own connection cost."""
    players = tuple(sorted(selected))
    n = len(players)
    check_cap(n, max_coalition_nodes)
    scaled = _scaled_budgets(graph, budgets)
    scale = graph.scale
    # fractional budget overrides can leave a non-integer scaled value
    den = 1
    for p in players:
        b = scaled.get(p)
        if b is None:
            raise ValueError(f"node {p} has no budget")
        den = lcm(den, Fraction(b).denominator)
    weight = {p: int(Fraction(scaled[p]) * den) for p in players}
    memo = {}
    numerators = []
    for m in range(1 << n):
        admitted = frozenset(g_star(graph, _subset(players, m), budgets))
        if admitted not in memo:
            cost = induced_mst_scaled(graph, admitted)
            assert cost is not None
            memo[admitted] = sum(weight[p] for p in admitted) - cost * den
        numerators.append(memo[admitted])
    return ValueTable(players, tuple(numerators), scale * den, SAVINGS)
