"""Exact Shapley allocation over a dense coalition value table."""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from .values import ValueTable


def subset_weights(n: int) -> list[int]:
    """``|S|! (n - |S| - 1)!`` for each coalition size; divide by ``n!`` for the weight."""
    return [factorial(k) * factorial(n - k - 1) for k in range(n)]


def shapley_allocate(table: ValueTable, players=None) -> dict[str, Fraction]:
    """Shapley value of every player, summed over subsets rather than orders.

    Args:
        table: values for all subsets of ``table.players``.
        players: optional player list; must be the table's players (any order).

    Returns:
        Mapping player -> exact share. The shares sum to the grand coalition value.
    """
    if players is not None and sorted(players) != sorted(table.players):
        raise ValueError("players do not match the value table")
    order = table.players
    n = len(order)
    if len(table) != 1 << n:
        raise ValueError("value table is incomplete")
    if n == 0:
        return {}
    weights = subset_weights(n)
    popcount = [0] * (1 << n)
    for m in range(1, 1 << n):
        popcount[m] = popcount[m >> 1] + (m & 1)
    v = table.numerators
    denom = factorial(n) * table.scale
    shares = {}
    for k, player in enumerate(order):
        bit = 1 << k
        total = 0
        for m in range(1 << n):
            if not m & bit:
                total += weights[popcount[m]] * (v[m | bit] - v[m])
        shares[player] = Fraction(total, denom)
    return shares
