"""Brute-force reference implementations.

None of these share code with the package's solvers beyond the Instance /
Graph containers: spanning and Steiner trees come from enumerating edge
subsets, Shapley values from enumerating join orders.
"""
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial


def graph_edges(graph):
    """(u, v, cost) triples of a package Graph, as exact rationals."""
    out = []
    for u in graph.adj:
        for v, w in graph.adj[u].items():
            if u < v:
                out.append((u, v, Fraction(w, graph.scale)))
    return sorted(out)


def _is_tree(edges, must_contain):
    """True if ``edges`` form a single tree whose vertex set covers ``must_contain``."""
    verts = set(must_contain)
    for u, v, _ in edges:
        verts.update((u, v))
    if len(edges) != len(verts) - 1:
        return False
    parent = {x: x for x in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def component(edges, source):
    reach = {source}
    changed = True
    while changed:
        changed = False
        for u, v, _ in edges:
            if (u in reach) != (v in reach):
                reach.update((u, v))
                changed = True
    return reach


def brute_mst_cost(edges, source):
    """Cheapest spanning tree of the source's component, by enumeration."""
    comp = component(edges, source)
    inner = [e for e in edges if e[0] in comp and e[1] in comp]
    k = len(comp) - 1
    best = None
    for subset in combinations(inner, k):
        if _is_tree(subset, comp):
            cost = sum((c for _, _, c in subset), Fraction(0))
            if best is None or cost < best:
                best = cost
    return best


def brute_steiner(edges, source, terminals):
    """Cheapest tree containing the source and every terminal, by edge-subset enumeration."""
    terminals = set(terminals)
    if not terminals:
        return Fraction(0)
    best = None
    for k in range(1, len(edges) + 1):
        for subset in combinations(edges, k):
            if _is_tree(subset, terminals | {source}):
                cost = sum((c for _, _, c in subset), Fraction(0))
                if best is None or cost < best:
                    best = cost
    return best


def permutation_shapley(players, value):
    """Average marginal contribution over all join orders; ``value`` takes a frozenset."""
    totals = {p: Fraction(0) for p in players}
    for order in permutations(players):
        joined = frozenset()
        for p in order:
            totals[p] += value(joined | {p}) - value(joined)
            joined = joined | {p}
    n_orders = factorial(len(players))
    return {p: t / n_orders for p, t in totals.items()}


def closure_selection(edges, source, subset, budgets):
    """Nodes of ``subset`` reachable through edges each admitted node can afford.

    Fixed point of "j joins if some admitted neighbour links to it with cost
    <= budget_j"; order-independent, unlike the greedy it checks.
    """
    inside = {source}
    changed = True
    while changed:
        changed = False
        for u, v, c in edges:
            for a, b in ((u, v), (v, u)):
                if a in inside and b in subset and b not in inside:
                    if budgets.get(b) is None or budgets[b] >= c:
                        inside.add(b)
                        changed = True
    inside.discard(source)
    return inside


def brute_steiner_table(edges, source, players):
    """Steiner cost of every subset of ``players``, from one pass over edge subsets.

    Each edge subset that forms a tree through the source is a candidate for
    every terminal set it covers.
    """
    players = sorted(players)
    by_cover = {frozenset(): Fraction(0)}
    for k in range(1, len(players) + 1):
        for subset in combinations(edges, k):
            if not _is_tree(subset, {source}):
                continue
            verts = {x for u, v, _ in subset for x in (u, v)}
            cover = frozenset(verts - {source})
            cost = sum((c for _, _, c in subset), Fraction(0))
            if cover not in by_cover or cost < by_cover[cover]:
                by_cover[cover] = cost
    out = {}
    for m in range(1 << len(players)):
        terms = frozenset(p for k, p in enumerate(players) if m >> k & 1)
        costs = [c for cover, c in by_cover.items() if terms <= cover]
        out[terms] = min(costs) if costs else None
    return out
