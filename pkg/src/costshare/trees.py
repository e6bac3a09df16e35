"""Closed-form cost shares on trees and lines.

These never build a coalition table, which makes them useful as independent
cross-checks of the Shapley-based mechanisms.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exceptions import NotATreeError
from .graph import Instance


@dataclass(frozen=True)
class RootedTree:
    """A tree hanging from the source.

    ``edge_cost[j]`` prices the edge from ``j`` up to ``parent[j]``;
    ``depth[j]`` counts the non-source nodes from the root down to ``j``.
    """

    source: str
    parent: dict[str, str]
    edge_cost: dict[str, Fraction]
    depth: dict[str, int]

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(sorted(self.parent))

    def path(self, node: str) -> list[str]:
        """Non-source nodes from ``node`` up to the root's child."""
        out = []
        while node != self.source:
            out.append(node)
            node = self.parent[node]
        return out

    def subtree_sizes(self) -> dict[str, int]:
        size = {n: 1 for n in self.parent}
        for n in sorted(self.parent, key=self.depth.get, reverse=True):
            p = self.parent[n]
            if p != self.source:
                size[p] += size[n]
        return size


def root_tree(instance: Instance) -> RootedTree:
    """Orient an instance whose edges form a spanning tree away from the source."""
    if len(instance.edges) != len(instance.nodes) - 1:
        raise NotATreeError(
            f"a tree on {len(instance.nodes)} nodes has {len(instance.nodes) - 1} edges, "
            f"got {len(instance.edges)}"
        )
    adj = {n: [] for n in instance.nodes}
    for u, v, c in instance.edges:
        adj[u].append((v, c))
        adj[v].append((u, c))
    parent, cost, depth = {}, {}, {instance.source: 0}
    queue = deque([instance.source])
    while queue:
        u = queue.popleft()
        for v, c in sorted(adj[u]):
            if v in depth:
                continue
            depth[v] = depth[u] + 1
            parent[v] = u
            cost[v] = c
            queue.append(v)
    if len(depth) != len(instance.nodes):
        unreachable = sorted(set(instance.nodes) - set(depth))
        raise NotATreeError(f"not connected: {', '.join(unreachable)} unreachable from the source")
    del depth[instance.source]
    return RootedTree(instance.source, parent, cost, depth)


def claus_kleitman_shares(tree: RootedTree) -> dict[str, Fraction]:
    """Split each edge's cost equally among the nodes whose root path uses it."""
    size = tree.subtree_sizes()
    shares = {}
    for n in tree.nodes:
        shares[n] = sum((tree.edge_cost[j] / size[j] for j in tree.path(n)), Fraction(0))
    return shares


def savings_tree_shares(tree: RootedTree, budgets) -> dict[str, Fraction]:
    """Budget minus the node's portion of everyone's savings.

    Node j saves ``budget[j] - edge_cost[j]``; that saving is divided
    equally among the ``depth[j]`` nodes on its root path, j included.
    """
    savings = {}
    for j in tree.nodes:
        b = budgets.get(j)
        if b is None:
            raise ValueError(f"node {j} has no budget")
        b = Fraction(b)
        if b < tree.edge_cost[j]:
            raise ValueError(
                f"node {j} cannot afford its parent edge; restrict the tree to selected nodes first"
            )
        savings[j] = b - tree.edge_cost[j]
    rebate = {n: Fraction(0) for n in tree.nodes}
    for j in tree.nodes:
        portion = savings[j] / tree.depth[j]
        for i in tree.path(j):
            rebate[i] += portion
    return {n: Fraction(budgets[n]) - rebate[n] for n in tree.nodes}


def line_formula_share(costs: Sequence, i: int) -> Fraction:
    """Share of the ``i``-th node (1-based) on the line s - 1 - 2 - ... - n.

    ``costs[k - 1]`` is the cost of the edge entering node k; that edge is
    used by the ``n - k + 1`` nodes from k to the end.
    """
    n = len(costs)
    if not 1 <= i <= n:
        raise IndexError(f"node index {i} outside 1..{n}")
    return sum((Fraction(costs[k - 1]) / (n - k + 1) for k in range(1, i + 1)), Fraction(0))
