"""Instances, report profiles and exact minimum spanning trees.

Costs and budgets are :class:`fractions.Fraction` at the API boundary. A
:class:`Graph` rescales all of them to integers over one common denominator
(``graph.scale``) so the inner loops run on plain ``int`` and stay exact.
"""
from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Mapping

from .exceptions import InstanceError, ReportError


def edge_key(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u < v else (v, u)


def parse_rational(value, where: str = "value") -> Fraction:
    """Parse an integer, decimal string or ``p/q`` string exactly."""
    if isinstance(value, bool) or value is None:
        raise InstanceError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, float):
        raise InstanceError(f"{where}: binary floats are not exact, quote the number")
    if isinstance(value, (int, Decimal, Fraction)):
        out = Fraction(value)
    elif isinstance(value, str):
        try:
            out = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InstanceError(f"{where}: not a rational number: {value!r}") from None
    else:
        raise InstanceError(f"{where}: expected a number, got {type(value).__name__}")
    return out


def format_rational(q: Fraction) -> str:
    """Canonical lowest-terms text: ``"7"`` or ``"55/6"``."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Instance:
    """A weighted undirected graph with a source and per-node budgets.

    ``budgets`` maps non-source nodes to a positive rational; a node absent
    from it has an unlimited budget.
    """

    nodes: tuple[str, ...]
    source: str
    edges: tuple[tuple[str, str, Fraction], ...]
    budgets: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        nodes = tuple(sorted(self.nodes))
        if len(set(nodes)) != len(nodes):
            raise InstanceError("nodes: duplicate node id")
        if self.source not in nodes:
            raise InstanceError(f"source: {self.source!r} is not a node")
        known = set(nodes)
        seen = set()
        edges = []
        for k, (u, v, c) in enumerate(self.edges):
            where = f"edges[{k}]"
            for end in (u, v):
                if end not in known:
                    raise InstanceError(f"{where}: unknown endpoint {end!r}")
            if u == v:
                raise InstanceError(f"{where}: self-loop on {u!r}")
            c = parse_rational(c, f"{where}.cost")
            if c < 0:
                raise InstanceError(f"{where}: negative cost {format_rational(c)}")
            key = edge_key(u, v)
            if key in seen:
                raise InstanceError(f"{where}: duplicate edge {key[0]}-{key[1]}")
            seen.add(key)
            edges.append((key[0], key[1], c))
        budgets = {}
        for node, b in dict(self.budgets).items():
            if node not in known:
                raise InstanceError(f"budgets: unknown node {node!r}")
            if node == self.source:
                raise InstanceError("budgets: the source has no budget")
            if b is None:
                continue
            b = parse_rational(b, f"budgets[{node}]")
            if b <= 0:
                raise InstanceError(f"budgets[{node}]: non-positive budget {format_rational(b)}")
            budgets[node] = b
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", tuple(sorted(edges)))
        object.__setattr__(self, "budgets", budgets)

    @property
    def players(self) -> tuple[str, ...]:
        """Non-source nodes in id order."""
        return tuple(n for n in self.nodes if n != self.source)

    def adjacent_edges(self, node: str) -> tuple[tuple[str, str], ...]:
        return tuple((u, v) for u, v, _ in self.edges if node in (u, v))

    def cost(self, u: str, v: str) -> Fraction:
        key = edge_key(u, v)
        for a, b, c in self.edges:
            if (a, b) == key:
                return c
        raise KeyError(f"no edge {u}-{v}")

    def with_cost(self, u: str, v: str, cost) -> "Instance":
        """Copy of this instance with one edge re-priced."""
        key = edge_key(u, v)
        edges = [(a, b, Fraction(cost) if (a, b) == key else c) for a, b, c in self.edges]
        return Instance(self.nodes, self.source, tuple(edges), dict(self.budgets))

    def to_dict(self) -> dict:
        nodes = []
        for n in self.nodes:
            if n == self.source:
                continue
            entry = {"id": n}
            if n in self.budgets:
                entry["budget"] = format_rational(self.budgets[n])
            nodes.append(entry)
        return {
            "source": self.source,
            "nodes": nodes,
            "edges": [{"u": u, "v": v, "cost": format_rational(c)} for u, v, c in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def instance_from_dict(doc) -> Instance:
    if not isinstance(doc, dict):
        raise InstanceError("document: expected a JSON object")
    if "source" not in doc or not isinstance(doc["source"], str):
        raise InstanceError("source: missing or not a string")
    source = doc["source"]
    nodes = [source]
    budgets = {}
    for k, entry in enumerate(doc.get("nodes", [])):
        if isinstance(entry, str):
            entry = {"id": entry}
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), str):
            raise InstanceError(f"nodes[{k}]: expected an object with a string 'id'")
        nid = entry["id"]
        if nid == source:
            if entry.get("budget") is not None:
                raise InstanceError(f"nodes[{k}]: the source has no budget")
            continue
        if nid in nodes:
            raise InstanceError(f"nodes[{k}]: duplicate node id {nid!r}")
        nodes.append(nid)
        if entry.get("budget") is not None:
            budgets[nid] = parse_rational(entry["budget"], f"nodes[{k}].budget")
    edges = []
    for k, entry in enumerate(doc.get("edges", [])):
        if not isinstance(entry, dict) or not {"u", "v", "cost"} <= entry.keys():
            raise InstanceError(f"edges[{k}]: expected an object with u, v, cost")
        edges.append((entry["u"], entry["v"], parse_rational(entry["cost"], f"edges[{k}].cost")))
    return Instance(tuple(nodes), source, tuple(edges), budgets)


def parse_instance(text: str) -> Instance:
    """Parse the JSON instance format, keeping every number exact."""
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed document: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return instance_from_dict(doc)


@dataclass(frozen=True)
class ReportProfile:
    """Edges each node declares usable. Nodes not listed report truthfully."""

    declared: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        frozen = {n: frozenset(edge_key(*e) for e in es) for n, es in dict(self.declared).items()}
        object.__setattr__(self, "declared", frozen)

    @classmethod
    def truthful(cls) -> "ReportProfile":
        return cls({})

    def declares(self, node: str, edge: tuple[str, str]) -> bool:
        if node not in self.declared:
            return True
        return edge in self.declared[node]

    def replace(self, node: str, edges: Iterable) -> "ReportProfile":
        declared = dict(self.declared)
        declared[node] = frozenset(edges)
        return ReportProfile(declared)

    def to_dict(self) -> dict:
        return {n: sorted(f"{u}-{v}" for u, v in es) for n, es in sorted(self.declared.items())}


def report_from_dict(doc, instance: Instance) -> ReportProfile:
    """Resolve ``{"A": ["A-B", ...]}`` against the instance adjacency."""
    if not isinstance(doc, dict):
        raise ReportError("report: expected a JSON object")
    declared = {}
    for node, names in doc.items():
        if node not in instance.nodes:
            raise ReportError(f"report[{node}]: unknown node")
        if node == instance.source:
            raise ReportError("report: the source always declares all its edges")
        lookup = {}
        for u, v in instance.adjacent_edges(node):
            lookup[f"{u}-{v}"] = (u, v)
            lookup[f"{v}-{u}"] = (u, v)
        edges = set()
        for name in names:
            if name not in lookup:
                raise ReportError(f"report[{node}]: {name!r} is not an edge adjacent to {node}")
            edges.add(lookup[name])
        declared[node] = edges
    return ReportProfile(declared)


def parse_report(text: str, instance: Instance) -> ReportProfile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ReportError(f"malformed report: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return report_from_dict(doc, instance)


@dataclass(frozen=True)
class Graph:
    """Integer-weighted view of an (optionally report-filtered) instance.

    Attributes:
        nodes: all node ids, sorted.
        source: source id.
        adj: ``adj[u][v]`` is the scaled integer cost of edge u-v.
        scale: common denominator; the true cost is ``adj[u][v] / scale``.
        budgets: scaled integer budgets, ``None`` for unlimited.
    """

    nodes: tuple[str, ...]
    source: str
    adj: Mapping[str, Mapping[str, int]]
    scale: int
    budgets: Mapping[str, int | None]

    @classmethod
    def from_instance(cls, instance: Instance, report: ReportProfile | None = None) -> "Graph":
        scale = 1
        for _, _, c in instance.edges:
            scale = math.lcm(scale, c.denominator)
        for b in instance.budgets.values():
            scale = math.lcm(scale, b.denominator)
        adj = {n: {} for n in instance.nodes}
        for u, v, c in instance.edges:
            if report is not None and not (report.declares(u, (u, v)) and report.declares(v, (u, v))):
                continue
            w = int(c * scale)
            adj[u][v] = w
            adj[v][u] = w
        budgets = {
            n: (int(instance.budgets[n] * scale) if n in instance.budgets else None)
            for n in instance.players
        }
        return cls(
            instance.nodes,
            instance.source,
            adj,
            scale,
            budgets,
        )

    @property
    def players(self) -> tuple[str, ...]:
        return tuple(n for n in self.nodes if n != self.source)

    def cost(self, u: str, v: str) -> Fraction:
        return Fraction(self.adj[u][v], self.scale)

    def edge_set(self) -> set[tuple[str, str]]:
        return {edge_key(u, v) for u in self.adj for v in self.adj[u]}

    def rational(self, scaled: int) -> Fraction:
        return Fraction(scaled, self.scale)


def induced_graph(instance: Instance, report: ReportProfile) -> Graph:
    """Keep edge (i, j) only if both endpoints declare it; the source declares everything."""
    for node, edges in report.declared.items():
        if node not in instance.nodes:
            raise ReportError(f"report[{node}]: unknown node")
        if node == instance.source:
            raise ReportError("report: the source always declares all its edges")
        own = set(instance.adjacent_edges(node))
        extra = set(edges) - own
        if extra:
            u, v = sorted(extra)[0]
            raise ReportError(f"report[{node}]: {u}-{v} is not an edge adjacent to {node}")
    return Graph.from_instance(instance, report)


@dataclass(frozen=True)
class SpanningTreeResult:
    edges: tuple[tuple[str, str], ...]
    total_cost: Fraction
    covered: frozenset


def _prim(graph: Graph, allowed=None) -> tuple[list[tuple[str, str]], int, set]:
    """Prim from the source over ``allowed`` (all nodes if None).

    Ties on weight go to the smaller candidate id, then the smaller tree id.
    """
    s = graph.source
    in_tree = {s}
    heap = []
    for v, w in graph.adj[s].items():
        if allowed is None or v in allowed:
            heap.append((w, v, s))
    heapq.heapify(heap)
    edges = []
    total = 0
    while heap:
        w, v, u = heapq.heappop(heap)
        if v in in_tree:
            continue
        in_tree.add(v)
        edges.append(edge_key(u, v))
        total += w
        for x, wx in graph.adj[v].items():
            if x not in in_tree and (allowed is None or x in allowed):
                heapq.heappush(heap, (wx, x, v))
    in_tree.discard(s)
    return edges, total, in_tree


def prim_mst(graph: Graph, source: str | None = None) -> SpanningTreeResult:
    """Minimum spanning tree of the source's connected component."""
    if source is not None and source != graph.source:
        raise ValueError(f"graph source is {graph.source!r}, not {source!r}")
    edges, total, covered = _prim(graph)
    return SpanningTreeResult(tuple(edges), Fraction(total, graph.scale), frozenset(covered))


def induced_mst_scaled(graph: Graph, vertex_set) -> int | None:
    vertex_set = frozenset(vertex_set)
    _, total, covered = _prim(graph, vertex_set)
    if len(covered) != len(vertex_set):
        return None
    return total


def induced_mst_cost(graph: Graph, vertex_set) -> Fraction | None:
    """MST cost of the subgraph induced on ``vertex_set`` plus the source.

    Returns ``None`` when some vertex of the set cannot reach the source
    inside that subgraph.
    """
    if graph.source in vertex_set:
        raise ValueError("vertex_set must not contain the source")
    total = induced_mst_scaled(graph, vertex_set)
    return None if total is None else Fraction(total, graph.scale)


def induced_mst_edges(graph: Graph, vertex_set) -> tuple[tuple[str, str], ...]:
    edges, _, _ = _prim(graph, frozenset(vertex_set))
    return tuple(edges)
