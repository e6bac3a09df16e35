"""Certify mechanism properties by exhaustive enumeration on small instances.

Truthfulness is checked against every unilateral edge-cutting deviation,
cost monotonicity against a fixed set of cost bumps on each adjacent edge,
and the remaining properties directly on the truthful outcome.
"""
from __future__ import annotations

import hashlib
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations

from .graph import (
    Instance,
    ReportProfile,
    edge_key,
    format_rational,
    instance_from_dict,
    report_from_dict,
)
from .mechanisms import run_mechanism
from .values import DEFAULT_MAX_COALITION_NODES

TRUTHFULNESS = "truthfulness"
BUDGET_FEASIBILITY = "budget_feasibility"
BUDGET_BALANCE = "budget_balance"
COST_MONOTONICITY = "cost_monotonicity"
POSITIVENESS = "positiveness"
PROPERTIES = (TRUTHFULNESS, BUDGET_FEASIBILITY, BUDGET_BALANCE, COST_MONOTONICITY, POSITIVENESS)

HOLDS = "holds"
VIOLATED = "violated"

# (kind, amount): new cost = cost * amount or cost + amount
COST_PERTURBATIONS = (("mul", 2), ("mul", 10), ("add", 1))

BUDGET_POLICIES = ("unlimited", "uniform", "tight")
TOPOLOGIES = ("graph", "line")


def instance_digest(instance: Instance) -> str:
    canonical = json.dumps(instance.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class GenSpec:
    """Recipe for a seeded random instance.

    ``density`` is the probability of each non-tree edge; 0 gives a pure
    random tree. ``topology="line"`` ignores density and chains the nodes.
    """

    n_nodes: int = 5
    density: float = 0.5
    cost_range: tuple[int, int] = (1, 20)
    budget_policy: str = "unlimited"
    budget_range: tuple[int, int] = (1, 40)
    slack_range: tuple[int, int] = (0, 10)
    topology: str = "graph"
    seed: int = 0

    def validate(self) -> None:
        if self.n_nodes < 1:
            raise ValueError("n_nodes must be >= 1")
        if not 0 <= self.density <= 1:
            raise ValueError("density must lie in [0, 1]")
        for name in ("cost_range", "budget_range", "slack_range"):
            lo, hi = getattr(self, name)
            if lo > hi or lo < 0:
                raise ValueError(f"{name} must be 0 <= lo <= hi")
        if self.budget_range[1] < 1:
            raise ValueError("budget_range must allow a positive budget")
        if self.budget_policy not in BUDGET_POLICIES:
            raise ValueError(f"budget_policy must be one of {', '.join(BUDGET_POLICIES)}")
        if self.topology not in TOPOLOGIES:
            raise ValueError(f"topology must be one of {', '.join(TOPOLOGIES)}")


def gen_random_instance(spec: GenSpec) -> Instance:
    """Random connected instance: a random tree from the source plus extra edges."""
    spec.validate()
    rng = random.Random(spec.seed)
    width = len(str(spec.n_nodes))
    labels = [f"v{k:0{width}d}" for k in range(1, spec.n_nodes + 1)]
    if spec.topology == "graph":
        rng.shuffle(labels)
    cost = lambda: rng.randint(*spec.cost_range)  # noqa: E731
    edges = {}
    parent_cost = {}
    attached = ["s"]
    for label in labels:
        parent = attached[-1] if spec.topology == "line" else rng.choice(attached)
        c = cost()
        edges[edge_key(parent, label)] = c
        parent_cost[label] = c
        attached.append(label)
    if spec.topology == "graph" and spec.density > 0:
        for u, v in combinations(sorted(attached), 2):
            if (u, v) not in edges and rng.random() < spec.density:
                edges[(u, v)] = cost()
    budgets = {}
    for label in sorted(labels):
        if spec.budget_policy == "uniform":
            budgets[label] = max(1, rng.randint(*spec.budget_range))
        elif spec.budget_policy == "tight":
            budgets[label] = max(1, parent_cost[label] + rng.randint(*spec.slack_range))
    return Instance(
        tuple(["s", *labels]),
        "s",
        tuple((u, v, Fraction(c)) for (u, v), c in edges.items()),
        {n: Fraction(b) for n, b in budgets.items()},
    )


def enumerate_reports(instance: Instance, node: str) -> list[ReportProfile]:
    """Every subset of ``node``'s edges as its report, all others truthful.

    The last profile is the truthful one.
    """
    if node == instance.source:
        raise ValueError("the source does not report")
    own = instance.adjacent_edges(node)
    out = []
    for m in range(1 << len(own)):
        out.append(ReportProfile({node: [e for k, e in enumerate(own) if m >> k & 1]}))
    return out


@dataclass(frozen=True)
class ViolationReport:
    property: str
    mechanism: str
    instance_digest: str
    node: str
    share_before: Fraction
    share_after: Fraction
    baseline_report: dict = field(default_factory=dict)
    deviating_report: dict | None = None
    perturbed_edge: tuple[str, str] | None = None
    new_cost: Fraction | None = None
    budget: Fraction | None = None
    instance: dict | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        doc = asdict(self)
        for key in ("share_before", "share_after", "new_cost", "budget"):
            if doc[key] is not None:
                doc[key] = format_rational(doc[key])
        if doc["perturbed_edge"] is not None:
            doc["perturbed_edge"] = list(doc["perturbed_edge"])
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass
class PropertyCheck:
    property: str
    mechanism: str
    witnesses: list[ViolationReport] = field(default_factory=list)
    checked: int = 0
    deselections: int = 0  # deviations that disconnected the deviator; not scored

    @property
    def verdict(self) -> str:
        return VIOLATED if self.witnesses else HOLDS

    @property
    def holds(self) -> bool:
        return not self.witnesses


def check_property(
    instance: Instance,
    mechanism: str,
    prop: str,
    max_coalition_nodes: int = DEFAULT_MAX_COALITION_NODES,
) -> PropertyCheck:
    """Search the truthful profile (and its neighbourhood) for a violation of ``prop``."""
    if prop not in PROPERTIES:
        raise ValueError(f"unknown property {prop!r}; choose from {', '.join(PROPERTIES)}")
    mechanism = mechanism.lower()
    solve = lambda inst, rep=None: run_mechanism(mechanism, inst, rep, max_coalition_nodes)  # noqa: E731
    digest = instance_digest(instance)
    doc = instance.to_dict()
    check = PropertyCheck(prop, mechanism)
    base = solve(instance)
    selected = set(base.selected)

    def witness(node, before, after, **kw):
        check.witnesses.append(
            ViolationReport(prop, mechanism, digest, node, before, after, instance=doc, **kw)
        )

    if prop == BUDGET_BALANCE:
        check.checked = 1
        total = sum(base.shares.values(), Fraction(0))
        if total != base.total_cost:
            witness("*", total, base.total_cost)
    elif prop == POSITIVENESS:
        for n, x in base.shares.items():
            check.checked += 1
            if x < 0:
                witness(n, x, x)
    elif prop == BUDGET_FEASIBILITY:
        for n, x in base.shares.items():
            check.checked += 1
            b = instance.budgets.get(n)
            if b is not None and x > b:
                witness(n, x, x, budget=b)
    elif prop == TRUTHFULNESS:
        for n in instance.players:
            if n not in selected:
                continue
            truthful = base.shares[n]
            for report in enumerate_reports(instance, n)[:-1]:
                out = solve(instance, report)
                if n not in out.selected:
                    check.deselections += 1
                    continue
                check.checked += 1
                if truthful > out.shares[n]:
                    witness(n, truthful, out.shares[n], deviating_report=report.to_dict())
    elif prop == COST_MONOTONICITY:
        for n in sorted(selected):
            before = base.shares[n]
            for u, v in instance.adjacent_edges(n):
                c = instance.cost(u, v)
                for kind, amount in COST_PERTURBATIONS:
                    new = c * amount if kind == "mul" else c + amount
                    if new == c:
                        continue
                    out = solve(instance.with_cost(u, v, new))
                    if n not in out.selected:
                        check.deselections += 1
                        continue
                    check.checked += 1
                    if out.shares[n] < before:
                        witness(n, before, out.shares[n], perturbed_edge=(u, v), new_cost=new)
    return check


def replay(witness: ViolationReport, max_coalition_nodes: int = DEFAULT_MAX_COALITION_NODES) -> bool:
    """Recompute a witness from its embedded instance; True if it reproduces exactly."""
    instance = instance_from_dict(witness.instance)
    if instance_digest(instance) != witness.instance_digest:
        return False
    solve = lambda inst, rep=None: run_mechanism(witness.mechanism, inst, rep, max_coalition_nodes)  # noqa: E731
    base = solve(instance)
    if witness.property == BUDGET_BALANCE:
        total = sum(base.shares.values(), Fraction(0))
        return (total, base.total_cost) == (witness.share_before, witness.share_after)
    before = base.shares[witness.node]
    if witness.property in (POSITIVENESS, BUDGET_FEASIBILITY):
        return before == witness.share_before == witness.share_after
    if witness.property == TRUTHFULNESS:
        report = report_from_dict(witness.deviating_report, instance)
        after = solve(instance, report).shares[witness.node]
    else:
        u, v = witness.perturbed_edge
        after = solve(instance.with_cost(u, v, witness.new_cost)).shares[witness.node]
    return (before, after) == (witness.share_before, witness.share_after)


def _check_many(args):
    instance, mechanism, props, cap = args
    return [check_property(instance, mechanism, p, cap) for p in props]


def certify(
    instances,
    mechanism: str,
    properties=PROPERTIES,
    max_coalition_nodes: int = DEFAULT_MAX_COALITION_NODES,
    jobs: int = 1,
) -> dict[str, PropertyCheck]:
    """Run each property over a corpus and merge the results in corpus order."""
    properties = tuple(properties)
    tasks = [(inst, mechanism, properties, max_coalition_nodes) for inst in instances]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_check_many, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_check_many(t) for t in tasks]
    merged = {p: PropertyCheck(p, mechanism.lower()) for p in properties}
    for per_instance in results:
        for chk in per_instance:
            m = merged[chk.property]
            m.witnesses.extend(chk.witnesses)
            m.checked += chk.checked
            m.deselections += chk.deselections
    return merged


def random_corpus(trials: int, max_nodes: int = 6, seed: int = 0) -> list[Instance]:
    """Mixed corpus: node count, edge density and budget policy vary per instance.

    Every instance carries finite budgets so both mechanisms apply.
    """
    rng = random.Random(seed)
    out = []
    for k in range(trials):
        spec = GenSpec(
            n_nodes=rng.randint(1, max_nodes),
            density=rng.choice((0.0, 0.25, 0.5, 0.75, 1.0)),
            budget_policy=rng.choice(("uniform", "tight")),
            seed=seed * 1_000_003 + k,
        )
        out.append(gen_random_instance(spec))
    return out
