"""The average-marginal-cost and saving-based cost sharing mechanisms."""
from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .exceptions import MissingBudgetError
from .graph import (
    Graph,
    Instance,
    ReportProfile,
    format_rational,
    induced_graph,
    induced_mst_edges,
    prim_mst,
)
from .shapley import shapley_allocate
from .validation import check_instance, check_report
from .values import (
    DEFAULT_MAX_COALITION_NODES,
    ValueTable,
    check_cap,
    g_star,
    scsm_value_table,
    steiner_value_table,
)

AMCM = "amcm"
SCSM = "scsm"
MECHANISMS = (AMCM, SCSM)


def decimal6(q: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = 60
        d = Decimal(q.numerator) / Decimal(q.denominator)
        return str(d.quantize(Decimal("0.000001"), rounding=ROUND_HALF_EVEN))


@dataclass(frozen=True)
class MechanismOutcome:
    """Selected nodes, selected tree and cost shares of one mechanism run.

    ``shares`` covers every non-source node; unselected nodes pay 0.
    ``budget_feasible[i]`` is True when node i has no budget or pays at most it.
    """

    mechanism: str
    selected: tuple[str, ...]
    tree_edges: tuple[tuple[str, str, Fraction], ...]
    shares: dict[str, Fraction]
    budget_feasible: dict[str, bool]
    phi: dict[str, Fraction] | None = None
    value_table: ValueTable | None = field(default=None, compare=False, repr=False)

    @property
    def total_cost(self) -> Fraction:
        return sum((c for _, _, c in self.tree_edges), Fraction(0))

    def to_dict(self) -> dict:
        doc = {
            "mechanism": self.mechanism,
            "selected": list(self.selected),
            "tree": [{"u": u, "v": v, "cost": format_rational(c)} for u, v, c in self.tree_edges],
            "shares": {n: format_rational(x) for n, x in self.shares.items()},
            "shares_decimal": {n: decimal6(x) for n, x in self.shares.items()},
            "total_cost": format_rational(self.total_cost),
            "total_cost_decimal": decimal6(self.total_cost),
            "budget_feasible": dict(self.budget_feasible),
        }
        if self.phi is not None:
            doc["phi"] = {n: format_rational(x) for n, x in self.phi.items()}
        return doc


def _feasibility(instance: Instance, shares) -> dict[str, bool]:
    return {
        n: (n not in instance.budgets or shares[n] <= instance.budgets[n]) for n in instance.players
    }


def _tree(graph: Graph, edges) -> tuple[tuple[str, str, Fraction], ...]:
    return tuple(sorted((u, v, graph.cost(u, v)) for u, v in edges))


def run_amcm(
    instance: Instance,
    report: ReportProfile | None = None,
    max_coalition_nodes: int = DEFAULT_MAX_COALITION_NODES,
) -> MechanismOutcome:
    """Average marginal cost mechanism. Budgets are ignored when pricing.

    Everyone reachable from the source is selected, the MST of that
    component is built, and each node pays its Shapley value in the game
    whose coalition value is the cheapest way to hook the coalition up to
    the source (intermediate nodes allowed).
    """
    report = report if report is not None else ReportProfile.truthful()
    graph = induced_graph(instance, report)
    mst = prim_mst(graph)
    selected = tuple(sorted(mst.covered))
    check_cap(len(selected), max_coalition_nodes)
    table = steiner_value_table(graph, selected, max_coalition_nodes)
    phi = shapley_allocate(table)
    shares = {n: phi.get(n, Fraction(0)) for n in instance.players}
    return MechanismOutcome(
        AMCM,
        selected,
        _tree(graph, mst.edges),
        shares,
        _feasibility(instance, shares),
        value_table=table,
    )


def run_scsm(
    instance: Instance,
    report: ReportProfile | None = None,
    max_coalition_nodes: int = DEFAULT_MAX_COALITION_NODES,
) -> MechanismOutcome:
    """Saving-based cost sharing mechanism.

    Each selected node pays its budget minus its Shapley share of the
    savings game, so nobody is charged above budget.
    """
    missing = [n for n in instance.players if n not in instance.budgets]
    if missing:
        raise MissingBudgetError(f"missing budget for node(s): {', '.join(missing)}")
    report = report if report is not None else ReportProfile.truthful()
    graph = induced_graph(instance, report)
    selected = tuple(sorted(g_star(graph, instance.players)))
    check_cap(len(selected), max_coalition_nodes)
    table = scsm_value_table(graph, selected, max_coalition_nodes=max_coalition_nodes)
    phi = shapley_allocate(table)
    shares = {n: Fraction(0) for n in instance.players}
    for n, p in phi.items():
        shares[n] = instance.budgets[n] - p
    return MechanismOutcome(
        SCSM,
        selected,
        _tree(graph, induced_mst_edges(graph, selected)),
        shares,
        _feasibility(instance, shares),
        phi=phi,
        value_table=table,
    )


RUNNERS = {AMCM: run_amcm, SCSM: run_scsm}


def run_mechanism(name: str, instance, report=None, max_coalition_nodes=DEFAULT_MAX_COALITION_NODES):
    try:
        runner = RUNNERS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown mechanism {name!r}; choose from {', '.join(MECHANISMS)}") from None
    return runner(instance, report, max_coalition_nodes)


class _CostSharingMechanism(BaseEstimator):
    _name: str

    def __init__(self, max_coalition_nodes: int = DEFAULT_MAX_COALITION_NODES):
        self.max_coalition_nodes = max_coalition_nodes

    def fit(self, instance, report=None):
        """Run the mechanism on ``instance`` under ``report`` (truthful if None)."""
        if int(self.max_coalition_nodes) < 1:
            raise ValueError("max_coalition_nodes must be >= 1")
        instance = check_instance(instance, require_budgets=self._name == SCSM)
        report = check_report(report, instance)
        self.outcome_ = RUNNERS[self._name](instance, report, int(self.max_coalition_nodes))
        self.selected_ = self.outcome_.selected
        self.tree_edges_ = self.outcome_.tree_edges
        self.shares_ = self.outcome_.shares
        return self

    def predict(self, nodes=None) -> list[Fraction]:
        """Shares of ``nodes`` (all non-source nodes by default) from the last fit."""
        check_is_fitted(self, "outcome_")
        if nodes is None:
            nodes = list(self.shares_)
        return [self.shares_[n] for n in nodes]

    def fit_predict(self, instance, report=None) -> list[Fraction]:
        return self.fit(instance, report).predict()


class AverageMarginalCostMechanism(_CostSharingMechanism):
    """Estimator-style wrapper around :func:`run_amcm`.

    >>> m = AverageMarginalCostMechanism().fit(instance)  # doctest: +SKIP
    >>> m.shares_["A"]                                   # doctest: +SKIP
    """

    _name = AMCM


class SavingBasedMechanism(_CostSharingMechanism):
    """Estimator-style wrapper around :func:`run_scsm`; every node needs a budget."""

    _name = SCSM
