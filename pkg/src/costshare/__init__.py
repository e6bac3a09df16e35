"""Exact cost sharing mechanisms for connecting nodes to a source."""
from .exceptions import (
    CapExceededError,
    CostShareError,
    InstanceError,
    MissingBudgetError,
    NotATreeError,
    ReportError,
)
from .graph import (
    Graph,
    Instance,
    ReportProfile,
    SpanningTreeResult,
    induced_graph,
    induced_mst_cost,
    parse_instance,
    parse_report,
    prim_mst,
)
from .harness import (
    GenSpec,
    PropertyCheck,
    ViolationReport,
    certify,
    check_property,
    enumerate_reports,
    gen_random_instance,
    instance_digest,
    random_corpus,
    replay,
)
from .mechanisms import (
    AverageMarginalCostMechanism,
    MechanismOutcome,
    SavingBasedMechanism,
    run_amcm,
    run_scsm,
)
from .shapley import shapley_allocate
from .trees import RootedTree, claus_kleitman_shares, line_formula_share, root_tree, savings_tree_shares
from .validation import check_instance, check_report
from .values import (
    ValueTable,
    connection_cost,
    g_star,
    scsm_value_table,
    steiner_value,
    steiner_value_table,
)

__version__ = "0.1.0"
