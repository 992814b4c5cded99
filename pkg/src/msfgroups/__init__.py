"""Exact enumeration of maximal sum-free sets in finite abelian groups,
link-graph construction, and maximal-independent-set counting with bounds."""

__version__ = "0.1.0"

from .errors import CapExceeded, ClaimViolation, GroupSpecError, PreconditionError
from .group_core import (
    GroupSpec,
    GroupType,
    add,
    classify,
    count_abelian_groups,
    element_order,
    exponent,
    format_group_spec,
    hardy_ramanujan_estimate,
    homs_to_cyclic,
    mu,
    neg,
    parse_group_spec,
    partition_count,
    scalar,
    solve_double,
    zero,
)
from .sumfree import (
    ElementSet,
    MsfReport,
    count_sumfree,
    enumerate_maximal_sumfree,
    is_maximal_sum_free,
    is_schur_triple,
    is_sum_free,
    max_sumfree_bruteforce,
    stability_cover,
)
from .mis_engine import (
    BoundReport,
    SimpleGraph,
    bound_almost_trifree,
    bound_hujter_tuza,
    bound_moon_moser,
    bound_regular_dense,
    bound_stability,
    check_bounds,
    enumerate_mis,
)
from .linkgraph import (
    LinkGraph,
    build_link_graph,
    decompose_case1,
    edge_lower_bound,
    structure_report,
    triangle_hitting_set,
    triangles,
    verify_degree_claim,
)
