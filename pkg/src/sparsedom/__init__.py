"""Sparse r-dominating sets and balanced neighborhood partitioning."""

from .domset import (
    DominatorSet,
    GreedyConfig,
    avg_congestion,
    brute_force_mcds,
    brute_force_mds,
    congestion_at,
    export_ilp,
    greedy_dominate,
    is_perfect_code,
    minimalize_dominating_set,
    verify_r_domination,
)
from .errors import RefusalError
from .flow import SbapInstance, brute_force_sbap, min_cost_max_flow, solve_sbap
from .graph import (
    UNREACHABLE,
    Graph,
    graph_power,
    largest_component,
    load_edge_list,
    multi_source_bfs,
    r_neighborhood,
)
from .kernel import build_compact_kernel, build_kernel, layers
from .partition import (
    Partition,
    brute_force_bnp,
    export_qp,
    piece_stats,
    prt_branch,
    prt_layer,
    prt_weight,
    verify_partition,
)

__version__ = "0.1.0"
