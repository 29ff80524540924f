"""Exact and simulated hitting times of random walks on graphs, checked
against closed-form upper bounds."""

__version__ = "0.1.0"

from .bounds import (  # noqa: E402
    BoundRecord,
    BoundReport,
    Check,
    audit,
    bound_coarse,
    bound_cost_simple,
    bound_main,
    bound_simple_distance,
    bound_tree_tail,
    bound_weighted_F,
    directional_asymmetry,
    poly_F,
    poly_P,
)
from .errors import *  # noqa: E402,F401,F403
from .graph import (  # noqa: E402
    FLOAT,
    RATIONAL,
    CostFunction,
    EdgeWeights,
    Graph,
    WalkSpec,
    asymmetry,
    bfs_distances,
    edge_distance,
    parse_graph,
    transition_probabilities,
    tree_structure,
)
from .solver import (  # noqa: E402
    commute_time,
    cost_hitting_times,
    edge_visit_counts,
    effective_resistance,
    hit_before_probability,
    hitting_time,
    hitting_times,
    stationary_distribution,
    tree_hitting_times,
    tree_visit_counts,
    value_iteration,
    vertex_visit_counts,
)
from .simulate import estimate_edge_visits, estimate_hitting, simulate_walk, st_connectivity  # noqa: E402
