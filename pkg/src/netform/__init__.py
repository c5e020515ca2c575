"""Simulator and verifier for a recursive network-formation game with rents and entry fees."""

from .conditions import (
    ConditionReport,
    EfficiencyRegime,
    base_graph_k_star,
    check_claim,
    efficiency_ratio_closed_form,
    efficiency_regime,
    predicted_topology,
    sample_params,
)
from .dynamics import (
    FixedOrder,
    FormationTrace,
    Move,
    MoveKind,
    Outcome,
    SeededRandom,
    audit_trace,
    best_response,
    enumerate_moves,
    form_network,
    is_pairwise_stable,
    replay,
    stabilize,
)
from .graph import (
    Graph,
    SizeLimitError,
    Topology,
    TopologyLabel,
    canonical_form,
    classify_topology,
    essential_nodes,
    node_orbits,
)
from .oracle import (
    brute_force_efficient,
    efficiency_ratio_empirical,
    enumerate_stable_graphs,
    explore_all_formations,
)
from .utility import (
    EntryContext,
    UtilityParams,
    efficiency_value,
    social_welfare,
    utility,
    utility_breakdown,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
