"""Exhaustive small-scale ground truth for the formation engine and the theorems.

``explore_all_formations`` follows every best-response path (every mover
order, every tied best move) instead of one seeded schedule. The enumerators
walk all isomorphism classes of graphs on ``n`` nodes, which covers the same
ground as all ``2^C(n,2)`` labeled graphs because stability and welfare are
invariant under relabeling.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Optional

from .dynamics import best_moves, is_pairwise_stable
from .graph import (
    Graph,
    SizeLimitError,
    Topology,
    TopologyLabel,
    balanced_k_star,
    canonical_form,
    classify_topology,
    complete_graph,
    star_graph,
    turan_bipartite,
    with_edge,
)
from .utility import UtilityParams, efficiency_value

EXPLORE_MAX_NODES = 8
ENUMERATE_MAX_NODES = 7
STATE_LIMIT = 5_000_000


@dataclass
class ExplorationResult:
    terminal_graphs: set[Graph] = field(default_factory=set)
    states_visited: int = 0
    max_depth: int = 0
    all_match: Optional[bool] = None
    # canonical stable networks met at each size before the next entrant arrived
    epoch_graphs: dict[int, set[Graph]] = field(default_factory=dict)
    declined: set[Graph] = field(default_factory=set)

    @property
    def terminal_labels(self) -> list[TopologyLabel]:
        return sorted({classify_topology(g) for g in self.terminal_graphs}, key=str)


def _successors(g: Graph, params: UtilityParams, n_max: int, result: ExplorationResult):
    moves = []
    for j in range(g.n):
        tied, _ = best_moves(g, j, params)
        moves.extend(tied)
    if moves:
        return [m.apply(g) for m in moves]
    # pairwise stable: record it, then let the next node try to enter
    result.epoch_graphs.setdefault(g.n, set()).add(g)
    if g.n >= n_max:
        result.terminal_graphs.add(g)
        return []
    grown = g.add_node()
    tied, _ = best_moves(grown, g.n, params, is_new_entrant=True)
    if not tied:
        result.terminal_graphs.add(g)
        result.declined.add(g)
        return []
    return [m.apply(grown) for m in tied]


def explore_all_formations(
    params: UtilityParams,
    n_max: int,
    target: Optional[TopologyLabel] = None,
    base: Optional[Graph] = None,
    state_limit: int = STATE_LIMIT,
) -> ExplorationResult:
    """Every network reachable by best-response play, growing from ``base`` to ``n_max`` nodes."""
    if n_max > EXPLORE_MAX_NODES:
        raise SizeLimitError(f"exhaustive exploration is limited to {EXPLORE_MAX_NODES} nodes")
    start = canonical_form(base if base is not None else Graph.empty(1))
    if start.n > n_max:
        raise ValueError("base graph already exceeds n_max")
    result = ExplorationResult()
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        g, depth = queue.popleft()
        result.max_depth = max(result.max_depth, depth)
        for nxt in _successors(g, params, n_max, result):
            key = canonical_form(nxt)
            if key in seen:
                continue
            seen.add(key)
            if len(seen) > state_limit:
                raise SizeLimitError(f"exploration passed {state_limit} states")
            queue.append((key, depth + 1))
    result.states_visited = len(seen)
    for g in result.terminal_graphs:
        stable, witness = is_pairwise_stable(g, params)
        if not stable:
            raise AssertionError(f"terminal graph {g} is not pairwise stable ({witness})")
    if target is not None:
        result.all_match = bool(result.terminal_graphs) and all(
            target.matches(classify_topology(g)) for g in result.terminal_graphs
        )
    return result


@lru_cache(maxsize=None)
def graph_classes(n: int) -> tuple[Graph, ...]:
    """One canonical representative per isomorphism class on ``n`` nodes."""
    if n > ENUMERATE_MAX_NODES:
        raise SizeLimitError(f"graph enumeration is limited to {ENUMERATE_MAX_NODES} nodes")
    level = {canonical_form(Graph.empty(n))}
    out = list(level)
    for _ in range(n * (n - 1) // 2):
        nxt = set()
        for g in level:
            for u, v in combinations(range(n), 2):
                if not g.has_edge(u, v):
                    nxt.add(canonical_form(with_edge(g, u, v)))
        out.extend(sorted(nxt, key=lambda h: h.edges))
        level = nxt
    return tuple(out)


def enumerate_stable_graphs(n: int, params: UtilityParams) -> set[Graph]:
    """Canonical forms of every pairwise-stable graph on ``n`` nodes."""
    return {g for g in graph_classes(n) if is_pairwise_stable(g, params)[0]}


def brute_force_efficient(n: int, params: UtilityParams) -> set[Graph]:
    """Canonical forms of every graph on ``n`` nodes maximizing rent-free welfare."""
    best: Optional[Fraction] = None
    winners: set[Graph] = set()
    for g in graph_classes(n):
        value = efficiency_value(g, params)
        if best is None or value > best:
            best, winners = value, {g}
        elif value == best:
            winners.add(g)
    return winners


def build_topology(label: TopologyLabel, mu: int) -> Graph:
    """A representative network of ``label`` on ``mu`` nodes."""
    if label.kind is Topology.STAR:
        return star_graph(mu)
    if label.kind is Topology.BIPARTITE_TURAN:
        if mu < 2:
            raise ValueError("bipartite Turán needs at least 2 nodes")
        return turan_bipartite(mu)
    if label.kind is Topology.KSTAR:
        if label.k is None or mu < 2 * label.k:
            raise ValueError("k-star needs k set and at least 2k nodes")
        return balanced_k_star(label.k, mu)
    if label.kind is Topology.COMPLETE:
        return complete_graph(mu)
    raise ValueError(f"cannot build {label}")


def efficiency_ratio_empirical(label: TopologyLabel, mu: int, params: UtilityParams) -> Fraction:
    """Exact rent-free welfare of ``label`` on ``mu`` nodes over that of the star."""
    return efficiency_value(build_topology(label, mu), params) / efficiency_value(
        star_graph(mu), params
    )
