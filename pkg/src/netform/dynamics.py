"""Myopic best-response dynamics and the sequential-entry formation engine.

Nodes enter one at a time. A newcomer proposes its single most profitable
first link (paying the entry fee on the target's degree); the network then
evolves under randomly scheduled best responses until it is pairwise stable,
and only then does the next node consider entering.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator, Optional, Union

from .graph import Graph, with_edge, without_edge
from .utility import UtilityParams, graph_features, _value

log = logging.getLogger(__name__)

DEFAULT_ROUND_LIMIT = 10_000


class MoveKind(str, Enum):
    PROPOSE = "propose"
    DELETE = "delete"
    PASS = "pass"


@dataclass(frozen=True, order=True)
class Move:
    kind: MoveKind
    actor: Optional[int] = None
    other: Optional[int] = None

    @classmethod
    def propose(cls, proposer: int, acceptor: int) -> "Move":
        return cls(MoveKind.PROPOSE, proposer, acceptor)

    @classmethod
    def delete(cls, actor: int, neighbor: int) -> "Move":
        return cls(MoveKind.DELETE, actor, neighbor)

    @classmethod
    def pass_(cls) -> "Move":
        return cls(MoveKind.PASS)

    @property
    def is_pass(self) -> bool:
        return self.kind is MoveKind.PASS

    def apply(self, g: Graph) -> Graph:
        if self.kind is MoveKind.PROPOSE:
            if g.has_edge(self.actor, self.other):
                raise ValueError(f"{self}: edge already present")
            return with_edge(g, self.actor, self.other)
        if self.kind is MoveKind.DELETE:
            if not g.has_edge(self.actor, self.other):
                raise ValueError(f"{self}: edge absent")
            return without_edge(g, self.actor, self.other)
        return g

    def __str__(self) -> str:
        if self.is_pass:
            return "pass"
        return f"{self.kind.value}({self.actor},{self.other})"


# ---------------------------------------------------------------------------
# schedulers


@dataclass(frozen=True)
class SeededRandom:
    seed: int


@dataclass(frozen=True)
class FixedOrder:
    order: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.order:
            raise ValueError("FixedOrder needs at least one node id")


@dataclass(frozen=True)
class Exhaustive:
    """Branch over every mover; only meaningful for the exhaustive explorer."""


Scheduler = Union[SeededRandom, FixedOrder, Exhaustive]


# ---------------------------------------------------------------------------
# moves


def _u(g: Graph, j: int, params: UtilityParams) -> Fraction:
    return _value(graph_features(g)[j], params)


def enumerate_moves(
    g: Graph, j: int, params: UtilityParams, is_new_entrant: bool = False
) -> list[tuple[Move, Fraction]]:
    """Every move available to ``j`` with ``j``'s utility change.

    Proposals the counterparty would refuse (its utility would drop) are left
    out. A new entrant may only propose (paying ``c0`` times the target's
    degree) or stay out.
    """
    g.check_node(j)
    moves: list[tuple[Move, Fraction]] = [(Move.pass_(), Fraction(0))]
    if is_new_entrant:
        if g.adj[j]:
            raise ValueError(f"entrant {j} already has links")
        for k in range(g.n):
            if k == j:
                continue
            g2 = with_edge(g, j, k)
            if _u(g2, k, params) < _u(g, k, params):
                continue
            delta = _u(g2, j, params) - params.entry_factor * g.degree(k)
            moves.append((Move.propose(j, k), delta))
        return moves

    base = _u(g, j, params)
    for k in range(g.n):
        if k == j:
            continue
        if g.has_edge(j, k):
            g2 = without_edge(g, j, k)
            moves.append((Move.delete(j, k), _u(g2, j, params) - base))
        else:
            g2 = with_edge(g, j, k)
            if _u(g2, k, params) < _u(g, k, params):
                continue
            moves.append((Move.propose(j, k), _u(g2, j, params) - base))
    return moves


def _rank(item: tuple[Move, Fraction]) -> tuple:
    move, delta = item
    return (-delta, 0 if move.kind is MoveKind.DELETE else 1, move.other)


def best_moves(
    g: Graph, j: int, params: UtilityParams, is_new_entrant: bool = False
) -> tuple[list[Move], Fraction]:
    """All strictly improving moves of maximal gain (empty when ``j`` should pass)."""
    options = [(m, d) for m, d in enumerate_moves(g, j, params, is_new_entrant)
               if not m.is_pass and d > 0]
    if not options:
        return [], Fraction(0)
    top = max(d for _, d in options)
    tied = sorted((item for item in options if item[1] == top), key=_rank)
    return [m for m, _ in tied], top


def best_response(
    g: Graph, j: int, params: UtilityParams, is_new_entrant: bool = False
) -> Move:
    """Most profitable strictly improving move; ties go to deletions, then lowest id."""
    tied, _ = best_moves(g, j, params, is_new_entrant)
    return tied[0] if tied else Move.pass_()


def _best_with_delta(g, j, params, is_new_entrant=False) -> tuple[Move, Fraction]:
    tied, top = best_moves(g, j, params, is_new_entrant)
    return (tied[0], top) if tied else (Move.pass_(), Fraction(0))


# ---------------------------------------------------------------------------
# pairwise stability


def stability_violations(g: Graph, params: UtilityParams) -> Iterator[Move]:
    """Every profitable unilateral deletion and mutually acceptable new link."""
    feats = graph_features(g)
    here = [_value(f, params) for f in feats]
    for u, v in g.edges:
        g2 = without_edge(g, u, v)
        f2 = graph_features(g2)
        if _value(f2[u], params) > here[u]:
            yield Move.delete(u, v)
        if _value(f2[v], params) > here[v]:
            yield Move.delete(v, u)
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if g.has_edge(u, v):
                continue
            f2 = graph_features(with_edge(g, u, v))
            du = _value(f2[u], params) - here[u]
            dv = _value(f2[v], params) - here[v]
            if du > 0 and dv >= 0:
                yield Move.propose(u, v)
            elif dv > 0 and du >= 0:
                yield Move.propose(v, u)


def is_pairwise_stable(g: Graph, params: UtilityParams) -> tuple[bool, Optional[Move]]:
    witness = next(stability_violations(g, params), None)
    return witness is None, witness


# ---------------------------------------------------------------------------
# formation engine


class Outcome(str, Enum):
    STABLE = "stable"
    ENTRY_DECLINED = "entry_declined"
    ROUND_LIMIT = "round_limit"
    CYCLE_DETECTED = "cycle_detected"


@dataclass(frozen=True)
class TraceEvent:
    epoch: int
    round: int
    node: int
    move: Move
    delta: Fraction
    entry_fee: Fraction = Fraction(0)


@dataclass
class FormationTrace:
    base: Graph
    events: list[TraceEvent] = field(default_factory=list)
    snapshots: list[Graph] = field(default_factory=list)
    final: Optional[Graph] = None
    outcome: Optional[Outcome] = None

    @property
    def alterations(self) -> list[TraceEvent]:
        return [e for e in self.events if not e.move.is_pass]


def _sweep_order(scheduler: Scheduler, n: int, rng: Optional[random.Random]) -> list[int]:
    if isinstance(scheduler, SeededRandom):
        order = list(range(n))
        rng.shuffle(order)
        return order
    if isinstance(scheduler, FixedOrder):
        listed = [v for v in dict.fromkeys(scheduler.order) if 0 <= v < n]
        return listed + [v for v in range(n) if v not in set(listed)]
    raise ValueError("the formation engine needs a SeededRandom or FixedOrder scheduler; "
                     "use explore_all_formations for exhaustive branching")


def _stabilize(
    g: Graph,
    params: UtilityParams,
    scheduler: Scheduler,
    round_limit: int,
    rng: Optional[random.Random],
    epoch: int,
    events: list[TraceEvent],
    clock: list[int],
) -> tuple[Graph, Optional[Outcome]]:
    if round_limit <= 0:
        raise ValueError("round_limit must be positive")
    activations = 0
    seen = {g.adj} if isinstance(scheduler, FixedOrder) else None
    while True:
        changed = False
        for j in _sweep_order(scheduler, g.n, rng):
            if activations >= round_limit:
                return g, Outcome.ROUND_LIMIT
            activations += 1
            clock[0] += 1
            move, delta = _best_with_delta(g, j, params)
            if move.is_pass:
                continue
            g = move.apply(g)
            events.append(TraceEvent(epoch, clock[0], j, move, delta))
            changed = True
            break
        if not changed:
            return g, None
        if seen is not None:
            if g.adj in seen:
                return g, Outcome.CYCLE_DETECTED
            seen.add(g.adj)


def stabilize(
    g: Graph,
    params: UtilityParams,
    scheduler: Scheduler,
    round_limit: int = DEFAULT_ROUND_LIMIT,
) -> tuple[Graph, FormationTrace]:
    """Run best responses until a full sweep passes; no entrant may be pending."""
    rng = random.Random(scheduler.seed) if isinstance(scheduler, SeededRandom) else None
    trace = FormationTrace(base=g)
    final, outcome = _stabilize(g, params, scheduler, round_limit, rng, 0, trace.events, [0])
    trace.final = final
    trace.snapshots.append(final)
    trace.outcome = outcome or Outcome.STABLE
    return final, trace


def form_network(
    params: UtilityParams,
    n_max: int,
    scheduler: Scheduler,
    round_limit: int = DEFAULT_ROUND_LIMIT,
    base: Optional[Graph] = None,
) -> FormationTrace:
    """Grow a network one entrant at a time from ``base`` (a single node by default)."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    g = base if base is not None else Graph.empty(1)
    if g.n > n_max:
        raise ValueError("base graph already exceeds n_max")
    rng = random.Random(scheduler.seed) if isinstance(scheduler, SeededRandom) else None
    trace = FormationTrace(base=g)
    clock = [0]
    epoch = 0
    g, outcome = _stabilize(g, params, scheduler, round_limit, rng, epoch, trace.events, clock)
    trace.snapshots.append(g)
    while outcome is None and g.n < n_max:
        epoch += 1
        entrant = g.n
        g = g.add_node()
        clock[0] += 1
        move, delta = _best_with_delta(g, entrant, params, is_new_entrant=True)
        if move.is_pass:
            log.debug("node %d declines to enter", entrant)
            trace.events.append(TraceEvent(epoch, clock[0], entrant, move, Fraction(0)))
            g = Graph(g.n - 1, g.adj[:-1])
            outcome = Outcome.ENTRY_DECLINED
            break
        fee = params.entry_factor * g.degree(move.other)
        g = move.apply(g)
        trace.events.append(TraceEvent(epoch, clock[0], entrant, move, delta, fee))
        g, outcome = _stabilize(g, params, scheduler, round_limit, rng, epoch, trace.events, clock)
        trace.snapshots.append(g)
    trace.final = g
    trace.outcome = outcome or Outcome.STABLE
    return trace


def _apply_event(g: Graph, ev: TraceEvent) -> Graph:
    if ev.move.is_pass:
        return g
    if ev.move.kind is MoveKind.PROPOSE and ev.move.actor == g.n:
        g = g.add_node()
    return ev.move.apply(g)


def replay(trace: FormationTrace) -> tuple[Graph, list[Graph]]:
    """Re-apply the recorded moves from the base; returns final graph and epoch snapshots."""
    g = trace.base
    snapshots = []
    pending = list(trace.events)
    for epoch in range(len(trace.snapshots)):
        while pending and pending[0].epoch <= epoch:
            g = _apply_event(g, pending.pop(0))
        snapshots.append(g)
    for ev in pending:
        g = _apply_event(g, ev)
    return g, snapshots


def audit_trace(trace: FormationTrace, params: UtilityParams) -> list[str]:
    """Problems found when re-checking every recorded move against the utilities."""
    problems = []
    g = trace.base
    for ev in trace.events:
        m = ev.move
        if m.is_pass:
            continue
        entering = m.kind is MoveKind.PROPOSE and m.actor == g.n
        if entering:
            g = g.add_node()
        g2 = m.apply(g)
        gain = _u(g2, m.actor, params) - _u(g, m.actor, params)
        if entering:
            gain -= params.entry_factor * g.degree(m.other)
            if ev.entry_fee != params.entry_factor * g.degree(m.other):
                problems.append(f"round {ev.round}: entry fee mismatch")
        elif ev.entry_fee:
            problems.append(f"round {ev.round}: entry fee on a non-entry move")
        if gain != ev.delta:
            problems.append(f"round {ev.round}: recorded delta {ev.delta} != {gain}")
        if gain <= 0:
            problems.append(f"round {ev.round}: {m} does not strictly help the actor")
        if m.kind is MoveKind.PROPOSE and _u(g2, m.other, params) < _u(g, m.other, params):
            problems.append(f"round {ev.round}: {m} hurts the acceptor")
        g = g2
    return problems
