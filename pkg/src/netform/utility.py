"""Exact node utilities for the five-determinant network formation payoff.

A node's utility is a linear function of a few graph counts (degree, how many
nodes sit at each distance, how many of those pairs pay rent, and the summed
rent shares it collects as an essential intermediary). Those counts do not
depend on the parameters, so they are computed once per graph and cached;
evaluating a utility is then a short dot product over exact fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

from .graph import Graph, _bits, distance_layers, separations, with_edge

Rational = Union[Fraction, int, str]


def as_fraction(value: Rational) -> Fraction:
    """Exact rational from an int, Fraction, ``"p/q"`` or terminating decimal string."""
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a Fraction or a decimal string")
    return Fraction(value)


@dataclass(frozen=True)
class UtilityParams:
    benefits: tuple[Fraction, ...]
    link_cost: Fraction
    rent_fraction: Fraction
    entry_factor: Fraction
    entry_cap: Optional[int] = None

    def __post_init__(self) -> None:
        b = tuple(as_fraction(x) for x in self.benefits)
        object.__setattr__(self, "benefits", b)
        for name in ("link_cost", "rent_fraction", "entry_factor"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if len(b) < 2:
            raise ValueError("need at least b1 and b2")
        if any(x <= 0 for x in b):
            raise ValueError("benefits must be positive")
        if any(b[i + 1] >= b[i] for i in range(len(b) - 1)):
            raise ValueError("benefits must strictly decrease with distance")
        if not (0 <= self.rent_fraction < 1):
            raise ValueError("rent fraction must lie in [0, 1)")
        if self.link_cost <= 0:
            raise ValueError("link cost must be positive")
        if self.entry_factor < 0:
            raise ValueError("entry factor must be non-negative")
        if self.entry_cap is not None and self.entry_cap < 1:
            raise ValueError("entry cap must be a positive integer")

    @classmethod
    def make(
        cls,
        b: Sequence[Rational],
        c: Rational,
        gamma: Rational,
        c0: Rational,
        sigma: Optional[int] = None,
    ) -> "UtilityParams":
        return cls(tuple(as_fraction(x) for x in b), as_fraction(c), as_fraction(gamma),
                   as_fraction(c0), sigma)

    @property
    def horizon(self) -> int:
        return len(self.benefits)

    def b(self, i: int) -> Fraction:
        """Benefit at distance ``i`` (1-based); zero past the horizon."""
        return self.benefits[i - 1] if 1 <= i <= len(self.benefits) else Fraction(0)

    def replace(self, **changes) -> "UtilityParams":
        fields = {
            "benefits": self.benefits,
            "link_cost": self.link_cost,
            "rent_fraction": self.rent_fraction,
            "entry_factor": self.entry_factor,
            "entry_cap": self.entry_cap,
        }
        aliases = {"b": "benefits", "c": "link_cost", "gamma": "rent_fraction",
                   "c0": "entry_factor", "sigma": "entry_cap"}
        for key, value in changes.items():
            fields[aliases.get(key, key)] = value
        return UtilityParams(**fields)


@dataclass(frozen=True)
class EntryContext:
    """A newcomer evaluating (or making) its first link to ``target``."""

    entrant: Optional[int] = None
    target: Optional[int] = None

    def __post_init__(self) -> None:
        if (self.entrant is None) != (self.target is None):
            raise ValueError("entrant and target must be set together")
        if self.entrant is not None and self.entrant == self.target:
            raise ValueError("entrant cannot target itself")

    @property
    def active(self) -> bool:
        return self.entrant is not None


@dataclass(frozen=True)
class UtilityBreakdown:
    entry_fee: Fraction
    direct: Fraction
    link_costs: Fraction
    indirect: Fraction
    rents_paid: Fraction
    bridging: Fraction
    total: Fraction


@dataclass(frozen=True)
class NodeFeatures:
    degree: int
    # index l holds the count for distance l (0 and 1 unused)
    at_distance: tuple[int, ...]
    renting_at_distance: tuple[int, ...]
    # sum of 1/e(y,z) over pairs at distance l that this node separates
    share_at_distance: tuple[Fraction, ...]


@lru_cache(maxsize=1 << 17)
def graph_features(g: Graph) -> tuple[NodeFeatures, ...]:
    """Per-node utility counts for ``g``."""
    n = g.n
    layers = [distance_layers(g.adj, s) for s in range(n)]
    seps = separations(g)
    # number of essential nodes for each separated pair
    ess = [[0] * n for _ in range(n)]
    for v, parts in seps.items():
        for a in range(len(parts)):
            for bmask in parts[a + 1:]:
                for y in _bits(parts[a]):
                    row = ess[y]
                    for z in _bits(bmask):
                        row[z] += 1
                        ess[z][y] += 1

    dist_of = [None] * n
    for s in range(n):
        d = {}
        for lvl, layer in enumerate(layers[s]):
            for v in _bits(layer):
                d[v] = lvl
        dist_of[s] = d

    shares: list[dict[int, Fraction]] = [dict() for _ in range(n)]
    for v, parts in seps.items():
        acc = shares[v]
        for a in range(len(parts)):
            for bmask in parts[a + 1:]:
                for y in _bits(parts[a]):
                    dy = dist_of[y]
                    ey = ess[y]
                    for z in _bits(bmask):
                        lvl = dy[z]
                        acc[lvl] = acc.get(lvl, 0) + Fraction(1, ey[z])

    out = []
    for j in range(n):
        lay = layers[j]
        at = tuple(layer.bit_count() for layer in lay)
        rent = [0] * len(lay)
        ej = ess[j]
        for lvl in range(2, len(lay)):
            rent[lvl] = sum(1 for w in _bits(lay[lvl]) if ej[w])
        depth = max(shares[j]) + 1 if shares[j] else 0
        share = tuple(Fraction(shares[j].get(lvl, 0)) for lvl in range(depth))
        out.append(NodeFeatures(g.adj[j].bit_count(), at, tuple(rent), share))
    return tuple(out)


def _check(g: Graph, j: int) -> None:
    if not (0 <= j < g.n):
        raise ValueError(f"node {j} not in graph with {g.n} nodes")


def _prepare(g: Graph, j: int, ctx: Optional[EntryContext]) -> tuple[Graph, int]:
    """Graph to evaluate on and the target degree to charge as entry fee."""
    if ctx is None or not ctx.active:
        return g, -1
    _check(g, ctx.entrant)
    _check(g, ctx.target)
    if not g.has_edge(ctx.entrant, ctx.target):
        g = with_edge(g, ctx.entrant, ctx.target)
    if j != ctx.entrant:
        return g, -1
    # fee is charged on the target's degree before the entrant's link
    return g, g.degree(ctx.target) - 1


def _value(f: NodeFeatures, params: UtilityParams) -> Fraction:
    b = params.benefits
    horizon = len(b)
    total = f.degree * (b[0] - params.link_cost)
    gamma = params.rent_fraction
    for lvl in range(2, min(len(f.at_distance), horizon + 1)):
        if f.at_distance[lvl]:
            total += (f.at_distance[lvl] - gamma * f.renting_at_distance[lvl]) * b[lvl - 1]
    if gamma:
        for lvl in range(2, min(len(f.share_at_distance), horizon + 1)):
            if f.share_at_distance[lvl]:
                total += 2 * gamma * f.share_at_distance[lvl] * b[lvl - 1]
    return total


def utility(
    g: Graph, j: int, params: UtilityParams, ctx: Optional[EntryContext] = None
) -> Fraction:
    """Utility of node ``j``; an active ``ctx`` adds the entrant's link (and its fee)."""
    _check(g, j)
    g, fee_degree = _prepare(g, j, ctx)
    u = _value(graph_features(g)[j], params)
    if fee_degree >= 0:
        u -= params.entry_factor * fee_degree
    return u


def utility_breakdown(
    g: Graph, j: int, params: UtilityParams, ctx: Optional[EntryContext] = None
) -> UtilityBreakdown:
    _check(g, j)
    g, fee_degree = _prepare(g, j, ctx)
    f = graph_features(g)[j]
    gamma = params.rent_fraction
    fee = params.entry_factor * fee_degree if fee_degree >= 0 else Fraction(0)
    direct = f.degree * params.b(1)
    costs = f.degree * params.link_cost
    horizon = params.horizon
    indirect = sum(
        (f.at_distance[lvl] * params.b(lvl) for lvl in range(2, min(len(f.at_distance), horizon + 1))),
        Fraction(0),
    )
    rents = sum(
        (gamma * f.renting_at_distance[lvl] * params.b(lvl)
         for lvl in range(2, min(len(f.renting_at_distance), horizon + 1))),
        Fraction(0),
    )
    bridging = sum(
        (2 * gamma * f.share_at_distance[lvl] * params.b(lvl)
         for lvl in range(2, min(len(f.share_at_distance), horizon + 1))),
        Fraction(0),
    )
    total = -fee + direct - costs + indirect - rents + bridging
    return UtilityBreakdown(fee, direct, costs, indirect, rents, bridging, total)


def utilities(g: Graph, params: UtilityParams) -> list[Fraction]:
    """Utilities of every node, no entry context."""
    return [_value(f, params) for f in graph_features(g)]


def social_welfare(g: Graph, params: UtilityParams) -> Fraction:
    return sum(utilities(g, params), Fraction(0))


def efficiency_value(g: Graph, params: UtilityParams) -> Fraction:
    """Welfare with rents and entry fees left out (both are transfers or one-off)."""
    b = params.benefits
    at = [0] * (len(b) + 1)
    for s in range(g.n):
        for lvl, layer in enumerate(distance_layers(g.adj, s)):
            if lvl > len(b):
                break
            at[lvl] += layer.bit_count()
    total = at[1] * (b[0] - params.link_cost)
    for lvl in range(2, len(b) + 1):
        total += at[lvl] * b[lvl - 1]
    return Fraction(total)
