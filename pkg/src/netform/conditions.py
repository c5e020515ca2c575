"""Clause-by-clause checks of the sufficient conditions for each target topology.

Every clause is an exact comparison between two rationals; a point sitting on
a strict boundary fails that clause.
"""

from __future__ import annotations

import math
import operator
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional

from .graph import Graph, Topology, TopologyLabel, k_star_graph
from .utility import UtilityParams

_RELATIONS: dict[str, Callable[[Fraction, Fraction], bool]] = {
    "<": operator.lt,
    "<=": operator.le,
    "=": operator.eq,
    ">": operator.gt,
    ">=": operator.ge,
}


@dataclass(frozen=True)
class Clause:
    text: str
    left: Fraction
    relation: str
    right: Fraction

    @property
    def holds(self) -> bool:
        return _RELATIONS[self.relation](self.left, self.right)

    def render(self) -> str:
        mark = "ok  " if self.holds else "FAIL"
        return f"{mark} {self.text}: {self.left} {self.relation} {self.right}"


@dataclass(frozen=True)
class ConditionReport:
    claim: str
    clauses: tuple[Clause, ...]

    @property
    def satisfied(self) -> bool:
        return all(c.holds for c in self.clauses)

    @property
    def failed(self) -> list[Clause]:
        return [c for c in self.clauses if not c.holds]

    def render(self) -> str:
        head = f"{self.claim}: {'satisfied' if self.satisfied else 'not satisfied'}"
        return "\n".join([head] + ["  " + c.render() for c in self.clauses])

    def as_records(self) -> list[dict]:
        return [
            {
                "claim": self.claim,
                "clause": c.text,
                "left": str(c.left),
                "relation": c.relation,
                "right": str(c.right),
                "holds": c.holds,
            }
            for c in self.clauses
        ]


def _need_horizon(params: UtilityParams, d: int) -> None:
    if params.horizon < d:
        raise ValueError(f"this check needs benefits up to b{d}")


def _terms(p: UtilityParams):
    return p.b(1), p.b(2), p.b(3), p.b(4), p.link_cost, p.rent_fraction, p.entry_factor


def check_theorem1(params: UtilityParams) -> ConditionReport:
    """Star formation."""
    _need_horizon(params, 3)
    b1, b2, b3, _, c, g, c0 = _terms(params)
    return ConditionReport("Thm1", (
        Clause("b1 - b2 + gamma*b2 <= c", b1 - b2 + g * b2, "<=", c),
        Clause("c < b1", c, "<", b1),
        Clause("c0 < (1-gamma)(b2-b3)", c0, "<", (1 - g) * (b2 - b3)),
    ))


def check_theorem2(params: UtilityParams) -> ConditionReport:
    """Complete graph formation."""
    b1, b2, _, _, c, g, c0 = _terms(params)
    return ConditionReport("Thm2", (
        Clause("c < b1 - b2", c, "<", b1 - b2),
        Clause("c0 <= (1-gamma)*b2", c0, "<=", (1 - g) * b2),
    ))


def check_theorem3(params: UtilityParams) -> ConditionReport:
    """Bipartite Turán formation."""
    _need_horizon(params, 3)
    b1, b2, b3, _, c, g, c0 = _terms(params)
    return ConditionReport("Thm3", (
        Clause("gamma < (b2-b3)/(3b2-b3)", g, "<", (b2 - b3) / (3 * b2 - b3)),
        Clause("b1 - b2 + gamma(3b2-b3) < c", b1 - b2 + g * (3 * b2 - b3), "<", c),
        Clause("c < b1 - b3", c, "<", b1 - b3),
        Clause("(1-gamma)(b2-b3) < c0", (1 - g) * (b2 - b3), "<", c0),
        Clause("c0 <= (1-gamma)*b2", c0, "<=", (1 - g) * b2),
    ))


def lambda_value(params: UtilityParams) -> Fraction:
    """ceil(sigma/2 - 1) * (2 b2 - b3)."""
    if params.entry_cap is None:
        raise ValueError("the 2-star bound needs an entry cap sigma")
    return math.ceil(Fraction(params.entry_cap, 2) - 1) * (2 * params.b(2) - params.b(3))


def check_theorem4(params: UtilityParams) -> ConditionReport:
    """2-star formation for at most ``sigma`` nodes; reports branch i or ii."""
    _need_horizon(params, 4)
    if params.entry_cap is None:
        raise ValueError("the 2-star bound needs an entry cap sigma")
    if params.entry_cap < 4:
        raise ValueError("a 2-star needs an entry cap of at least 4 nodes")
    b1, b2, b3, b4, c, g, c0 = _terms(params)
    lam = lambda_value(params)
    split = (b2 - b3) / (lam - b3)
    entry = (
        Clause("(1-gamma)(b2-b3) < c0", (1 - g) * (b2 - b3), "<", c0),
        Clause("c0 < (1-gamma)(b2-b4)", c0, "<", (1 - g) * (b2 - b4)),
    )
    first = ConditionReport("Thm4i", entry + (
        Clause("gamma < (b2-b3)/(lambda-b3)", g, "<", split),
        Clause("gamma < b3/(b2+b3)", g, "<", b3 / (b2 + b3)),
        Clause("b1 - b3 + gamma(b2+b3) <= c", b1 - b3 + g * (b2 + b3), "<=", c),
        Clause("c < b1", c, "<", b1),
    ))
    if first.satisfied:
        return first
    second = ConditionReport("Thm4ii", entry + (
        Clause("(b2-b3)/(lambda-b3) <= gamma", split, "<=", g),
        Clause("gamma < b2/(lambda+b2)", g, "<", b2 / (lam + b2)),
        Clause("gamma < b3/(b2+b3)", g, "<", b3 / (b2 + b3)),
        Clause("b1 - b2 + gamma*b2 + gamma*lambda <= c", b1 - b2 + g * b2 + g * lam, "<=", c),
        Clause("c < b1", c, "<", b1),
    ))
    if second.satisfied or g >= split:
        return second
    return first


def check_corollary1(params: UtilityParams) -> ConditionReport:
    """2-star formation with no rents and no bound on the network size."""
    _need_horizon(params, 4)
    b1, b2, b3, b4, c, g, c0 = _terms(params)
    return ConditionReport("Cor1", (
        Clause("gamma = 0", g, "=", Fraction(0)),
        Clause("b1 - b3 <= c", b1 - b3, "<=", c),
        Clause("c < b1", c, "<", b1),
        Clause("b2 - b3 < c0", b2 - b3, "<", c0),
        Clause("c0 < b2 - b4", c0, "<", b2 - b4),
    ))


def check_lemma1(params: UtilityParams) -> ConditionReport:
    """Necessary conditions for every k-star (k >= 3) to be pairwise stable."""
    _need_horizon(params, 3)
    b1, _, b3, _, c, g, _ = _terms(params)
    return ConditionReport("Lem1", (
        Clause("gamma = 0", g, "=", Fraction(0)),
        Clause("c = b1 - b3", c, "=", b1 - b3),
    ))


def check_theorem5(params: UtilityParams, k: int) -> ConditionReport:
    """k-star formation from the 2k-node base graph."""
    if k < 3:
        raise ValueError("k-star checks need k >= 3")
    _need_horizon(params, 4)
    b1, b2, b3, b4, c, g, c0 = _terms(params)
    return ConditionReport("Thm5", (
        Clause("gamma = 0", g, "=", Fraction(0)),
        Clause("c = b1 - b3", c, "=", b1 - b3),
        Clause("b2 - b3 < c0", b2 - b3, "<", c0),
        Clause("c0 < b2 - b4", c0, "<", b2 - b4),
    ))


CHECKERS = {
    "thm1": check_theorem1,
    "thm2": check_theorem2,
    "thm3": check_theorem3,
    "thm4": check_theorem4,
    "cor1": check_corollary1,
    "lem1": check_lemma1,
}


def check_claim(name: str, params: UtilityParams, k: Optional[int] = None) -> ConditionReport:
    key = name.strip().lower()
    if key == "thm5":
        return check_theorem5(params, 3 if k is None else k)
    if key.startswith("lem3"):
        return efficiency_regime_report(params, k if k is not None else 5)
    if key not in CHECKERS:
        raise ValueError(f"unknown claim {name!r}")
    return CHECKERS[key](params)


# ---------------------------------------------------------------------------
# efficiency regimes


class EfficiencyRegime(str, Enum):
    COMPLETE = "complete_efficient"
    STAR = "star_efficient"
    NULL = "null_efficient"
    BOUNDARY = "boundary"


def efficiency_regime(params: UtilityParams, mu: int) -> EfficiencyRegime:
    """Which topology maximizes rent-free welfare on ``mu`` nodes; ties are Boundary."""
    b1, b2 = params.b(1), params.b(2)
    c = params.link_cost
    low = b1 - b2
    high = b1 + Fraction(mu - 2, 2) * b2
    if c < low:
        return EfficiencyRegime.COMPLETE
    if c == low or c == high:
        return EfficiencyRegime.BOUNDARY
    if c < high:
        return EfficiencyRegime.STAR
    return EfficiencyRegime.NULL


def efficiency_regime_report(params: UtilityParams, mu: int) -> ConditionReport:
    regime = efficiency_regime(params, mu)
    b1, b2, c = params.b(1), params.b(2), params.link_cost
    high = b1 + Fraction(mu - 2, 2) * b2
    clauses = {
        EfficiencyRegime.COMPLETE: (Clause("c < b1 - b2", c, "<", b1 - b2),),
        EfficiencyRegime.STAR: (Clause("b1 - b2 < c", b1 - b2, "<", c),
                                Clause("c < b1 + (mu-2)/2*b2", c, "<", high)),
        EfficiencyRegime.NULL: (Clause("c > b1 + (mu-2)/2*b2", c, ">", high),),
        EfficiencyRegime.BOUNDARY: (
            Clause("c = b1 - b2", c, "=", b1 - b2) if c == b1 - b2
            else Clause("c = b1 + (mu-2)/2*b2", c, "=", high),
        ),
    }[regime]
    return ConditionReport(f"Lem3({regime.value})", clauses)


# ---------------------------------------------------------------------------
# base graph, prediction and closed-form efficiency ratios


def base_graph_k_star(k: int) -> Graph:
    """Complete graph on centers ``0..k-1``, leaf ``k+i`` hanging off center ``i``."""
    if k < 3:
        raise ValueError("the k-star base graph is defined for k >= 3")
    return k_star_graph(k, [1] * k)


def predicted_topology(params: UtilityParams, k_hint: Optional[int] = None) -> Optional[TopologyLabel]:
    """Topology promised by the first satisfied sufficient condition, else None."""
    if check_theorem2(params).satisfied:
        return TopologyLabel(Topology.COMPLETE)
    if params.horizon >= 3:
        if check_theorem1(params).satisfied:
            return TopologyLabel(Topology.STAR)
        if check_theorem3(params).satisfied:
            return TopologyLabel(Topology.BIPARTITE_TURAN)
    if params.horizon >= 4:
        if k_hint is not None and k_hint >= 3 and check_theorem5(params, k_hint).satisfied:
            return TopologyLabel(Topology.KSTAR, k=k_hint)
        if params.entry_cap is not None and params.entry_cap >= 4:
            if check_theorem4(params).satisfied:
                return TopologyLabel(Topology.KSTAR, k=2)
        if check_corollary1(params).satisfied:
            return TopologyLabel(Topology.KSTAR, k=2)
    return None


def efficiency_ratio_closed_form(label: TopologyLabel, params: UtilityParams,
                                 k: Optional[int] = None) -> Fraction:
    """Large-network welfare of ``label`` relative to the star."""
    b1, b2, b3, c = params.b(1), params.b(2), params.b(3), params.link_cost
    if label.kind is Topology.STAR:
        return Fraction(1)
    if label.kind is Topology.BIPARTITE_TURAN:
        return Fraction(1, 2) + (b1 - c) / (2 * b2)
    if label.kind is Topology.KSTAR:
        k = k if k is not None else label.k
        if k is None or k < 2:
            raise ValueError("k-star ratio needs the number of centers")
        return Fraction(1, k) + (1 - Fraction(1, k)) * b3 / b2
    raise ValueError(f"no closed-form ratio for {label}")


# ---------------------------------------------------------------------------
# samplers


def _draw(rng: random.Random, lo: Fraction, hi: Fraction, denominator: int,
          lo_open: bool = True, hi_open: bool = True) -> Fraction:
    """Random fraction with the given denominator inside the interval."""
    if hi < lo or (hi == lo and (lo_open or hi_open)):
        raise ValueError(f"empty interval [{lo}, {hi}]")
    d = denominator
    while True:
        first = math.floor(lo * d)
        last = math.ceil(hi * d)
        ks = [i for i in range(first, last + 1)
              if (lo < Fraction(i, d) or (not lo_open and lo == Fraction(i, d)))
              and (Fraction(i, d) < hi or (not hi_open and hi == Fraction(i, d)))]
        if ks:
            return Fraction(rng.choice(ks), d)
        d *= 2


def _decreasing_benefits(rng: random.Random, denominator: int) -> tuple[Fraction, ...]:
    b1 = Fraction(1)
    b2 = _draw(rng, Fraction(3, 10), Fraction(7, 10), denominator)
    b3 = _draw(rng, b2 / 3, b2 * Fraction(9, 10), denominator)
    b4 = _draw(rng, b3 / 4, b3 * Fraction(9, 10), denominator)
    return b1, b2, b3, b4


def sample_params(claim: str, seed: int, denominator: int = 100,
                  sigma: int = 10, max_tries: int = 1000) -> UtilityParams:
    """Random parameters certified to satisfy ``claim``'s checker."""
    rng = random.Random(seed)
    key = claim.lower()
    for _ in range(max_tries):
        b = _decreasing_benefits(rng, denominator)
        b1, b2, b3, b4 = b
        try:
            if key == "thm1":
                g = _draw(rng, Fraction(0), Fraction(1, 2), denominator, lo_open=False)
                c = _draw(rng, b1 - b2 + g * b2, b1, denominator, lo_open=False)
                c0 = _draw(rng, Fraction(0), (1 - g) * (b2 - b3), denominator, lo_open=False)
                p = UtilityParams(b, c, g, c0)
            elif key == "thm2":
                g = _draw(rng, Fraction(0), Fraction(1, 2), denominator, lo_open=False)
                c = _draw(rng, Fraction(0), b1 - b2, denominator)
                c0 = _draw(rng, Fraction(0), (1 - g) * b2, denominator, lo_open=False, hi_open=False)
                p = UtilityParams(b, c, g, c0)
            elif key == "thm3":
                g = _draw(rng, Fraction(0), (b2 - b3) / (3 * b2 - b3), denominator, lo_open=False)
                c = _draw(rng, b1 - b2 + g * (3 * b2 - b3), b1 - b3, denominator)
                c0 = _draw(rng, (1 - g) * (b2 - b3), (1 - g) * b2, denominator, hi_open=False)
                p = UtilityParams(b, c, g, c0)
            elif key in ("thm4", "thm4i", "thm4ii"):
                probe = UtilityParams(b, Fraction(1, 2), Fraction(0), Fraction(0), sigma)
                lam = lambda_value(probe)
                split = (b2 - b3) / (lam - b3)
                cap = b3 / (b2 + b3)
                if key == "thm4ii" or (key == "thm4" and rng.random() < 0.5):
                    g = _draw(rng, split, min(b2 / (lam + b2), cap), denominator, lo_open=False)
                    c_lo = b1 - b2 + g * b2 + g * lam
                else:
                    g = _draw(rng, Fraction(0), min(split, cap), denominator, lo_open=False)
                    c_lo = b1 - b3 + g * (b2 + b3)
                c = _draw(rng, c_lo, b1, denominator, lo_open=False)
                c0 = _draw(rng, (1 - g) * (b2 - b3), (1 - g) * (b2 - b4), denominator)
                p = UtilityParams(b, c, g, c0, sigma)
            elif key == "cor1":
                c = _draw(rng, b1 - b3, b1, denominator, lo_open=False)
                c0 = _draw(rng, b2 - b3, b2 - b4, denominator)
                p = UtilityParams(b, c, Fraction(0), c0)
            elif key == "thm5":
                c0 = _draw(rng, b2 - b3, b2 - b4, denominator)
                p = UtilityParams(b, b1 - b3, Fraction(0), c0)
            else:
                raise ValueError(f"no sampler for claim {claim!r}")
        except ValueError as exc:
            if "no sampler" in str(exc):
                raise
            continue
        report = check_claim("thm4" if key.startswith("thm4") else key, p, k=3)
        if report.satisfied:
            return p
    raise RuntimeError(f"could not sample parameters for {claim}")
