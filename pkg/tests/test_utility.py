from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from conftest import B, graphs, naive_utility, params
from netform.graph import (
    Graph,
    complete_graph,
    path_graph,
    shortest_distances,
    star_graph,
    with_edge,
)
from netform.utility import (
    EntryContext,
    UtilityParams,
    efficiency_value,
    social_welfare,
    utilities,
    utility,
    utility_breakdown,
)


class TestParams:
    @pytest.mark.parametrize("b", [(F(1),), (F(1), F(1)), (F(1), F(2)), (F(1), F(0))])
    def test_bad_benefits(self, b):
        with pytest.raises(ValueError):
            UtilityParams.make(b, 1, 0, 0)

    @pytest.mark.parametrize("c,gamma,c0", [(0, 0, 0), (1, 1, 0), (1, -1, 0), (1, 0, -1)])
    def test_bad_scalars(self, c, gamma, c0):
        with pytest.raises(ValueError):
            UtilityParams.make(B, c, gamma, c0)

    def test_float_rejected(self):
        with pytest.raises(TypeError):
            UtilityParams.make(B, 0.6, 0, 0)

    def test_decimal_strings_exact(self):
        assert UtilityParams.make(B, "0.3", 0, 0).link_cost == F(3, 10)

    def test_benefit_past_horizon(self, pstar):
        assert pstar.b(4) == F(1, 5) and pstar.b(5) == 0

    def test_replace_aliases(self, pstar):
        q = pstar.replace(c0=F(1, 5), gamma=0)
        assert q.entry_factor == F(1, 5) and q.rent_fraction == 0 and q.link_cost == F(3, 5)

    def test_entry_context_invariants(self):
        with pytest.raises(ValueError):
            EntryContext(entrant=1)
        with pytest.raises(ValueError):
            EntryContext(2, 2)


class TestUtility:
    def test_star_leaf(self, pstar):
        assert utility(star_graph(4), 1, pstar) == F(13, 10)

    def test_star_center(self, pstar):
        assert utility(star_graph(4), 0, pstar) == F(3, 2)

    def test_closed_forms_larger_stars(self, pstar):
        # leaf: b1 - c + (n-2)(1-gamma)b2; center: (n-1)(b1-c) + gamma*C(n-1,2)*2b2
        b1, b2, c, g = F(1), F(1, 2), F(3, 5), F(1, 10)
        for n in range(3, 9):
            star = star_graph(n)
            assert utility(star, 1, pstar) == b1 - c + (n - 2) * (1 - g) * b2
            assert utility(star, 0, pstar) == (n - 1) * (b1 - c) + g * (n - 1) * (n - 2) * b2

    def test_isolated_node(self, pstar):
        g = Graph.from_edges(4, [(0, 1)])
        assert utility(g, 3, pstar) == 0

    def test_invalid_node(self, pstar):
        with pytest.raises(ValueError):
            utility(star_graph(3), 3, pstar)

    def test_horizon_cuts_far_pairs(self):
        p = UtilityParams.make((1, F(1, 2)), F(1, 4), 0, 0)
        # distance 3 contributes nothing with D=2
        assert utility(path_graph(4), 0, p) == F(3, 4) + F(1, 2)

    def test_entrant_fee_and_edge(self, pstar):
        g = star_graph(3).add_node()
        ctx = EntryContext(3, 0)
        # joining the center of a 3-star: b1 - c + 2((1-gamma)b2 - c0)
        assert utility(g, 3, pstar, ctx) == F(11, 10)
        assert utility(g, 3, pstar, EntryContext(3, 1)) == F(51, 50)

    def test_entry_fee_not_charged_to_others(self, pstar):
        g = star_graph(3).add_node()
        ctx = EntryContext(3, 0)
        assert utility(g, 0, pstar, ctx) == utility(g.add_edge(3, 0), 0, pstar)

    @settings(max_examples=200, deadline=None)
    @given(graphs(max_n=7), params(), st.data())
    def test_matches_naive(self, g, p, data):
        if g.n == 0:
            return
        j = data.draw(st.integers(0, g.n - 1))
        assert utility(g, j, p) == naive_utility(g, j, p)

    @settings(max_examples=100, deadline=None)
    @given(graphs(min_n=2, max_n=7), params(), st.data())
    def test_entry_matches_naive(self, g, p, data):
        g = g.add_node()
        entrant = g.n - 1
        target = data.draw(st.integers(0, g.n - 2))
        j = data.draw(st.integers(0, g.n - 1))
        got = utility(g, j, p, EntryContext(entrant, target))
        assert got == naive_utility(g, j, p, entrant, target)


class TestBreakdown:
    def test_center_bridging(self, pstar):
        assert utility_breakdown(star_graph(4), 0, pstar).bridging == F(3, 10)

    def test_leaf_rents(self, pstar):
        assert utility_breakdown(star_graph(4), 1, pstar).rents_paid == F(1, 10)

    def test_empty_graph_all_zero(self, pstar):
        bd = utility_breakdown(Graph.empty(3), 1, pstar)
        assert all(getattr(bd, f) == 0 for f in bd.__dataclass_fields__)

    @settings(max_examples=150, deadline=None)
    @given(graphs(min_n=1, max_n=8), params(), st.data())
    def test_total_identity(self, g, p, data):
        j = data.draw(st.integers(0, g.n - 1))
        bd = utility_breakdown(g, j, p)
        assert bd.total == -bd.entry_fee + bd.direct - bd.link_costs + bd.indirect - bd.rents_paid + bd.bridging
        assert bd.total == utility(g, j, p)


class TestWelfare:
    def test_star(self, pstar):
        assert social_welfare(star_graph(4), pstar) == F(27, 5)
        assert efficiency_value(star_graph(4), pstar) == F(27, 5)

    def test_k4(self, pstar):
        assert efficiency_value(complete_graph(4), pstar) == F(24, 5)

    def test_empty(self, pstar):
        assert social_welfare(Graph.empty(4), pstar) == 0
        assert efficiency_value(Graph.empty(0), pstar) == 0

    def test_zero_surplus_edge(self):
        p = UtilityParams.make(B, 1, F(1, 10), 0)
        assert social_welfare(Graph.from_edges(2, [(0, 1)]), p) == 0

    def test_star_closed_form(self, pstar):
        # 2(mu-1)(b1-c) + C(mu-1,2)*2*b2
        for mu in (4, 7, 12):
            expected = 2 * (mu - 1) * F(2, 5) + (mu - 1) * (mu - 2) * F(1, 2)
            assert efficiency_value(star_graph(mu), pstar) == expected

    @settings(max_examples=200, deadline=None)
    @given(graphs(max_n=10), params())
    def test_rent_conservation_and_welfare_identity(self, g, p):
        rents = sum((utility_breakdown(g, j, p).rents_paid for j in range(g.n)), F(0))
        bridging = sum((utility_breakdown(g, j, p).bridging for j in range(g.n)), F(0))
        assert rents == bridging
        assert social_welfare(g, p) == efficiency_value(g, p)
        assert sum(utilities(g, p), F(0)) == social_welfare(g, p)

    @settings(max_examples=150, deadline=None)
    @given(graphs(min_n=3, max_n=9), params(), st.data())
    def test_monotone_decay(self, g, p, data):
        p = p.replace(gamma=0, c0=0)
        absent = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)]
        if not absent:
            return
        u, v = data.draw(st.sampled_from(absent))
        h = with_edge(g, u, v)
        before, after = shortest_distances(g), shortest_distances(h)
        for j in range(g.n):
            if j in (u, v):
                continue
            assert utility(h, j, p) >= utility(g, j, p)
            # every distance weakly shrinks
            for w in range(g.n):
                if before[j][w] >= 0:
                    assert 0 <= after[j][w] <= before[j][w]
