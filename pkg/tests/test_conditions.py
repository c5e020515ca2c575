from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from conftest import make
from netform.conditions import (
    Clause,
    EfficiencyRegime,
    base_graph_k_star,
    check_claim,
    check_corollary1,
    check_lemma1,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    check_theorem4,
    check_theorem5,
    efficiency_ratio_closed_form,
    efficiency_regime,
    efficiency_regime_report,
    lambda_value,
    predicted_topology,
    sample_params,
)
from netform.graph import Topology, TopologyLabel, classify_topology
from netform.utility import UtilityParams

THM4 = make("4/5", "1/20", "1/4", sigma=10)
COR1 = make("7/10", 0, "1/4")


class TestClause:
    def test_relations(self):
        assert Clause("x", F(1), "<", F(2)).holds
        assert not Clause("x", F(2), "<", F(2)).holds
        assert Clause("x", F(2), "<=", F(2)).holds
        assert Clause("x", F(2), "=", F(2)).holds

    def test_render_exact(self, pstar):
        text = check_theorem1(pstar).render()
        assert text.splitlines()[0] == "Thm1: satisfied"
        assert "11/20 <= 3/5" in text and "1/10 < 9/50" in text

    def test_records(self, pstar):
        recs = check_theorem3(pstar).as_records()
        assert len(recs) == 5 and {r["claim"] for r in recs} == {"Thm3"}
        assert any(not r["holds"] for r in recs)


class TestTheorem1:
    def test_pstar(self, pstar):
        assert check_theorem1(pstar).satisfied

    def test_entry_factor_too_high(self, pstar):
        rep = check_theorem1(pstar.replace(c0=F(1, 5)))
        assert [c.text for c in rep.failed] == ["c0 < (1-gamma)(b2-b3)"]

    def test_c_equals_b1(self, pstar):
        rep = check_theorem1(pstar.replace(c=F(1)))
        assert [c.text for c in rep.failed] == ["c < b1"]

    def test_needs_b3(self):
        with pytest.raises(ValueError):
            check_theorem1(UtilityParams.make((1, F(1, 2)), F(3, 5), 0, 0))


class TestTheorem2:
    def test_example(self, complete_params):
        assert check_theorem2(complete_params).satisfied

    def test_strict_c(self, complete_params):
        assert not check_theorem2(complete_params.replace(c=F(1, 2))).satisfied

    def test_c0_inclusive(self, complete_params):
        assert check_theorem2(complete_params.replace(c0=F(9, 20))).satisfied


class TestTheorem3:
    def test_example(self, turan_params):
        rep = check_theorem3(turan_params)
        assert rep.satisfied and rep.clauses[0].right == F(1, 6)

    def test_gamma_boundary(self, turan_params):
        assert not check_theorem3(turan_params.replace(gamma=F(1, 6))).satisfied

    def test_c_upper(self, turan_params):
        rep = check_theorem3(turan_params.replace(c=F(7, 10)))
        assert [c.text for c in rep.failed] == ["c < b1 - b3"]

    def test_pstar_fails(self, pstar):
        assert not check_theorem3(pstar).satisfied


class TestTheorem4:
    def test_lambda(self):
        assert lambda_value(THM4) == F(14, 5)

    def test_branch_i(self):
        rep = check_theorem4(THM4)
        assert rep.claim == "Thm4i" and rep.satisfied
        values = {c.text: (c.left, c.right) for c in rep.clauses}
        assert values["gamma < (b2-b3)/(lambda-b3)"][1] == F(2, 25)
        assert values["b1 - b3 + gamma(b2+b3) <= c"][0] == F(37, 50)
        assert values["(1-gamma)(b2-b3) < c0"][0] == F(19, 100)
        assert values["c0 < (1-gamma)(b2-b4)"][1] == F(57, 200)

    def test_branch_boundary(self):
        rep = check_theorem4(THM4.replace(gamma=F(2, 25)))
        assert rep.claim == "Thm4ii"

    def test_sigma_required(self):
        with pytest.raises(ValueError):
            check_theorem4(THM4.replace(sigma=None))

    def test_sigma_too_small(self):
        with pytest.raises(ValueError):
            check_theorem4(THM4.replace(sigma=3))

    def test_branch_ii_sample(self):
        p = sample_params("thm4ii", 7)
        assert check_theorem4(p).claim == "Thm4ii" and check_theorem4(p).satisfied


class TestCorollaryAndTheorem5:
    def test_cor1(self):
        assert check_corollary1(COR1).satisfied

    def test_cor1_gamma(self):
        assert not check_corollary1(COR1.replace(gamma=F(1, 10))).satisfied

    def test_cor1_c0_boundary(self):
        rep = check_corollary1(COR1.replace(c0=F(1, 5)))
        assert [c.text for c in rep.failed] == ["b2 - b3 < c0"]

    def test_thm5(self, thm5_params):
        assert check_theorem5(thm5_params, 3).satisfied

    def test_thm5_c_off(self, thm5_params):
        assert not check_theorem5(thm5_params.replace(c=F(69, 100)), 3).satisfied

    def test_thm5_gamma(self, thm5_params):
        assert not check_theorem5(thm5_params.replace(gamma=F(1, 100)), 3).satisfied

    def test_thm5_k(self, thm5_params):
        with pytest.raises(ValueError):
            check_theorem5(thm5_params, 2)

    def test_lemma1(self, thm5_params):
        assert check_lemma1(thm5_params).satisfied
        assert not check_lemma1(thm5_params.replace(c=F(71, 100))).satisfied


class TestDispatch:
    def test_check_claim(self, pstar):
        assert check_claim("THM1", pstar).satisfied
        assert check_claim("lem3", pstar, k=5).claim == "Lem3(star_efficient)"
        with pytest.raises(ValueError):
            check_claim("thm9", pstar)

    def test_predicted(self, pstar, complete_params, turan_params, thm5_params):
        assert predicted_topology(pstar).kind is Topology.STAR
        assert predicted_topology(complete_params).kind is Topology.COMPLETE
        assert predicted_topology(turan_params).kind is Topology.BIPARTITE_TURAN
        assert predicted_topology(thm5_params, 3) == TopologyLabel(Topology.KSTAR, k=3)
        assert predicted_topology(thm5_params) == TopologyLabel(Topology.KSTAR, k=2)
        assert predicted_topology(THM4) == TopologyLabel(Topology.KSTAR, k=2)

    def test_predicted_unknown(self, pstar):
        assert predicted_topology(pstar.replace(c=F(11, 10))) is None


class TestEfficiencyRegime:
    def test_examples(self, pstar):
        assert efficiency_regime(pstar, 5) is EfficiencyRegime.STAR
        assert efficiency_regime(pstar.replace(c=F(2, 5)), 5) is EfficiencyRegime.COMPLETE
        assert efficiency_regime(pstar.replace(c=F(1, 2)), 5) is EfficiencyRegime.BOUNDARY
        assert efficiency_regime(pstar.replace(c=F(2)), 5) is EfficiencyRegime.NULL
        assert efficiency_regime(pstar.replace(c=F(7, 4)), 5) is EfficiencyRegime.BOUNDARY

    def test_report(self, pstar):
        rep = efficiency_regime_report(pstar, 5)
        assert rep.satisfied and rep.clauses[1].right == F(7, 4)
        boundary = efficiency_regime_report(pstar.replace(c=F(1, 2)), 5)
        assert boundary.clauses[0].relation == "="


class TestBaseGraph:
    def test_k3(self):
        g = base_graph_k_star(3)
        assert g.n == 6 and g.edge_count == 6
        assert classify_topology(g) == TopologyLabel(Topology.KSTAR, k=3, leaf_counts=(1, 1, 1))
        assert all(g.has_edge(a, b) for a in range(3) for b in range(a + 1, 3))
        assert all(g.neighbors(3 + i) == [i] for i in range(3))

    def test_k4(self):
        g = base_graph_k_star(4)
        assert g.n == 8 and g.edge_count == 10

    def test_k2(self):
        with pytest.raises(ValueError):
            base_graph_k_star(2)


class TestClosedFormRatio:
    def test_turan(self, turan_params):
        label = TopologyLabel(Topology.BIPARTITE_TURAN)
        assert efficiency_ratio_closed_form(label, turan_params) == F(17, 20)

    def test_kstar(self, thm5_params):
        assert efficiency_ratio_closed_form(TopologyLabel(Topology.KSTAR, k=3), thm5_params) == F(11, 15)

    def test_kstar_limit(self):
        # b3 close to b2 drives the ratio to one
        p = UtilityParams.make((1, F(1, 2), F(1, 2) - F(1, 10**6), F(1, 10)), F(1, 2), 0, 0)
        r = efficiency_ratio_closed_form(TopologyLabel(Topology.KSTAR, k=3), p)
        assert 1 - r < F(1, 10**5)

    def test_star(self, pstar):
        assert efficiency_ratio_closed_form(TopologyLabel(Topology.STAR), pstar) == 1


CLAIMS = ["thm1", "thm2", "thm3", "thm4", "thm4i", "thm4ii", "cor1", "thm5"]


class TestSamplers:
    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from(CLAIMS), st.integers(0, 10**6))
    def test_samples_satisfy_checker(self, claim, seed):
        p = sample_params(claim, seed)
        key = "thm4" if claim.startswith("thm4") else claim
        rep = check_claim(key, p, k=3)
        assert rep.satisfied
        if claim in ("thm4i", "thm4ii"):
            assert rep.claim == {"thm4i": "Thm4i", "thm4ii": "Thm4ii"}[claim]

    def test_deterministic(self):
        assert sample_params("thm3", 11) == sample_params("thm3", 11)

    def test_unknown(self):
        with pytest.raises(ValueError):
            sample_params("thm9", 0)

    @settings(max_examples=200, deadline=None)
    @given(st.sampled_from(["thm1", "thm3"]), st.integers(0, 10**6), st.integers(0, 60))
    def test_regions_disjoint_in_c0(self, claim, seed, c0_num):
        # at fixed b and gamma, no c0 satisfies both the star and the Turan entry bands
        p = sample_params(claim, seed).replace(c0=F(c0_num, 100))
        g, b2, b3 = p.rent_fraction, p.b(2), p.b(3)
        star_band = check_theorem1(p).clauses[2].holds
        turan_band = check_theorem3(p).clauses[3].holds
        assert not (star_band and turan_band)
        assert not (check_theorem1(p).satisfied and check_theorem3(p).satisfied)
        if star_band:
            assert p.entry_factor < (1 - g) * (b2 - b3)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 10**6), st.integers(0, 100), st.integers(1, 100))
    def test_lemma1_inside_cor1(self, seed, gamma, c0):
        base = sample_params("thm5", seed)
        for p in (base, base.replace(gamma=F(gamma, 1000)), base.replace(c0=F(c0, 200))):
            if check_theorem5(p, 3).satisfied:
                assert check_corollary1(p).satisfied
