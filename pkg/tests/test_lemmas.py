from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossfam.constructors import power_set
from crossfam.family import HypothesisNotMet, SetFamily, downward_closure, level, meets_at_least, star
from crossfam.lemmas import (
    CHECKERS,
    SearchSpec,
    antichains_above,
    check_calc,
    check_fiber_count,
    check_mu_link,
    check_mu_trace,
    check_sperner,
    check_sum_bound,
    check_transversal_chain,
    check_transversal_cover,
    check_transversal_partition,
    check_transversal_star_bound,
    fuzz,
    probe_eta,
    probe_sum_conjecture,
)

from conftest import S, explicit_level, explicit_members, fam

FOUR_PAIRS = level(power_set(4), 2)
MEETS_12 = meets_at_least(FOUR_PAIRS, S(1, 2), 1)
TRIANGLE = fam(4, [1, 2], [1, 3], [2, 3])


class TestSperner:
    def test_power_set_four(self):
        res = check_sperner(power_set(4), 1, 2)
        assert (res.lhs, res.rhs, res.holds, res.equality) == (12, 12, True, True)

    def test_power_set_six(self):
        res = check_sperner(power_set(6), 2, 3)
        assert (res.lhs, res.rhs) == (60, 60) and res.equality

    def test_two_bases(self):
        h = downward_closure(fam(8, [1, 2, 3, 4, 5], [4, 5, 6, 7, 8]))
        # counted by scanning 2^[8]
        n1, n2 = len(explicit_level(h, 1)), len(explicit_level(h, 2))
        assert (n1, n2) == (8, 19)  # {4,5} lies in both bases
        res = check_sperner(h, 1, 2)
        assert res.lhs == n2 * 2 and res.rhs == comb(4, 1) * n1 and res.holds

    def test_hypothesis(self):
        with pytest.raises(HypothesisNotMet, match="hypothesis not met"):
            check_sperner(power_set(4), 2, 3)


class TestMuTrace:
    def test_power_set(self):
        res = check_mu_trace(power_set(5), S(1), S(1, 2))
        assert res.lhs == 3 and res.rhs == 3 and res.holds

    def test_empty_x_y(self):
        h = downward_closure(fam(5, [1, 2, 3], [3, 4, 5]))
        res = check_mu_trace(h, 0, 0)
        assert res.lhs == res.rhs == h.mu

    def test_two_bases(self):
        h = downward_closure(fam(5, [1, 2, 3], [3, 4, 5]))
        # G ∩ {2,3} = {3}: {3}, {1,3}, {3,4}, {3,5}, {3,4,5}; maximal remainders {1}, {4,5}
        members = [g & ~S(3) for g in explicit_members(h) if g & S(2, 3) == S(3)]
        assert sorted(members) == sorted([0, S(1), S(4), S(5), S(4, 5)])
        res = check_mu_trace(h, S(3), S(2, 3))
        assert res.lhs == 1 and res.rhs == 1 and res.holds
        assert res.certificate["trace_maximal"] == [[1], [4, 5]]

    def test_hypothesis(self):
        with pytest.raises(HypothesisNotMet):
            check_mu_trace(downward_closure(fam(3, [1], [2])), S(1, 2), S(1, 2))
        with pytest.raises(HypothesisNotMet):
            check_mu_trace(power_set(3), S(1), S(2))


class TestMuLink:
    def test_three_sets(self):
        res = check_mu_link(level(power_set(5), 3), S(1))
        assert res.lhs == 2 and res.rhs == 2 and res.holds

    def test_empty_x(self):
        f = fam(4, [1, 2], [1, 3, 4])
        res = check_mu_link(f, 0)
        assert res.lhs == res.rhs and res.equality

    def test_non_hereditary(self):
        res = check_mu_link(fam(4, [1, 2], [1, 3, 4]), S(1))
        assert res.certificate["link_maximal"] == [[2], [3, 4]]
        assert (res.lhs, res.rhs) == (1, 1)

    def test_hypothesis(self):
        with pytest.raises(HypothesisNotMet):
            check_mu_link(fam(4, [1, 2]), S(3))


class TestFiberCount:
    def test_power_set_four(self):
        res = check_fiber_count(power_set(4), 2, 2, 1, S(1), S(1, 2))
        assert res.certificate["fiber_size"] == 2
        assert (res.lhs, res.rhs) == (2, 2) and res.equality

    def test_power_set_six(self):
        res = check_fiber_count(power_set(6), 2, 3, 1, S(1), S(1, 2))
        assert res.certificate["fiber_size"] == 6
        assert (res.lhs, res.rhs) == (6, 6) and res.holds

    def test_u_equals_t(self):
        h = downward_closure(fam(7, [1, 2, 3, 4, 5, 6], [2, 3, 4, 5, 6, 7]))
        res = check_fiber_count(h, 2, 3, 1, S(2), S(2))
        fiber = [g for g in explicit_level(h, 3) if g & S(2) == S(2)]
        assert res.certificate["fiber_size"] == len(fiber) and res.holds

    def test_hypothesis(self):
        with pytest.raises(HypothesisNotMet):
            check_fiber_count(power_set(3), 2, 3, 1, S(1), S(1, 2))


class TestTransversalCover:
    def test_meets_12(self):
        res = check_transversal_cover(MEETS_12, S(1, 2), 1)
        assert (res.lhs, res.rhs) == (5, 6) and res.holds
        assert res.certificate["star_size"] == 3

    def test_single_set(self):
        res = check_transversal_cover(fam(5, [1, 2, 3]), S(1, 2, 3), 2)
        assert res.lhs == 1 and res.rhs == 3

    def test_star_equality(self):
        res = check_transversal_cover(star(level(power_set(5), 2), S(1)), S(1), 1)
        assert (res.lhs, res.rhs) == (4, 4) and res.equality

    def test_hypothesis(self):
        with pytest.raises(HypothesisNotMet):
            check_transversal_cover(FOUR_PAIRS, S(1, 2), 1)


class TestTransversalPartition:
    def test_meets_12(self):
        res = check_transversal_partition(MEETS_12, S(1, 2), S(3), 1)
        assert res.holds and res.lhs == 2

    def test_empty_star(self):
        res = check_transversal_partition(fam(4, [1, 2]), S(1, 2), S(3), 1)
        assert res.holds and res.lhs == res.rhs == 0

    def test_hypothesis(self):
        with pytest.raises(HypothesisNotMet):
            check_transversal_partition(MEETS_12, S(1, 2), S(1), 1)

    @settings(max_examples=200)
    @given(st.integers(2, 7).flatmap(lambda n: st.tuples(
        st.just(n),
        st.lists(st.integers(1, (1 << n) - 1), max_size=12),
        st.integers(1, (1 << n) - 1),
        st.integers(1, (1 << n) - 1),
    )))
    def test_set_equality(self, inst):
        n, raw, x, core = inst
        t = core.bit_count()
        a = SetFamily.of(n, [m for m in raw if (m & x).bit_count() >= t])
        if core & x == core:
            return
        assert check_transversal_partition(a, x, core, t).holds


class TestTransversalChain:
    def test_triangle(self):
        res = check_transversal_chain(TRIANGLE, TRIANGLE, 2, 2, 1)
        assert res.holds and res.lhs == 3
        c = res.certificate
        assert c["star_size"] == 1 and res.rhs == 2 * 2 * 1

    def test_meets_12_is_not_cross_intersecting(self):
        with pytest.raises(HypothesisNotMet, match="cross"):
            check_transversal_chain(MEETS_12, MEETS_12, 2, 2, 1)

    def test_trivial_b(self):
        st1 = star(FOUR_PAIRS, S(1))
        with pytest.raises(HypothesisNotMet, match="trivial"):
            check_transversal_chain(st1, st1, 2, 2, 1)

    def test_single_a(self):
        res = check_transversal_chain(fam(5, [1, 2, 3]), fam(5, [1, 4], [2, 5]), 3, 2, 1)
        assert res.lhs == 1 and res.holds


class TestTransversalStarBound:
    def test_triangle_in_power_set(self):
        h = power_set(8)
        res = check_transversal_star_bound(h, TRIANGLE_8, TRIANGLE_8, 2, 2, 1)
        # |A| (mu - r) = 3 * 6, s (r - t) C(s,t) |H^(2)({1})| = 2 * 1 * 2 * 7
        assert (res.lhs, res.rhs) == (18, 28) and res.holds

    def test_r_equals_t(self):
        h = power_set(6)
        a = fam(6, [1])
        with pytest.raises(HypothesisNotMet):
            check_transversal_star_bound(h, a, fam(6, [1, 2], [1, 3]), 1, 2, 1)

    def test_mu_too_small(self):
        h = power_set(2)
        with pytest.raises(HypothesisNotMet):
            check_transversal_star_bound(h, fam(2, [1, 2]), fam(2, [1, 2]), 2, 2, 1)


TRIANGLE_8 = fam(8, [1, 2], [1, 3], [2, 3])


class TestCalc:
    def test_2_2_1(self):
        res = check_calc(2, 2, 1, 11)
        assert (res.lhs, res.rhs) == (8, 9) and res.holds and "part_ii" not in res.certificate

    def test_1_2_1_equality_in_part_ii(self):
        res = check_calc(1, 2, 1, 5)
        assert (res.lhs, res.rhs) == (2, 3)
        assert res.certificate["part_ii"] == {"lhs": 4, "rhs": 4, "holds": True, "equality": True}
        assert res.holds

    def test_2_3_1(self):
        res = check_calc(2, 3, 1, 20)
        assert res.certificate["c"] == 20
        assert (res.lhs, res.rhs) == (2 * 2 * 2 * 2, 17)
        assert res.certificate["part_ii"]["lhs"] == 2 * 3 * 2
        assert res.certificate["part_ii"]["rhs"] == 18
        assert res.holds

    def test_hypothesis(self):
        with pytest.raises(HypothesisNotMet):
            check_calc(2, 2, 1, 10)
        with pytest.raises(HypothesisNotMet):
            check_calc(1, 1, 1, 100)


class TestSumBound:
    def test_power_set_five(self):
        res = check_sum_bound(power_set(5), 1, 2, 1, S(1))
        assert (res.lhs, res.rhs) == (5, 10) and res.holds and not res.equality

    def test_boundary_equality(self):
        res = check_sum_bound(power_set(3), 1, 2, 1, S(1))
        assert (res.lhs, res.rhs) == (3, 3) and res.equality and res.holds
        assert res.certificate["equality_conditions_met"] is True

    def test_hypothesis(self):
        with pytest.raises(HypothesisNotMet):
            check_sum_bound(power_set(2), 1, 2, 1, S(1))


class TestSumConjecture:
    def test_above_threshold(self):
        res = probe_sum_conjecture(power_set(6), 1, 2, 1)
        assert (res.lhs, res.rhs) == (6, 15) and res.asserted and res.holds

    def test_below_threshold_is_observation(self):
        res = probe_sum_conjecture(power_set(4), 2, 2, 1)
        assert (res.lhs, res.rhs) == (6, 6) and res.equality and not res.asserted

    def test_tiny(self):
        res = probe_sum_conjecture(power_set(3), 1, 2, 1)
        assert (res.lhs, res.rhs) == (3, 3)


class TestProbeEta:
    def test_antichain_count(self):
        # {[6]} plus any non-empty collection of the six 5-subsets
        assert sum(1 for _ in antichains_above(6, 5)) == 1 + 63

    def test_exhaustive_above_threshold(self):
        rep = probe_eta(1, 2, 1, SearchSpec(6, "exhaustive"), mu_floor=5)
        assert rep.population == 64 and rep.counterexamples == []

    def test_r_s_t_all_one(self):
        rep = probe_eta(1, 1, 1, SearchSpec(5, "random", count=30, seed=2))
        assert rep.counterexamples == []

    def test_random_is_deterministic(self):
        spec = SearchSpec(7, "random", count=200, seed=7)
        assert probe_eta(1, 2, 1, spec).to_json() == probe_eta(1, 2, 1, spec).to_json()


@pytest.mark.parametrize("lemma", CHECKERS)
def test_small_fuzz(lemma):
    summary = fuzz(lemma, 100, seed=99)
    assert summary.instances == 100 and summary.ok
