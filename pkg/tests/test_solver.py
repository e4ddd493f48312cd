import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossfam.constructors import RandomSpec, power_set, random_hereditary
from crossfam.family import FamilyError, SetFamily, downward_closure, level, meets_at_least, star
from crossfam.solver import (
    CapExceeded,
    CrossContext,
    CrossPair,
    NoCrossPair,
    brute_force_m,
    classify_maximizers,
    closure,
    dual,
    max_t_intersecting,
    solve_m,
)

from conftest import S, brute_cross_m, fam, hereditary_families


def pairs(n):
    return level(power_set(n), 2)


def ctx_of(h, r, s, t):
    return CrossContext.from_levels(h, r, s, t)


def as_tuples(report):
    return {(p.a.members, p.b.members) for p in report.maximizers}


class TestDual:
    def test_pairs_meeting(self):
        got = dual(fam(4, [1, 2]), pairs(4), 1)
        assert len(got) == 5 and S(3, 4) not in got

    def test_empty_source(self):
        assert dual(SetFamily.empty(4), pairs(4), 1) == pairs(4)

    def test_nothing_two_intersects_all_pairs(self):
        assert len(dual(pairs(4), pairs(4), 2)) == 0


class TestClosure:
    def test_top(self):
        ctx = ctx_of(power_set(4), 2, 2, 2)
        assert dual(ctx.f, ctx.g, 2) == SetFamily.empty(4)
        assert closure(ctx.f, ctx) == ctx.f

    def test_singleton(self):
        ctx = ctx_of(power_set(4), 2, 2, 2)
        assert closure(fam(4, [1, 2]), ctx) == fam(4, [1, 2])

    def test_idempotent_random(self):
        rng = random.Random(3)
        ctx = ctx_of(power_set(6), 2, 3, 1)
        for _ in range(100):
            a = SetFamily.of(6, rng.sample(ctx.f.members, rng.randint(0, 6)))
            once = closure(a, ctx)
            assert a.is_subfamily_of(once)
            assert closure(once, ctx) == once


@st.composite
def contexts(draw, max_side=10):
    h = draw(hereditary_families(max_n=7, min_n=2))
    r = draw(st.integers(1, max(1, h.mu)))
    s = draw(st.integers(r, max(r, max(b.bit_count() for b in h.bases))))
    t = draw(st.integers(1, r))
    ctx = CrossContext.from_levels(h, r, s, t)
    if len(ctx.f) > max_side or len(ctx.g) > max_side:
        ctx = CrossContext(
            SetFamily.of(h.n, ctx.f.members[:max_side]), SetFamily.of(h.n, ctx.g.members[:max_side]), t, r, s
        )
    return ctx


class TestGaloisLaws:
    @settings(max_examples=80)
    @given(contexts(), st.data())
    def test_laws(self, ctx, data):
        sub = data.draw(st.sets(st.sampled_from(ctx.f.members))) if ctx.f else set()
        extra = data.draw(st.sets(st.sampled_from(ctx.f.members))) if ctx.f else set()
        a = SetFamily.of(ctx.f.n, sub)
        a2 = SetFamily.of(ctx.f.n, sub | extra)
        t = ctx.t
        assert dual(a2, ctx.g, t).is_subfamily_of(dual(a, ctx.g, t))
        assert a.is_subfamily_of(dual(dual(a, ctx.g, t), ctx.f, t))
        d1 = dual(a, ctx.g, t)
        assert dual(dual(d1, ctx.f, t), ctx.g, t) == d1


class TestSolve:
    def test_hilton_milner_n4(self):
        rep = solve_m(ctx_of(power_set(4), 2, 2, 1))
        assert rep.m == 6 == comb(4, 2) - comb(2, 2) + 1
        best, winners = brute_cross_m(pairs(4), pairs(4), 1)
        assert best == 6 and len(winners) == 62
        assert as_tuples(rep) == winners

    def test_two_intersecting_n4(self):
        rep = solve_m(ctx_of(power_set(4), 2, 2, 2))
        assert rep.m == 2
        assert as_tuples(rep) == {((x,), (x,)) for x in pairs(4)}

    def test_frankl_tokushige_n7(self):
        h = power_set(7)
        rep = solve_m(ctx_of(h, 2, 3, 1))
        assert rep.m == 1 + (comb(7, 3) - comb(5, 3)) == 26
        star_pair = CrossPair(fam(7, [1, 2]), meets_at_least(level(h, 3), S(1, 2), 1))
        assert star_pair in rep.maximizers

    def test_hilton_milner_n5_oracle(self):
        ctx = ctx_of(power_set(5), 2, 2, 1)
        assert brute_force_m(ctx).m == 8 == comb(5, 2) - comb(3, 2) + 1

    def test_no_cross_pair(self):
        ctx = CrossContext(fam(4, [1, 2]), fam(4, [3, 4]), 1, 2, 2)
        with pytest.raises(NoCrossPair, match="no cross-t-intersecting pair exists"):
            solve_m(ctx)
        with pytest.raises(NoCrossPair):
            brute_force_m(ctx)

    def test_oracle_cap(self):
        with pytest.raises(CapExceeded, match="oracle cap"):
            brute_force_m(ctx_of(power_set(7), 2, 2, 1))

    def test_context_validation(self):
        with pytest.raises(FamilyError):
            CrossContext(fam(4, [1, 2]), fam(4, [3]), 1, 2, 2)
        with pytest.raises(FamilyError):
            CrossContext(fam(4, [1, 2]), fam(4, [3, 4]), 3, 2, 2)

    @settings(max_examples=120, deadline=None)
    @given(contexts())
    def test_matches_oracle(self, ctx):
        try:
            oracle = brute_force_m(ctx)
        except NoCrossPair:
            with pytest.raises(NoCrossPair):
                solve_m(ctx)
            return
        rep = solve_m(ctx)
        assert rep.m == oracle.m
        assert rep.maximizers == oracle.maximizers

    @settings(max_examples=40, deadline=None)
    @given(contexts(max_side=6))
    def test_matches_definition(self, ctx):
        best, winners = brute_cross_m(ctx.f, ctx.g, ctx.t)
        if best == 0:
            return
        rep = solve_m(ctx)
        assert rep.m == best and as_tuples(rep) == winners

    @settings(max_examples=60, deadline=None)
    @given(contexts())
    def test_maximizers_closed(self, ctx):
        try:
            rep = solve_m(ctx)
        except NoCrossPair:
            return
        for p in rep.maximizers:
            assert p.a and p.b and p.size() == rep.m
            assert dual(p.a, ctx.g, ctx.t) == p.b
            assert dual(p.b, ctx.f, ctx.t) == p.a

    def test_symmetric_when_f_equals_g(self):
        for n in (4, 5, 6):
            rep = solve_m(ctx_of(power_set(n), 2, 2, 1))
            got = as_tuples(rep)
            assert {(b, a) for a, b in got} == got

    def test_workers_give_identical_report(self):
        h = random_hereditary(RandomSpec(7, 3, 4, 6, 4, seed=11))
        ctx = ctx_of(h, 2, 3, 1)
        one, many = solve_m(ctx), solve_m(ctx, workers=2)
        assert one == many
        assert one.to_json() == many.to_json()

    def test_report_json_is_deterministic(self):
        ctx = ctx_of(power_set(5), 2, 2, 1)
        assert solve_m(ctx).to_json() == solve_m(ctx).to_json()
        assert solve_m(ctx).to_json()["stats"]["elapsed_ms"] is None


class TestClassify:
    def test_power_set_four_below_threshold(self):
        h = power_set(4)
        rep = classify_maximizers(solve_m(ctx_of(h, 2, 2, 1)), h)
        kinds = [c.kind for c in rep.classifications]
        # mu = 4 < c(2,2,1) = 11, so unstructured maximizers are allowed here
        assert kinds.count("star") == 10 and kinds.count("swapped") == 6
        for c in rep.classifications:
            if c.kind != "unstructured":
                assert 1 <= c.witness.bit_count() <= 2 and c.attains_m

    def test_above_threshold(self):
        h = power_set(6)
        rep = classify_maximizers(solve_m(ctx_of(h, 1, 2, 1)), h)
        assert rep.m == 6
        assert all(c.kind == "star" and c.witness.bit_count() == 1 and c.attains_m for c in rep.classifications)
        assert sorted(c.witness for c in rep.classifications) == [S(i) for i in range(1, 7)]

    def test_definitional_star(self):
        h = power_set(7)
        ctx = ctx_of(h, 2, 3, 1)
        rep = classify_maximizers(solve_m(ctx), h)
        i = rep.maximizers.index(CrossPair(star(ctx.f, S(1, 2)), meets_at_least(ctx.g, S(1, 2), 1)))
        assert rep.classifications[i].kind == "star" and rep.classifications[i].witness == S(1, 2)

    def test_witness_reproduces_pair(self):
        h = downward_closure(fam(6, [1, 2, 3, 4, 5], [2, 3, 4, 5, 6]))
        ctx = ctx_of(h, 1, 2, 1)
        rep = classify_maximizers(solve_m(ctx), h)
        for p, c in zip(rep.maximizers, rep.classifications):
            assert c.kind == "star"
            assert star(ctx.f, c.witness) == p.a and meets_at_least(ctx.g, c.witness, 1) == p.b


class TestMaxTIntersecting:
    def test_pairs_of_four(self):
        res = max_t_intersecting(pairs(4), 1)
        assert res.size == 3 and res.is_star_attained

    def test_pairs_of_five(self):
        res = max_t_intersecting(pairs(5), 1)
        assert res.size == comb(4, 1) and res.is_star_attained

    def test_single_set(self):
        res = max_t_intersecting(fam(5, [1, 2, 3]), 2)
        assert res.size == 1 and res.is_star_attained

    def test_t_two_in_power_set_levels_fails_star(self):
        # 2-intersecting 3-sets of [4]: all four 3-sets pairwise share 2 elements,
        # while a 2-star holds only two of them.
        res = max_t_intersecting(level(power_set(4), 3), 2)
        assert res.size == 4 and not res.is_star_attained

    def test_cap(self):
        with pytest.raises(CapExceeded):
            max_t_intersecting(pairs(8), 1)

    @settings(max_examples=40, deadline=None)
    @given(hereditary_families(max_n=6), st.integers(1, 3), st.integers(1, 2))
    def test_against_subset_scan(self, h, r, t):
        f = level(h, r)
        if len(f) > 12:
            return
        best = 0
        members = f.members
        for mask in range(1, 1 << len(members)):
            chosen = [members[i] for i in range(len(members)) if mask >> i & 1]
            if all(bin(x & y).count("1") >= t for x in chosen for y in chosen):
                best = max(best, len(chosen))
        res = max_t_intersecting(f, t)
        assert res.size == best
        assert all(bin(x & y).count("1") >= t for x in res.witness for y in res.witness)
