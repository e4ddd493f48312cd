"""Executable checkers for the inequalities and identities about hereditary
families and cross-t-intersecting pairs, plus conjecture probes.

Every checker either raises :class:`HypothesisNotMet` or returns a
:class:`CheckResult` whose ``lhs``/``rhs`` are exact integers. Ratios are
compared after cross-multiplication, never in floating point.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import asdict, dataclass, field
from math import comb
from typing import Any, Optional

from .constructors import RandomSpec, power_set, random_hereditary
from .family import (
    HereditaryFamily,
    HypothesisNotMet,
    SetFamily,
    c_threshold,
    elements,
    family_mu,
    full_mask,
    level,
    link,
    maximal_members,
    meets_at_least,
    restricted_trace,
    star,
    subsets_of_size,
)
from .solver import CrossContext, NoCrossPair, candidate_cores, solve_m, star_pair


@dataclass(frozen=True)
class CheckResult:
    lemma_id: str
    instance_digest: str
    holds: bool
    lhs: int
    rhs: int
    equality: bool
    certificate: dict = field(default_factory=dict)
    asserted: bool = True

    def to_json(self) -> dict:
        return asdict(self)


def _encode(obj: Any) -> Any:
    if isinstance(obj, HereditaryFamily):
        return {"n": obj.n, "bases": obj.bases.to_lists()}
    if isinstance(obj, SetFamily):
        return {"n": obj.n, "members": obj.to_lists()}
    return obj


def digest(**inputs: Any) -> str:
    blob = json.dumps({k: _encode(v) for k, v in inputs.items()}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _require(cond: bool, why: str) -> None:
    if not cond:
        raise HypothesisNotMet(f"hypothesis not met: {why}")


def _set(mask: int) -> list[int]:
    return elements(mask)


def is_t_transversal(x: int, family: SetFamily, t: int) -> bool:
    return all((x & a).bit_count() >= t for a in family)


def cross_t_intersecting(a: SetFamily, b: SetFamily, t: int) -> bool:
    return all((x & y).bit_count() >= t for x in a for y in b)


def is_trivial(family: SetFamily, t: int) -> bool:
    """All members share at least t elements."""
    common = full_mask(family.n)
    for m in family:
        common &= m
    return common.bit_count() >= t


# --- lemma checkers --------------------------------------------------------

def check_sperner(h: HereditaryFamily, r: int, s: int) -> CheckResult:
    """|H^(s)| * C(s, s-r) >= C(mu-r, s-r) * |H^(r)| for 0 <= r <= s <= mu - r."""
    m = h.mu
    _require(0 <= r <= s <= m - r, f"need 0 <= r <= s <= mu - r (mu={m})")
    hs, hr = len(level(h, s)), len(level(h, r))
    lhs = hs * comb(s, s - r)
    rhs = comb(m - r, s - r) * hr
    return CheckResult(
        "sperner", digest(h=h, r=r, s=s), lhs >= rhs, lhs, rhs, lhs == rhs,
        {"mu": m, "level_s": hs, "level_r": hr},
    )


def check_mu_trace(h: HereditaryFamily, x: int, y: int) -> CheckResult:
    _require(x & y == x, "X must be a subset of Y")
    trace = restricted_trace(h, x, y)
    _require(trace is not None, "no member H with H ∩ Y = X")
    rhs = h.mu - y.bit_count()
    return CheckResult(
        "mu_trace", digest(h=h, x=x, y=y), trace.mu >= rhs, trace.mu, rhs, trace.mu == rhs,
        {"X": _set(x), "Y": _set(y), "trace_maximal": [_set(b) for b in maximal_members(trace.family)]},
    )


def check_mu_link(f: SetFamily, x: int) -> CheckResult:
    """Link bound for an arbitrary family; mu is the least size of a maximal member."""
    _require(bool(star(f, x)), "F(X) is empty")
    lk = link(f, x)
    lhs = family_mu(lk)
    rhs = family_mu(f) - x.bit_count()
    return CheckResult(
        "mu_link", digest(f=f, x=x), lhs >= rhs, lhs, rhs, lhs == rhs,
        {"X": _set(x), "link_maximal": [_set(b) for b in maximal_members(lk)]},
    )


def check_fiber_count(h: HereditaryFamily, r: int, s: int, t: int, core: int, u_set: int) -> CheckResult:
    """|{H in H^(s): H ∩ U = T}| * C(s-t, k) >= C(mu-r, k) * |H^(r)(U)|, k = s+u-r-t."""
    u = u_set.bit_count()
    m = h.mu
    _require(0 <= t <= u <= r, "need 0 <= t <= |U| <= r")
    _require(s >= r + t - u, "need s >= r + t - |U|")
    _require(m >= r + s - t, f"need mu >= r + s - t (mu={m})")
    _require(core & u_set == core and core.bit_count() == t, "T must be a t-subset of U")
    upper = star(level(h, r), u_set)
    _require(bool(upper), "H^(r)(U) is empty")
    k = s + u - r - t
    fiber = [g for g in level(h, s) if g & u_set == core]
    lhs = len(fiber) * comb(s - t, k)
    rhs = comb(m - r, k) * len(upper)
    return CheckResult(
        "fiber_count", digest(h=h, r=r, s=s, t=t, T=core, U=u_set), lhs >= rhs, lhs, rhs, lhs == rhs,
        {"T": _set(core), "U": _set(u_set), "fiber_size": len(fiber), "star_size": len(upper), "k": k},
    )


def check_transversal_cover(a: SetFamily, x: int, t: int) -> CheckResult:
    """|A| <= C(|X|, t) * |A(T)| for the best t-subset T of X."""
    _require(t >= 0 and x.bit_count() >= t, "need 0 <= t <= |X|")
    _require(is_t_transversal(x, a, t), "X is not a t-transversal of A")
    best_core, best = None, -1
    for core in subsets_of_size(x, t):
        size = len(star(a, core))
        if size > best:
            best_core, best = core, size
    lhs = len(a)
    rhs = comb(x.bit_count(), t) * best
    return CheckResult(
        "transversal_cover", digest(a=a, x=x, t=t), lhs <= rhs, lhs, rhs, lhs == rhs,
        {"X": _set(x), "T": _set(best_core), "star_size": best},
    )


def check_transversal_partition(a: SetFamily, x: int, core: int, t: int) -> CheckResult:
    """A(T) equals the union of A(T ∪ {x}) over x in X \\ T, as families."""
    _require(is_t_transversal(x, a, t), "X is not a t-transversal of A")
    _require(core.bit_count() == t, "|T| must equal t")
    _require(core & x != core, "T must not be a subset of X")
    left = set(star(a, core))
    right: set[int] = set()
    rest = x & ~core
    while rest:
        low = rest & -rest
        right.update(star(a, core | low))
        rest ^= low
    same = left == right
    return CheckResult(
        "transversal_partition", digest(a=a, x=x, T=core, t=t), same, len(left), len(right), same,
        {"X": _set(x), "T": _set(core), "left_only": [_set(m) for m in sorted(left - right)],
         "right_only": [_set(m) for m in sorted(right - left)]},
    )


def _cross_hypotheses(a: SetFamily, b: SetFamily, r: int, s: int, t: int) -> None:
    _require(bool(a) and bool(b), "A and B must be non-empty")
    _require(all(m.bit_count() == r for m in a), "A must be r-uniform")
    _require(all(m.bit_count() == s for m in b), "B must be s-uniform")
    _require(cross_t_intersecting(a, b, t), "A and B are not cross-t-intersecting")
    _require(not is_trivial(b, t), "B is a trivial t-intersecting family")


def check_transversal_chain(a: SetFamily, b: SetFamily, r: int, s: int, t: int) -> CheckResult:
    """|A| <= s * C(s,t) * |A(T ∪ {x})| for some B, X in B, T ⊆ B, x in X \\ T."""
    _cross_hypotheses(a, b, r, s, t)
    best, witness = -1, None
    for base in b:
        for core in subsets_of_size(base, t):
            for other in b:
                if core & other == core:
                    continue
                rest = other & ~core
                while rest:
                    low = rest & -rest
                    size = len(star(a, core | low))
                    if size > best:
                        best, witness = size, (base, core, other, low)
                    rest ^= low
    lhs = len(a)
    rhs = s * comb(s, t) * best
    base, core, other, low = witness
    return CheckResult(
        "transversal_chain", digest(a=a, b=b, r=r, s=s, t=t), lhs <= rhs, lhs, rhs, lhs == rhs,
        {"B": _set(base), "T": _set(core), "X": _set(other), "x": _set(low)[0], "star_size": best},
    )


def check_transversal_star_bound(h: HereditaryFamily, a: SetFamily, b: SetFamily, r: int, s: int, t: int) -> CheckResult:
    """|A| * (mu - r) < s(r-t) C(s,t) |H^(r)(T)| for some t-set T inside a member of B."""
    m = h.mu
    _require(1 <= t <= r, "need 1 <= t <= r")
    _require(m >= 2 * r - t, f"need mu >= 2r - t (mu={m})")
    _require(a.is_subfamily_of(level(h, r)), "A must lie in H^(r)")
    _cross_hypotheses(a, b, r, s, t)
    hr = level(h, r)
    best, best_core = -1, None
    seen: set[int] = set()
    for base in b:
        for core in subsets_of_size(base, t):
            if core in seen:
                continue
            seen.add(core)
            size = len(star(hr, core))
            if size > best:
                best, best_core = size, core
    lhs = len(a) * (m - r)
    rhs = s * (r - t) * comb(s, t) * best
    return CheckResult(
        "transversal_star_bound", digest(h=h, a=a, b=b, r=r, s=s, t=t), lhs < rhs, lhs, rhs, lhs == rhs,
        {"T": _set(best_core), "star_size": best, "mu": m},
    )


def check_calc(r: int, s: int, t: int, n: int) -> CheckResult:
    """(i) 2 r (s-t) C(r,t) < n - s; (ii) if r < s, 2 C(s,t) C(s-t,s-r) <= C(n-r,s-r)."""
    _require(1 <= t <= r <= s, "need 1 <= t <= r <= s")
    _require((r, s) != (t, t), "(r, s) must differ from (t, t)")
    c = c_threshold(r, s, t).value
    _require(n >= c, f"need n >= c(r,s,t) = {c}")
    lhs = 2 * r * (s - t) * comb(r, t)
    rhs = n - s
    part_i = lhs < rhs
    cert: dict = {"c": c, "part_i": {"lhs": lhs, "rhs": rhs, "holds": part_i}}
    holds = part_i
    if r < s:
        lhs2 = 2 * comb(s, t) * comb(s - t, s - r)
        rhs2 = comb(n - r, s - r)
        cert["part_ii"] = {"lhs": lhs2, "rhs": rhs2, "holds": lhs2 <= rhs2, "equality": lhs2 == rhs2}
        holds = holds and lhs2 <= rhs2
    return CheckResult("calc", digest(r=r, s=s, t=t, n=n), holds, lhs, rhs, lhs == rhs, cert)


def check_sum_bound(h: HereditaryFamily, r: int, s: int, t: int, core: int) -> CheckResult:
    """|H^(r)(I)| + |{B in H^(s): |B ∩ I| >= t}| <= |H^(s)|; equality forces t = 1, mu = r + s."""
    m = h.mu
    _require(1 <= t <= r <= s, "need 1 <= t <= r <= s")
    _require(m >= r + s - t + 1, f"need mu >= r + s - t + 1 (mu={m})")
    _require(core in h and t <= core.bit_count() <= r, "need I in H with t <= |I| <= r")
    hs = level(h, s)
    sp = star_pair(level(h, r), hs, core, t)
    lhs, rhs = sp.size(), len(hs)
    equal = lhs == rhs
    conditions = t == 1 and m == r + s
    holds = lhs <= rhs and (not equal or conditions)
    return CheckResult(
        "sum_bound", digest(h=h, r=r, s=s, t=t, I=core), holds, lhs, rhs, equal,
        {"I": _set(core), "A_size": len(sp.a), "B_size": len(sp.b), "mu": m,
         "equality_conditions_met": conditions if equal else None},
    )


# --- conjecture probes ------------------------------------------------------

def probe_sum_conjecture(h: HereditaryFamily, r: int, s: int, t: int) -> CheckResult:
    """m <= |H^(s)|. Asserted only when mu >= c(r,s,t); below that it is an observation."""
    m = h.mu
    _require(1 <= t <= r <= s, "need 1 <= t <= r <= s")
    _require(m >= r + s - t + 1, f"need mu >= r + s - t + 1 (mu={m})")
    ctx = CrossContext.from_levels(h, r, s, t)
    try:
        best = solve_m(ctx).m
    except NoCrossPair:
        best = 0
    rhs = len(ctx.g)
    asserted = m >= c_threshold(r, s, t).value
    return CheckResult(
        "sum_conjecture", digest(h=h, r=r, s=s, t=t), best <= rhs, best, rhs, best == rhs,
        {"mu": m, "c": c_threshold(r, s, t).value}, asserted,
    )


@dataclass(frozen=True)
class SearchSpec:
    n: int
    mode: str = "random"  # "exhaustive" | "random"
    count: int = 200
    seed: int = 0
    max_families: Optional[int] = None


@dataclass
class ProbeReport:
    r: int
    s: int
    t: int
    mu_floor: int
    mode: str
    seed: Optional[int]
    population: int = 0
    skipped: int = 0
    counterexamples: list = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)


def antichains_above(n: int, floor: int, limit: Optional[int] = None):
    """Every antichain of subsets of [n] whose members all have size >= floor."""
    pool = [m for m in range(1 << n) if m.bit_count() >= floor]
    pool.sort(key=lambda m: (-m.bit_count(), m))
    produced = 0

    def grow(i: int, chosen: list[int]):
        nonlocal produced
        if limit is not None and produced >= limit:
            return
        if i == len(pool):
            if chosen:
                produced += 1
                yield list(chosen)
            return
        yield from grow(i + 1, chosen)
        cand = pool[i]
        # Larger sets come first, so only containment in a chosen set can clash.
        if not any(cand & c == cand for c in chosen):
            chosen.append(cand)
            yield from grow(i + 1, chosen)
            chosen.pop()

    yield from grow(0, [])


def _population(r: int, s: int, t: int, spec: SearchSpec, floor: int):
    if spec.mode == "exhaustive":
        if spec.n > 7:
            raise ValueError("exhaustive populations are limited to n <= 7")
        for bases in antichains_above(spec.n, floor, spec.max_families):
            yield HereditaryFamily(spec.n, SetFamily.of(spec.n, bases)), None
        return
    rng = random.Random(spec.seed)
    for _ in range(spec.count):
        sub_seed = rng.getrandbits(63)
        lo = rng.randint(floor, spec.n)
        rs = RandomSpec(spec.n, rng.randint(1, 4), lo, rng.randint(lo, spec.n), floor, sub_seed)
        yield random_hereditary(rs), sub_seed


def probe_eta(r: int, s: int, t: int, spec: SearchSpec, mu_floor: Optional[int] = None) -> ProbeReport:
    """Look for H with mu >= r+s-t+1 where no star pair attains m."""
    if not 1 <= t <= r <= s:
        raise ValueError("need 1 <= t <= r <= s")
    floor = r + s - t + 1 if mu_floor is None else mu_floor
    report = ProbeReport(r, s, t, floor, spec.mode, spec.seed if spec.mode == "random" else None)
    for h, sub_seed in _population(r, s, t, spec, floor):
        ctx = CrossContext.from_levels(h, r, s, t)
        try:
            best = solve_m(ctx).m
        except NoCrossPair:
            report.skipped += 1
            continue
        report.population += 1
        attained = None
        for core in candidate_cores(h, t, r):
            sp = star_pair(ctx.f, ctx.g, core, t)
            if sp.a and sp.b and sp.size() == best:
                attained = core
                break
        if attained is None:
            report.counterexamples.append(
                {"n": h.n, "bases": h.bases.to_lists(), "mu": h.mu, "m": best, "seed": sub_seed}
            )
    return report


# --- fuzz campaign ----------------------------------------------------------

CHECKERS = (
    "sperner",
    "mu_trace",
    "mu_link",
    "fiber_count",
    "transversal_cover",
    "transversal_partition",
    "transversal_chain",
    "transversal_star_bound",
    "calc",
    "sum_bound",
)


def _rand_h(rng: random.Random, n: int, floor: int) -> HereditaryFamily:
    lo = rng.randint(floor, n)
    spec = RandomSpec(n, rng.randint(1, 4), lo, rng.randint(lo, n), floor, rng.getrandbits(63))
    return random_hereditary(spec)


def _rand_subset(rng: random.Random, mask: int, k: Optional[int] = None) -> int:
    bits = [1 << p for p in range(mask.bit_length()) if mask >> p & 1]
    if k is None:
        k = rng.randint(0, len(bits))
    return sum(rng.sample(bits, k))


def _rand_family(rng: random.Random, n: int, count: int, size: Optional[int] = None) -> list[int]:
    ground = full_mask(n)
    return [_rand_subset(rng, ground, size if size is not None else rng.randint(1, n)) for _ in range(count)]


def _gen_sperner(rng):
    n = rng.randint(2, 9)
    h = _rand_h(rng, n, rng.randint(n // 2, n))
    r = rng.randint(0, h.mu // 2)
    s = rng.randint(min(r + 1, h.mu - r), h.mu - r)
    return check_sperner, (h, r, s)


def _gen_mu_trace(rng):
    h = _rand_h(rng, rng.randint(1, 9), 0)
    n = h.n
    base = rng.choice(h.bases.members)
    y = _rand_subset(rng, full_mask(n))
    x = y & _rand_subset(rng, base)
    return check_mu_trace, (h, x, y)


def _gen_mu_link(rng):
    n = rng.randint(1, 8)
    f = SetFamily.of(n, _rand_family(rng, n, rng.randint(1, 8)))
    x = _rand_subset(rng, rng.choice(f.members))
    return check_mu_link, (f, x)


def _gen_fiber_count(rng):
    n = rng.randint(2, 9)
    r = rng.randint(0, min(3, n // 2))
    t = rng.randint(0, r)
    u = rng.randint(t, r)
    s_lo = max(r + t - u, 0)
    s = rng.randint(s_lo, s_lo + 2)
    floor = r + s - t
    if floor > n:
        n = floor
    h = _rand_h(rng, n, floor)
    base = rng.choice(h.bases.members)
    u_set = _rand_subset(rng, base, u)
    core = _rand_subset(rng, u_set, t)
    return check_fiber_count, (h, r, s, t, core, u_set)


def _transversal_pool(rng, n, t, x):
    pool = [m for m in _rand_family(rng, n, rng.randint(1, 14)) if (m & x).bit_count() >= t]
    return SetFamily.of(n, pool)


def _gen_transversal_cover(rng):
    n = rng.randint(1, 9)
    t = rng.randint(0, min(3, n))
    x = _rand_subset(rng, full_mask(n), rng.randint(t, n))
    return check_transversal_cover, (_transversal_pool(rng, n, t, x), x, t)


def _gen_transversal_partition(rng):
    n = rng.randint(2, 9)
    t = rng.randint(1, min(3, n - 1))
    x = _rand_subset(rng, full_mask(n), rng.randint(t, n - 1))
    while True:
        core = _rand_subset(rng, full_mask(n), t)
        if core & x != core:
            break
    return check_transversal_partition, (_transversal_pool(rng, n, t, x), x, core, t)


def _cross_pair(rng, n, r, s, t, hr: Optional[SetFamily] = None):
    """Random non-empty A (inside ``hr`` if given) and a non-trivial B ⊆ dual(A)."""
    universe_r = hr if hr is not None else SetFamily.of(n, subsets_of_size(full_mask(n), r))
    universe_s = list(subsets_of_size(full_mask(n), s))
    for _ in range(200):
        if not universe_r:
            return None
        a_list = rng.sample(universe_r.members, rng.randint(1, min(4, len(universe_r))))
        dual_b = [y for y in universe_s if all((y & x).bit_count() >= t for x in a_list)]
        if len(dual_b) < 2:
            continue
        b_list = rng.sample(dual_b, rng.randint(2, min(8, len(dual_b))))
        b = SetFamily.of(n, b_list)
        if not is_trivial(b, t):
            return SetFamily.of(n, a_list), b
    return None


def _gen_transversal_chain(rng):
    while True:
        n = rng.randint(3, 8)
        t = rng.randint(1, 2)
        r = rng.randint(t, min(n, 4))
        s = rng.randint(r, min(n, r + 2))
        pair = _cross_pair(rng, n, r, s, t)
        if pair:
            return check_transversal_chain, (pair[0], pair[1], r, s, t)


def _gen_transversal_star_bound(rng):
    while True:
        t = rng.randint(1, 2)
        r = rng.randint(t + 1, t + 2)
        s = rng.randint(r, r + 1)
        n = rng.randint(max(2 * r - t, s) + 1, 9)
        h = _rand_h(rng, n, 2 * r - t)
        pair = _cross_pair(rng, n, r, s, t, level(h, r))
        if pair:
            return check_transversal_star_bound, (h, pair[0], pair[1], r, s, t)


def _gen_calc(rng):
    t = rng.randint(1, 3)
    r = rng.randint(t, t + 3)
    s = rng.randint(r, r + 3)
    if (r, s) == (t, t):
        s += 1
    c = c_threshold(r, s, t).value
    n = c + rng.choice([0, 0, 1, rng.randint(0, 10 * c)])
    return check_calc, (r, s, t, n)


def _gen_sum_bound(rng):
    t = rng.randint(1, 2)
    r = rng.randint(t, 3)
    s = rng.randint(r, 4)
    floor = r + s - t + 1
    n = rng.randint(floor, min(floor + 3, 10))
    if rng.random() < 0.25:
        h = power_set(floor)
    else:
        h = _rand_h(rng, n, floor)
    base = rng.choice(h.bases.members)
    core = _rand_subset(rng, base, rng.randint(t, r))
    return check_sum_bound, (h, r, s, t, core)


GENERATORS = {
    "sperner": _gen_sperner,
    "mu_trace": _gen_mu_trace,
    "mu_link": _gen_mu_link,
    "fiber_count": _gen_fiber_count,
    "transversal_cover": _gen_transversal_cover,
    "transversal_partition": _gen_transversal_partition,
    "transversal_chain": _gen_transversal_chain,
    "transversal_star_bound": _gen_transversal_star_bound,
    "calc": _gen_calc,
    "sum_bound": _gen_sum_bound,
}


@dataclass
class CampaignSummary:
    lemma: str
    seed: int
    instances: int = 0
    hypothesis_rejects: int = 0
    failures: list = field(default_factory=list)
    equalities: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def fuzz(lemma: str, count: int, seed: int, on_result=None) -> CampaignSummary:
    """Run ``count`` hypothesis-satisfying instances of one checker.

    Each instance uses its own sub-seed so a single line reproduces it.
    """
    gen = GENERATORS[lemma]
    master = random.Random(f"{lemma}:{seed}")
    summary = CampaignSummary(lemma, seed)
    while summary.instances < count:
        sub_seed = master.getrandbits(63)
        fn, args = gen(random.Random(sub_seed))
        try:
            res = fn(*args)
        except HypothesisNotMet:
            summary.hypothesis_rejects += 1
            continue
        summary.instances += 1
        summary.equalities += res.equality
        if not res.holds:
            summary.failures.append({"sub_seed": sub_seed, "result": res.to_json()})
        if on_result is not None:
            on_result(sub_seed, res)
    return summary

