"""Exact m(F, G, t) and the full maximizer set M(F, G, t).

The cross-t-intersection relation between F and G induces a Galois
connection; every maximizing pair is a closed pair (a formal concept).
Reason: if (A, B) is cross-t-intersecting then B ⊆ dual(A), and
(A, dual(A)) is cross-t-intersecting too, so maximality forces
B = dual(A); symmetrically A = dual(B). Enumerating closed pairs therefore
loses no maximizer, ties included. The test suite cross-checks this
against a search over all subfamily pairs.

Closed extents are enumerated depth-first with the close-by-one
canonicity test, so each is produced exactly once, and subtrees are cut
when ``|A| + |remaining candidates| + |dual(A)|`` cannot reach the best sum.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

from .family import (
    FamilyError,
    HereditaryFamily,
    SetFamily,
    elements,
    level,
    meets_at_least,
    star,
    subsets_of_size,
)

DEFAULT_ORACLE_CAP = 20
DEFAULT_CLIQUE_CAP = 25


class NoCrossPair(FamilyError):
    """C(F, G, t) is empty."""

    def __init__(self) -> None:
        super().__init__("no cross-t-intersecting pair exists")


class CapExceeded(FamilyError):
    pass


def dual(s: SetFamily, target: SetFamily, t: int) -> SetFamily:
    """Members of ``target`` that t-intersect every member of ``s``."""
    return target.filter(lambda x: all((x & a).bit_count() >= t for a in s))


@dataclass(frozen=True)
class CrossContext:
    f: SetFamily
    g: SetFamily
    t: int
    r: int
    s: int

    def __post_init__(self) -> None:
        if not 1 <= self.t <= self.r <= self.s:
            raise FamilyError(f"need 1 <= t <= r <= s, got t={self.t}, r={self.r}, s={self.s}")
        if self.f.n != self.g.n:
            raise FamilyError("F and G must share a ground set")
        if any(a.bit_count() != self.r for a in self.f):
            raise FamilyError(f"F is not {self.r}-uniform")
        if any(b.bit_count() != self.s for b in self.g):
            raise FamilyError(f"G is not {self.s}-uniform")

    @classmethod
    def from_levels(cls, h: HereditaryFamily, r: int, s: int, t: int) -> CrossContext:
        return cls(level(h, r), level(h, s), t, r, s)

    def to_json(self) -> dict:
        return {
            "n": self.f.n,
            "r": self.r,
            "s": self.s,
            "t": self.t,
            "F_size": len(self.f),
            "G_size": len(self.g),
        }


@dataclass(frozen=True)
class CrossPair:
    a: SetFamily
    b: SetFamily

    def size(self) -> int:
        return len(self.a) + len(self.b)

    def sort_key(self):
        return (self.a.members, self.b.members)


@dataclass(frozen=True)
class Classification:
    kind: str  # "star" | "swapped" | "unstructured"
    witness: Optional[int] = None
    attains_m: Optional[bool] = None
    also_swapped: bool = False

    def to_json(self) -> dict:
        out = {"kind": self.kind, "I": elements(self.witness) if self.witness is not None else None}
        if self.attains_m is not None:
            out["attains_m"] = self.attains_m
        if self.also_swapped:
            out["anomaly"] = "pair matches both the star and the swapped pattern"
        return out


@dataclass(frozen=True)
class ExtremalReport:
    context: CrossContext
    m: int
    maximizers: tuple[CrossPair, ...]
    classifications: Optional[tuple[Classification, ...]] = None
    stats: dict = field(default_factory=dict, compare=False)

    def to_json(self, timing: bool = False) -> dict:
        rows = []
        for i, p in enumerate(self.maximizers):
            cls = self.classifications[i].to_json() if self.classifications else None
            rows.append({"A": p.a.to_lists(), "B": p.b.to_lists(), "classification": cls})
        stats = {"closed_pairs_visited": self.stats.get("closed_pairs_visited", 0)}
        stats["elapsed_ms"] = self.stats.get("elapsed_ms") if timing else None
        return {"m": self.m, "maximizers": rows, "context": self.context.to_json(), "stats": stats}


# --- relation tables -------------------------------------------------------

class _Relation:
    """Bit-matrix of the relation: rows[i] is the set of G-indices related to F[i].

    ``extent``/``intent`` intersect whole bytes of rows/columns at a time via
    precomputed AND tables.
    """

    def __init__(self, ctx: CrossContext) -> None:
        f, g, t = ctx.f.members, ctx.g.members, ctx.t
        self.nf, self.ng = len(f), len(g)
        self.rows = [sum(1 << j for j, y in enumerate(g) if (x & y).bit_count() >= t) for x in f]
        self.cols = [sum(1 << i for i, x in enumerate(f) if (x & y).bit_count() >= t) for y in g]
        self.all_f = (1 << self.nf) - 1
        self.all_g = (1 << self.ng) - 1
        self._col_and = _and_tables(self.cols, self.all_f)
        self._row_and = _and_tables(self.rows, self.all_g)

    def extent(self, intent: int) -> int:
        return _meet(self._col_and, intent, self.all_f)

    def intent(self, extent: int) -> int:
        return _meet(self._row_and, extent, self.all_g)


def _and_tables(vectors: list[int], top: int) -> list[list[int]]:
    tables = []
    for k in range(0, len(vectors), 8):
        chunk = vectors[k : k + 8]
        table = [top] * 256
        for byte in range(1, 256):
            low = byte & -byte
            p = low.bit_length() - 1
            table[byte] = table[byte ^ low] & chunk[p] if p < len(chunk) else table[byte ^ low]
        tables.append(table)
    return tables


def _meet(tables: list[list[int]], mask: int, top: int) -> int:
    acc = top
    k = 0
    while mask:
        byte = mask & 0xFF
        if byte:
            acc &= tables[k][byte]
        mask >>= 8
        k += 1
    return acc


def _seed_bound(rel: _Relation) -> int:
    """Sum of some non-empty closed pair: cheap lower bound for pruning."""
    best = 0
    for i in range(rel.nf):
        b = rel.rows[i]
        if b:
            best = max(best, rel.extent(b).bit_count() + b.bit_count())
    return best


def _explore(rel: _Relation, a0: int, b0: int, start: int, stop: int, best: int):
    """Close-by-one over children ``start <= j < stop`` of the root (a0, b0).

    Returns (best, maximizers as (extent, intent) index masks, visited).
    """
    found: list[tuple[int, int]] = []
    visited = 0
    nf = rel.nf

    def record(a: int, b: int) -> None:
        nonlocal best, found
        if a and b:
            total = a.bit_count() + b.bit_count()
            if total > best:
                best, found = total, [(a, b)]
            elif total == best:
                found.append((a, b))

    def descend(a: int, b: int, y: int, top: int) -> None:
        nonlocal visited
        for j in range(y, top):
            bit = 1 << j
            if a & bit:
                continue
            b2 = b & rel.rows[j]
            if not b2:
                continue  # every closed superset has an empty dual side
            below = bit - 1
            a2 = rel.extent(b2)
            if a2 & below != a & below:
                continue  # not canonical: reached from an earlier branch
            free = rel.all_f & ~a2 & ~((bit << 1) - 1)
            if a2.bit_count() + free.bit_count() + b2.bit_count() < best:
                continue
            visited += 1
            record(a2, b2)
            descend(a2, b2, j + 1, nf)

    descend(a0, b0, start, stop)
    return best, found, visited


def _explore_task(args):
    ctx, start, stop, best = args
    rel = _Relation(ctx)
    a0 = rel.extent(rel.all_g)
    return _explore(rel, a0, rel.intent(a0), start, stop, best)


def _finish(ctx: CrossContext, best: int, found, visited: int, t0: float) -> ExtremalReport:
    pairs = [CrossPair(ctx.f.pick(a), ctx.g.pick(b)) for a, b in set(found)]
    pairs.sort(key=CrossPair.sort_key)
    ordered = tuple(pairs)
    stats = {"closed_pairs_visited": visited, "elapsed_ms": int((time.perf_counter() - t0) * 1000)}
    return ExtremalReport(ctx, best, ordered, stats=stats)


def solve_m(ctx: CrossContext, workers: int = 1) -> ExtremalReport:
    """m(F, G, t) and every maximizing pair.

    With ``workers > 1`` the first-level branches are split across processes.
    Each branch starts from the same seed bound, so the report (including the
    visited count) is identical to the single-worker run.
    """
    t0 = time.perf_counter()
    rel = _Relation(ctx)
    if not any(rel.rows):
        raise NoCrossPair()
    seed = _seed_bound(rel)
    a0 = rel.extent(rel.all_g)
    b0 = rel.intent(a0)

    found: list[tuple[int, int]] = []
    visited = 1
    best = 0
    if a0 and b0:
        best = a0.bit_count() + b0.bit_count()
        found.append((a0, b0))

    if workers <= 1:
        parts = [_explore(rel, a0, b0, j, j + 1, seed) for j in range(rel.nf)]
    else:
        tasks = [(ctx, j, j + 1, seed) for j in range(rel.nf)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_explore_task, tasks))

    for part_best, part_found, part_visited in parts:
        visited += part_visited
        if part_best > best:
            best, found = part_best, list(part_found)
        elif part_best == best:
            found.extend(part_found)
    # A branch that never beat the seed leaves best at the seed with no pairs;
    # the seed is attained by some closed pair, so some branch recorded it.
    found = [(a, b) for a, b in found if a.bit_count() + b.bit_count() == best]
    return _finish(ctx, best, found, visited, t0)


def brute_force_m(ctx: CrossContext, cap: int = DEFAULT_ORACLE_CAP) -> ExtremalReport:
    """Exhaustive oracle: every non-empty A ⊆ F with B = dual(A).

    Independent of the closure machinery; walks subsets of F depth-first,
    carrying the surviving members of G as a plain list.
    """
    if len(ctx.f) > cap:
        raise CapExceeded(f"oracle cap: |F| = {len(ctx.f)} exceeds {cap}")
    t0 = time.perf_counter()
    f, t = ctx.f.members, ctx.t
    best = 0
    found: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    visited = 0

    def walk(i: int, chosen: list[int], survivors: list[int]) -> None:
        nonlocal best, found, visited
        if i == len(f):
            if chosen and survivors:
                visited += 1
                total = len(chosen) + len(survivors)
                if total > best:
                    best, found = total, [(tuple(chosen), tuple(survivors))]
                elif total == best:
                    found.append((tuple(chosen), tuple(survivors)))
            return
        if not survivors:
            return  # B is empty for every extension
        walk(i + 1, chosen, survivors)
        x = f[i]
        kept = [y for y in survivors if (x & y).bit_count() >= t]
        chosen.append(x)
        walk(i + 1, chosen, kept)
        chosen.pop()

    walk(0, [], list(ctx.g.members))
    if best == 0:
        raise NoCrossPair()
    n = ctx.f.n
    # The walk keeps both sides in canonical order, and each A is visited once.
    pairs = [CrossPair(SetFamily._trusted(n, a), SetFamily._trusted(n, b)) for a, b in found]
    pairs.sort(key=CrossPair.sort_key)
    ordered = tuple(pairs)
    stats = {"closed_pairs_visited": visited, "elapsed_ms": int((time.perf_counter() - t0) * 1000)}
    return ExtremalReport(ctx, best, ordered, stats=stats)


def closure(a: SetFamily, ctx: CrossContext) -> SetFamily:
    return dual(dual(a, ctx.g, ctx.t), ctx.f, ctx.t)


def star_pair(h_r: SetFamily, h_s: SetFamily, core: int, t: int) -> CrossPair:
    return CrossPair(star(h_r, core), meets_at_least(h_s, core, t))


def candidate_cores(h: HereditaryFamily, lo: int, hi: int) -> list[int]:
    out: list[int] = []
    for u in range(lo, hi + 1):
        out.extend(level(h, u))
    return out


def classify_maximizers(report: ExtremalReport, h: HereditaryFamily) -> ExtremalReport:
    """Tag each maximizer against the two structural patterns.

    StarPair(I): A = F(I), B = {B in G : |B ∩ I| >= t}.
    SwappedStarPair(I): r = s, |I| > t, A = {A in F : |A ∩ I| >= t}, B = G(I).
    The first witness in canonical order is recorded; ``attains_m`` re-checks
    that the star pair built from it has sum m.
    """
    ctx = report.context
    f, g, t = ctx.f, ctx.g, ctx.t
    cores = candidate_cores(h, t, ctx.r)
    tags = []
    for pair in report.maximizers:
        star_hit = swap_hit = None
        for core in cores:
            if star_hit is None and star(f, core) == pair.a and meets_at_least(g, core, t) == pair.b:
                star_hit = core
            if (
                swap_hit is None
                and ctx.r == ctx.s
                and core.bit_count() > t
                and meets_at_least(f, core, t) == pair.a
                and star(g, core) == pair.b
            ):
                swap_hit = core
            if star_hit is not None and swap_hit is not None:
                break
        if star_hit is not None:
            sp = star_pair(f, g, star_hit, t)
            tags.append(
                Classification("star", star_hit, sp.size() == report.m, also_swapped=swap_hit is not None)
            )
        elif swap_hit is not None:
            tags.append(Classification("swapped", swap_hit, pair.size() == report.m))
        else:
            tags.append(Classification("unstructured"))
    return replace(report, classifications=tuple(tags))


def best_star_pair(h: HereditaryFamily, ctx: CrossContext) -> tuple[int, Optional[int]]:
    """Largest star-pair sum over admissible cores I, with the first core reaching it."""
    best, arg = -1, None
    for core in candidate_cores(h, ctx.t, ctx.r):
        sp = star_pair(ctx.f, ctx.g, core, ctx.t)
        if sp.a and sp.b and sp.size() > best:
            best, arg = sp.size(), core
    return best, arg


@dataclass(frozen=True)
class StarPropertyResult:
    size: int
    witness: SetFamily
    is_star_attained: bool
    star_core: Optional[int] = None


def max_t_intersecting(f: SetFamily, t: int, cap: int = DEFAULT_CLIQUE_CAP) -> StarPropertyResult:
    """Largest t-intersecting subfamily via branch-and-bound max clique."""
    if len(f) > cap:
        raise CapExceeded(f"clique cap: |F| = {len(f)} exceeds {cap}")
    # A member smaller than t does not t-intersect itself.
    verts = [x for x in f if x.bit_count() >= t]
    k = len(verts)
    adj = [sum(1 << j for j, y in enumerate(verts) if j != i and (x & y).bit_count() >= t) for i, x in enumerate(verts)]
    best_clique = 0

    def expand(clique: int, cand: int) -> None:
        nonlocal best_clique
        if not cand:
            if clique.bit_count() > best_clique.bit_count():
                best_clique = clique
            return
        if clique.bit_count() + _greedy_colour_bound(cand, adj) <= best_clique.bit_count():
            return
        while cand:
            if clique.bit_count() + cand.bit_count() <= best_clique.bit_count():
                return
            low = cand & -cand
            v = low.bit_length() - 1
            expand(clique | low, cand & adj[v])
            cand ^= low

    expand(0, (1 << k) - 1)
    witness = SetFamily.of(f.n, (verts[i] for i in range(k) if best_clique >> i & 1))
    size = len(witness)
    core_hit = None
    cores = sorted({c for x in f for c in subsets_of_size(x, t)}, key=lambda m: (m.bit_count(), m))
    for core in cores:
        if len(star(f, core)) == size:
            core_hit = core
            break
    return StarPropertyResult(size, witness, core_hit is not None, core_hit)


def _greedy_colour_bound(cand: int, adj: list[int]) -> int:
    """Number of colour classes in a greedy colouring: bounds any clique in ``cand``."""
    colours = 0
    rest = cand
    while rest:
        colours += 1
        avail = rest
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            rest ^= low
            avail &= ~adj[v] & ~low
    return colours
