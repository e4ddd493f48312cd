"""Bitset kernel for set families over a ground set [n].

Sets are plain ``int`` bitmasks internally: element ``i`` (1-based label)
lives at bit ``i - 1``. :class:`GroundedSet` wraps a mask together with its
ground size for API boundaries; everything hot works on raw ints.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence, Union

MAX_GROUND = 64


class FamilyError(ValueError):
    """Invalid family, set, or parameter."""


class HypothesisNotMet(ValueError):
    """The instance lies outside the domain of the statement being checked."""


def popcount(mask: int) -> int:
    return mask.bit_count()


def canonical_key(mask: int) -> tuple[int, int]:
    """Order by cardinality, then numeric value of the bits."""
    return (mask.bit_count(), mask)


def to_mask(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        if e < 1:
            raise FamilyError(f"element labels are 1-based, got {e}")
        mask |= 1 << (e - 1)
    return mask


def elements(mask: int) -> list[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def bit_positions(mask: int) -> list[int]:
    """0-based positions of the set bits, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


_BYTE_POSITIONS = [tuple(p for p in range(8) if b >> p & 1) for b in range(256)]


def index_positions(mask: int) -> list[int]:
    """0-based set-bit positions of an arbitrarily wide mask, ascending."""
    out: list[int] = []
    base = 0
    while mask:
        byte = mask & 0xFF
        if byte:
            out.extend(base + p for p in _BYTE_POSITIONS[byte])
        mask >>= 8
        base += 8
    return out


def subsets_of_size(mask: int, k: int) -> Iterator[int]:
    """All k-element subsets of ``mask``."""
    if k < 0 or k > mask.bit_count():
        return
    bits = [1 << p for p in bit_positions(mask)]
    for combo in itertools.combinations(bits, k):
        yield sum(combo)


def all_subsets(mask: int) -> Iterator[int]:
    """Every subset of ``mask`` (standard submask walk)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def full_mask(n: int) -> int:
    return (1 << n) - 1


def _check_ground(n: int) -> None:
    if not isinstance(n, int) or n < 0:
        raise FamilyError(f"ground size must be a non-negative integer, got {n!r}")
    if n > MAX_GROUND:
        raise FamilyError(f"ground size {n} exceeds capacity {MAX_GROUND}")


@dataclass(frozen=True)
class GroundedSet:
    """A subset of [n] held as a bitmask."""

    bits: int
    n: int

    def __post_init__(self) -> None:
        _check_ground(self.n)
        if self.bits < 0 or self.bits >> self.n:
            raise FamilyError(f"bits {self.bits:#x} fall outside ground set [{self.n}]")

    @classmethod
    def from_elements(cls, n: int, elems: Iterable[int]) -> GroundedSet:
        return cls(to_mask(elems), n)

    @property
    def elements(self) -> list[int]:
        return elements(self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()


SetLike = Union[int, GroundedSet]


def _bits(x: SetLike) -> int:
    return x.bits if isinstance(x, GroundedSet) else x


@dataclass(frozen=True)
class SetFamily:
    """Duplicate-free family of subsets of [n], stored in canonical order."""

    n: int
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_ground(self.n)
        ground = full_mask(self.n)
        prev = None
        for m in self.members:
            if m < 0 or m & ~ground:
                raise FamilyError(f"member {elements(m)} falls outside [{self.n}]")
            key = canonical_key(m)
            if prev is not None and key <= prev:
                raise FamilyError("members must be strictly increasing in canonical order")
            prev = key

    @classmethod
    def of(cls, n: int, sets: Iterable[SetLike]) -> SetFamily:
        """Build from arbitrary masks: deduplicates and sorts."""
        return cls(n, tuple(sorted({_bits(s) for s in sets}, key=canonical_key)))

    @classmethod
    def from_lists(cls, n: int, sets: Iterable[Iterable[int]]) -> SetFamily:
        return cls.of(n, (to_mask(s) for s in sets))

    @classmethod
    def empty(cls, n: int) -> SetFamily:
        return cls(n, ())

    @classmethod
    def _trusted(cls, n: int, members: tuple[int, ...]) -> SetFamily:
        # Caller guarantees canonical order; skips validation on hot paths.
        obj = object.__new__(cls)
        obj.__dict__.update(n=n, members=members)
        return obj

    @cached_property
    def _lookup(self) -> frozenset[int]:
        return frozenset(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, mask: object) -> bool:
        if isinstance(mask, GroundedSet):
            mask = mask.bits
        return mask in self._lookup

    def __bool__(self) -> bool:
        return bool(self.members)

    def to_lists(self) -> list[list[int]]:
        return [elements(m) for m in self.members]

    def is_subfamily_of(self, other: SetFamily) -> bool:
        return self._lookup <= other._lookup

    def sizes(self) -> set[int]:
        return {m.bit_count() for m in self.members}

    def filter(self, keep) -> SetFamily:
        # A filtered canonical sequence stays canonical.
        return SetFamily._trusted(self.n, tuple(m for m in self.members if keep(m)))

    @cached_property
    def _byte_table(self) -> list[list[tuple[int, ...]]]:
        # _byte_table[k][b]: members selected by byte value b at index offset 8k
        table = []
        for k in range(0, len(self.members), 8):
            chunk = self.members[k : k + 8]
            table.append([tuple(chunk[p] for p in pos if p < len(chunk)) for pos in _BYTE_POSITIONS])
        return table

    def pick(self, index_mask: int) -> SetFamily:
        """Subfamily of the members whose indices are set in ``index_mask``."""
        table = self._byte_table
        out: tuple[int, ...] = ()
        k = 0
        while index_mask:
            byte = index_mask & 0xFF
            if byte:
                out += table[k][byte]
            index_mask >>= 8
            k += 1
        return SetFamily._trusted(self.n, out)


def maximal_members(masks: Iterable[int]) -> list[int]:
    """Members not properly contained in another member (canonical order)."""
    ordered = sorted(set(masks), key=canonical_key, reverse=True)
    kept: list[int] = []
    for m in ordered:
        if not any(m & k == m for k in kept):
            kept.append(m)
    kept.sort(key=canonical_key)
    return kept


def family_mu(family: SetFamily | Iterable[int]) -> int:
    """Size of a smallest maximal member; defined for any non-empty family."""
    masks = list(family)
    if not masks:
        raise FamilyError("mu is undefined for the empty family")
    return min(m.bit_count() for m in maximal_members(masks))


@dataclass(frozen=True)
class HereditaryFamily:
    """A downset of 2^[n], stored by its bases (maximal members).

    ``info`` carries provenance such as a generator seed or a parse warning;
    it is excluded from equality.
    """

    n: int
    bases: SetFamily
    info: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        _check_ground(self.n)
        if self.bases.n != self.n:
            raise FamilyError("bases live on a different ground set")
        if not self.bases:
            raise FamilyError("a hereditary family needs at least one base ({} for the trivial one)")
        if len(maximal_members(self.bases)) != len(self.bases):
            raise FamilyError("bases must form an antichain")

    def __contains__(self, s: object) -> bool:
        if isinstance(s, GroundedSet):
            s = s.bits
        return any(s & b == s for b in self.bases)

    @cached_property
    def mu(self) -> int:
        return min(b.bit_count() for b in self.bases)

    def level(self, r: int) -> SetFamily:
        return level(self, r)

    def members(self) -> SetFamily:
        """Explicit member list; exponential in base size, desk scale only."""
        seen: set[int] = set()
        for b in self.bases:
            seen.update(all_subsets(b))
        return SetFamily.of(self.n, seen)


def downward_closure(generators: SetFamily | Sequence[int], n: int | None = None) -> HereditaryFamily:
    """Hereditary family generated by ``generators``; bases are their maximal members."""
    if isinstance(generators, SetFamily):
        n = generators.n
        masks = list(generators)
    else:
        masks = list(generators)
        if n is None:
            raise FamilyError("ground size required for raw generator masks")
    if not masks:
        raise FamilyError("no generators")
    return HereditaryFamily(n, SetFamily.of(n, maximal_members(masks)))


def is_hereditary(family: SetFamily) -> bool:
    for m in family:
        rest = m
        while rest:
            low = rest & -rest
            if (m ^ low) not in family:
                return False
            rest ^= low
    return True


def bases(h: HereditaryFamily) -> SetFamily:
    return h.bases


def mu(h: HereditaryFamily) -> int:
    return h.mu


def level(h: HereditaryFamily, r: int) -> SetFamily:
    if r < 0:
        raise FamilyError("level index must be non-negative")
    seen: set[int] = set()
    for b in h.bases:
        if b.bit_count() >= r:
            seen.update(subsets_of_size(b, r))
    return SetFamily.of(h.n, seen)


def star(family: SetFamily, core: SetLike) -> SetFamily:
    core = _bits(core)
    return family.filter(lambda a: a & core == core)


def meets_at_least(family: SetFamily, core: SetLike, t: int) -> SetFamily:
    if t < 0:
        raise FamilyError("t must be non-negative")
    core = _bits(core)
    return family.filter(lambda b: (b & core).bit_count() >= t)


def link(family: SetFamily, x: SetLike) -> SetFamily:
    x = _bits(x)
    return SetFamily.of(family.n, (a & ~x for a in family if a & x == x))


@dataclass(frozen=True)
class Trace:
    """The family {G \\ X : G in H, G ∩ Y = X} and its mu."""

    family: SetFamily
    mu: int


def restricted_trace(h: HereditaryFamily, x: SetLike, y: SetLike) -> Trace | None:
    """Materialize the restricted trace; ``None`` when no member meets Y exactly in X."""
    x, y = _bits(x), _bits(y)
    if x & y != x:
        raise FamilyError("X not contained in Y")
    picked = [g & ~x for g in h.members() if g & y == x]
    if not picked:
        return None
    fam = SetFamily.of(h.n, picked)
    return Trace(fam, family_mu(fam))


@dataclass(frozen=True)
class Threshold:
    r: int
    s: int
    t: int
    value: int


def c_threshold(r: int, s: int, t: int) -> Threshold:
    """The mu threshold r + (s-t) * max(2*C(s,t), 2^r*(r-t)*C(r,t) + 1)."""
    if not 1 <= t <= r <= s:
        raise FamilyError(f"need 1 <= t <= r <= s, got r={r}, s={s}, t={t}")
    value = r + (s - t) * max(2 * math.comb(s, t), 2**r * (r - t) * math.comb(r, t) + 1)
    return Threshold(r, s, t, value)


def family_to_json(h: HereditaryFamily) -> dict:
    return {"n": h.n, "bases": h.bases.to_lists()}


def setfamily_to_json(f: SetFamily) -> dict:
    return {"n": f.n, "members": f.to_lists()}
