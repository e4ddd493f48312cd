"""Sources of hereditary families: power sets, independence complexes,
seeded random generation, and the JSON interchange format."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .family import (
    MAX_GROUND,
    FamilyError,
    HereditaryFamily,
    SetFamily,
    downward_closure,
    elements,
    family_to_json,
    full_mask,
    maximal_members,
    to_mask,
)

RETRY_BUDGET = 1000


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        for i, j in self.edges:
            if not 1 <= i < j <= self.n:
                raise FamilyError(f"bad edge ({i}, {j}) for {self.n} vertices")

    @classmethod
    def from_pairs(cls, n: int, pairs) -> Graph:
        edges = set()
        for i, j in pairs:
            if i == j:
                raise FamilyError(f"self-loop at {i}")
            edges.add((min(i, j), max(i, j)))
        return cls(n, frozenset(edges))

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls.from_pairs(n, [(i, i + 1) for i in range(1, n)])

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls.from_pairs(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])

    def neighbours(self) -> list[int]:
        """Neighbourhood bitmask per 0-based vertex."""
        nb = [0] * self.n
        for i, j in self.edges:
            nb[i - 1] |= 1 << (j - 1)
            nb[j - 1] |= 1 << (i - 1)
        return nb


@dataclass(frozen=True)
class RandomSpec:
    n: int
    base_count: int
    min_base: int
    max_base: int
    mu_floor: int
    seed: int

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_GROUND:
            raise FamilyError(f"ground size {self.n} out of range")
        if self.base_count < 1:
            raise FamilyError("base_count must be positive")
        if not 0 <= self.min_base <= self.max_base <= self.n:
            raise FamilyError("need 0 <= min_base <= max_base <= n")
        if self.mu_floor > self.min_base:
            raise FamilyError("mu_floor may not exceed min_base")


def power_set(n: int) -> HereditaryFamily:
    if n > MAX_GROUND:
        raise FamilyError(f"ground size {n} exceeds capacity {MAX_GROUND}")
    return HereditaryFamily(n, SetFamily(n, (full_mask(n),)))


def maximal_independent_sets(g: Graph) -> list[int]:
    """Include/exclude branching on the lowest undecided vertex.

    A vertex may only be excluded if something can still dominate it, which
    keeps every leaf maximal. Fine up to roughly 30 vertices.
    """
    nb = g.neighbours()
    out: list[int] = []

    def branch(v: int, chosen: int, excluded: int, allowed: int) -> None:
        # allowed: undecided vertices with no neighbour in chosen
        if v == g.n:
            if all(nb[u] & chosen for u in _positions(excluded)):
                out.append(chosen)
            return
        bit = 1 << v
        if not allowed & bit:
            branch(v + 1, chosen, excluded, allowed)
            return
        branch(v + 1, chosen | bit, excluded, allowed & ~nb[v] & ~bit)
        # Excluding v needs a future neighbour able to block it.
        rest = allowed & ~bit & ~((bit << 1) - 1)
        if nb[v] & chosen or nb[v] & rest:
            branch(v + 1, chosen, excluded | bit, allowed & ~bit)

    branch(0, 0, 0, full_mask(g.n))
    return out


def _positions(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def independence_complex(g: Graph) -> HereditaryFamily:
    return HereditaryFamily(g.n, SetFamily.of(g.n, maximal_independent_sets(g)))


def random_hereditary(spec: RandomSpec) -> HereditaryFamily:
    """Draw ``base_count`` sets with uniform sizes, reduce to an antichain,
    redraw until mu >= mu_floor. Pure function of ``spec``."""
    rng = random.Random(spec.seed)
    ground = list(range(spec.n))
    for attempt in range(RETRY_BUDGET):
        drawn = []
        for _ in range(spec.base_count):
            k = rng.randint(spec.min_base, spec.max_base)
            drawn.append(sum(1 << e for e in rng.sample(ground, k)))
        h = downward_closure(drawn, n=spec.n)
        if h.mu >= spec.mu_floor:
            return HereditaryFamily(h.n, h.bases, info={"seed": spec.seed, "attempts": attempt + 1})
    raise FamilyError("generation budget exhausted")


def serialize_family(h: HereditaryFamily) -> str:
    return json.dumps(family_to_json(h), sort_keys=True)


def _parse_sets(raw, n: int, what: str) -> list[int]:
    if not isinstance(raw, list):
        raise FamilyError(f"'{what}' must be a list of lists")
    masks = []
    for s in raw:
        if not isinstance(s, list) or not all(isinstance(e, int) for e in s):
            raise FamilyError(f"each entry of '{what}' must be a list of integers")
        for e in s:
            if not 1 <= e <= n:
                raise FamilyError(f"element {e} outside [1, {n}]")
        masks.append(to_mask(s))
    return masks


def _load(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FamilyError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("n"), int):
        raise FamilyError("expected an object with integer 'n'")
    if not 0 <= doc["n"] <= MAX_GROUND:
        raise FamilyError(f"ground size {doc['n']} out of range")
    return doc


def parse_family(text: str) -> HereditaryFamily:
    """Parse {"n", "bases"}. Non-antichain input is reduced and flagged in ``info``."""
    doc = _load(text)
    n = doc["n"]
    if "bases" not in doc:
        raise FamilyError("missing 'bases'")
    masks = _parse_sets(doc["bases"], n, "bases")
    if not masks:
        raise FamilyError("no generators")
    reduced = maximal_members(masks)
    info = {}
    if len(reduced) != len(set(masks)) or len(set(masks)) != len(masks):
        info["warning"] = "input bases were not an antichain; reduced to maximal sets"
    if "seed" in doc:
        info["seed"] = doc["seed"]
    return HereditaryFamily(n, SetFamily.of(n, reduced), info=info)


def parse_setfamily(text: str) -> SetFamily:
    doc = _load(text)
    if "members" not in doc:
        raise FamilyError("missing 'members'")
    return SetFamily.of(doc["n"], _parse_sets(doc["members"], doc["n"], "members"))


def serialize_setfamily(f: SetFamily) -> str:
    return json.dumps({"n": f.n, "members": f.to_lists()}, sort_keys=True)


def parse_graph(text: str) -> Graph:
    doc = _load(text)
    edges = doc.get("edges", [])
    if not isinstance(edges, list) or not all(isinstance(e, list) and len(e) == 2 for e in edges):
        raise FamilyError("'edges' must be a list of pairs")
    return Graph.from_pairs(doc["n"], [tuple(e) for e in edges])


def describe(h: HereditaryFamily) -> str:
    bs = ", ".join("{" + ",".join(map(str, elements(b))) + "}" for b in h.bases)
    return f"H on [{h.n}] with bases {bs}; mu={h.mu}"
