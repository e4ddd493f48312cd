"""Exact computation on cross-t-intersecting subfamilies of hereditary families."""

from .constructors import (
    Graph,
    RandomSpec,
    independence_complex,
    parse_family,
    power_set,
    random_hereditary,
    serialize_family,
)
from .family import (
    FamilyError,
    GroundedSet,
    HereditaryFamily,
    HypothesisNotMet,
    SetFamily,
    bases,
    c_threshold,
    downward_closure,
    is_hereditary,
    level,
    link,
    meets_at_least,
    mu,
    restricted_trace,
    star,
)
from .solver import (
    CrossContext,
    NoCrossPair,
    brute_force_m,
    classify_maximizers,
    closure,
    dual,
    max_t_intersecting,
    solve_m,
)

__version__ = "0.1.0"
