import itertools

from hypothesis import strategies as st

from crossfam.family import HereditaryFamily, SetFamily, downward_closure, to_mask


def S(*elems):
    return to_mask(elems)


def fam(n, *sets):
    return SetFamily.of(n, [to_mask(s) for s in sets])


def explicit_members(h: HereditaryFamily) -> list[int]:
    """Scan all of 2^[n] and keep what the base test admits (independent of level())."""
    return [m for m in range(1 << h.n) if any(m | b == b for b in h.bases)]


def explicit_level(h: HereditaryFamily, r: int) -> set[int]:
    return {m for m in explicit_members(h) if bin(m).count("1") == r}


def brute_cross_m(f, g, t):
    """All subsets A of F, all subsets B of G: the definition, nothing else."""
    f, g = list(f), list(g)
    best, winners = 0, set()
    for ka in range(1, len(f) + 1):
        for a in itertools.combinations(f, ka):
            for kb in range(1, len(g) + 1):
                for b in itertools.combinations(g, kb):
                    if all(bin(x & y).count("1") >= t for x in a for y in b):
                        total = ka + kb
                        if total > best:
                            best, winners = total, {(a, b)}
                        elif total == best:
                            winners.add((a, b))
    return best, winners


@st.composite
def hereditary_families(draw, max_n=7, min_n=1, max_bases=4):
    n = draw(st.integers(min_n, max_n))
    gens = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=1, max_size=max_bases))
    return downward_closure(gens, n=n)


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance verdict lines after the run."""
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
