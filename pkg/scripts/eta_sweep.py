#!/usr/bin/env python3
"""Sweep mu floors and look for hereditary families where no star pair is optimal.

For each floor the script samples (or enumerates) families on [n] whose bases
all have at least that size and reports how many fail the star-pair property.
The smallest floor from which no failure is seen is an empirical upper
estimate for eta(r, s, t) on this ground set; compare it with r + s - t + 1.
"""
import argparse
import json
from dataclasses import asdict, dataclass

from crossfam.lemmas import SearchSpec, probe_eta


@dataclass
class SweepConfig:
    r: int = 1
    s: int = 2
    t: int = 1
    n: int = 6
    mode: str = "random"
    count: int = 300
    seed: int = 0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    for name, default in asdict(SweepConfig()).items():
        ap.add_argument(f"--{name}", type=type(default), default=default)
    cfg = SweepConfig(**vars(ap.parse_args()))

    spec = SearchSpec(cfg.n, cfg.mode, cfg.count, cfg.seed)
    lowest_clean = None
    # one floor below the conjectured value, where the property is expected to break
    for floor in range(cfg.n, max(cfg.s, cfg.r + cfg.s - cfg.t) - 1, -1):
        report = probe_eta(cfg.r, cfg.s, cfg.t, spec, mu_floor=floor)
        bad = len(report.counterexamples)
        print(f"mu >= {floor}: population={report.population} counterexamples={bad}")
        if bad:
            print("  first:", json.dumps(report.counterexamples[0], sort_keys=True))
            break
        lowest_clean = floor
    conjectured = cfg.r + cfg.s - cfg.t + 1
    print(f"lowest floor without counterexamples: {lowest_clean} (conjectured eta = {conjectured})")


if __name__ == "__main__":
    main()
