#!/usr/bin/env python3
"""Run the seeded lemma fuzz campaign and summarise it per checker.

Failures are printed with their sub-seed; rerunning the generator with that
sub-seed rebuilds the exact instance.
"""
import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from crossfam.lemmas import CHECKERS, fuzz


@dataclass
class CampaignConfig:
    count: int = 1000
    seed: int = 0
    lemmas: list = field(default_factory=lambda: list(CHECKERS))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--lemma", action="append", choices=CHECKERS, help="repeatable; default is every checker")
    args = ap.parse_args()
    cfg = CampaignConfig(args.count, args.seed, args.lemma or list(CHECKERS))

    any_failed = False
    for name in cfg.lemmas:
        start = time.perf_counter()
        summary = fuzz(name, cfg.count, cfg.seed)
        any_failed |= not summary.ok
        print(f"{name:<24} instances={summary.instances:<6} equalities={summary.equalities:<5} "
              f"rejects={summary.hypothesis_rejects:<5} failures={len(summary.failures)} "
              f"({time.perf_counter() - start:.1f}s)")
        for failure in summary.failures:
            print(json.dumps(failure, sort_keys=True), file=sys.stderr)
    return 3 if any_failed else 0


if __name__ == "__main__":
    sys.exit(main())
