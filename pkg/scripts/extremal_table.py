#!/usr/bin/env python3
"""Tabulate m(C([n],r), C([n],s), t) next to the best star-pair sum.

Example:
    python scripts/extremal_table.py --n 4 8 --r 2 --s 2 --t 1 --oracle
"""
import argparse
import json
import time
from dataclasses import asdict, dataclass

from crossfam import CrossContext, brute_force_m, power_set, solve_m
from crossfam.solver import DEFAULT_ORACLE_CAP, best_star_pair


@dataclass
class TableConfig:
    n_lo: int = 4
    n_hi: int = 8
    r: int = 2
    s: int = 2
    t: int = 1
    oracle: bool = False
    workers: int = 1


def run(cfg: TableConfig) -> list[dict]:
    rows = []
    for n in range(cfg.n_lo, cfg.n_hi + 1):
        h = power_set(n)
        ctx = CrossContext.from_levels(h, cfg.r, cfg.s, cfg.t)
        start = time.perf_counter()
        rep = solve_m(ctx, workers=cfg.workers)
        row = {
            "n": n,
            "m": rep.m,
            "maximizers": len(rep.maximizers),
            "star_best": best_star_pair(h, ctx)[0],
            "closed_pairs_visited": rep.stats.get("closed_pairs_visited"),
            "seconds": round(time.perf_counter() - start, 3),
        }
        if cfg.oracle and max(len(ctx.f), len(ctx.g)) <= DEFAULT_ORACLE_CAP:
            row["oracle_m"] = brute_force_m(ctx).m
        rows.append(row)
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", nargs=2, type=int, default=[4, 8], metavar=("LO", "HI"))
    ap.add_argument("--r", type=int, default=2)
    ap.add_argument("--s", type=int, default=2)
    ap.add_argument("--t", type=int, default=1)
    ap.add_argument("--oracle", action="store_true")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--json", action="store_true", help="emit JSON instead of a text table")
    args = ap.parse_args()
    cfg = TableConfig(args.n[0], args.n[1], args.r, args.s, args.t, args.oracle, args.workers)
    rows = run(cfg)
    if args.json:
        print(json.dumps({"config": asdict(cfg), "rows": rows}, indent=2))
        return
    print(f"r={cfg.r} s={cfg.s} t={cfg.t}")
    print(f"{'n':>3} {'m':>6} {'star':>6} {'#max':>8} {'oracle':>7} {'sec':>8}")
    for row in rows:
        print(f"{row['n']:>3} {row['m']:>6} {row['star_best']:>6} {row['maximizers']:>8} "
              f"{row.get('oracle_m', '-'):>7} {row['seconds']:>8}")


if __name__ == "__main__":
    main()
