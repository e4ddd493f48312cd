"""Command-line entry point.

Exit codes: 0 success, 1 no cross-t-intersecting pair, 2 invalid input,
3 a checker returned holds=false on a valid instance (always a bug).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from . import __version__
from .constructors import (
    RandomSpec,
    independence_complex,
    parse_family,
    parse_graph,
    parse_setfamily,
    power_set,
    random_hereditary,
)
from .family import FamilyError, HypothesisNotMet, SetFamily, family_to_json, level, to_mask
from .lemmas import (
    CHECKERS,
    SearchSpec,
    check_calc,
    check_fiber_count,
    check_mu_link,
    check_mu_trace,
    check_sperner,
    check_sum_bound,
    check_transversal_chain,
    check_transversal_cover,
    check_transversal_partition,
    check_transversal_star_bound,
    fuzz,
    probe_eta,
    probe_sum_conjecture,
)
from .solver import (
    DEFAULT_CLIQUE_CAP,
    DEFAULT_ORACLE_CAP,
    CapExceeded,
    CrossContext,
    NoCrossPair,
    brute_force_m,
    classify_maximizers,
    max_t_intersecting,
    solve_m,
)

EXIT_OK, EXIT_NO_PAIR, EXIT_INVALID, EXIT_LEMMA_FAILED = 0, 1, 2, 3
COMMANDS = ("gen", "solve", "classify", "check", "probe-eta", "star-property")


class InvalidInput(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    out: Optional[str] = None
    r: Optional[int] = None
    s: Optional[int] = None
    t: Optional[int] = None
    seed: Optional[int] = None
    oracle_cap: int = DEFAULT_ORACLE_CAP
    clique_cap: int = DEFAULT_CLIQUE_CAP
    workers: int = 1
    format: str = "json"
    options: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise InvalidInput(f"unknown command {self.command!r}")
        if min(self.oracle_cap, self.clique_cap, self.workers) < 1:
            raise InvalidInput("caps and worker count must be positive")
        if self.command in ("solve", "classify", "probe-eta"):
            if None in (self.r, self.s, self.t):
                raise InvalidInput("--r, --s and --t are required")
            if not 1 <= self.t <= self.r <= self.s:
                raise InvalidInput("need 1 <= t <= r <= s")


def _parse_set(text: Optional[str]) -> Optional[int]:
    if text is None:
        return None
    text = text.strip().strip("{}")
    if not text:
        return 0
    try:
        return to_mask(int(x) for x in text.split(","))
    except ValueError as exc:
        raise InvalidInput(f"bad set literal {text!r}: {exc}") from exc


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc


def _sha(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _header(cfg: RunConfig) -> dict:
    return {
        "tool": "crossfam",
        "version": __version__,
        "config": {k: v for k, v in asdict(cfg).items() if k != "out"},
        "inputs": {k: _sha(v) for k, v in sorted(cfg.inputs.items())},
    }


def _emit(cfg: RunConfig, doc: dict, text: Optional[str] = None) -> None:
    body = text if cfg.format == "text" and text is not None else json.dumps(doc, indent=2, sort_keys=True)
    if cfg.out:
        Path(cfg.out).write_text(body + "\n")
    else:
        sys.stdout.write(body + "\n")


def _family(cfg: RunConfig):
    if "family" not in cfg.inputs:
        raise InvalidInput("--family is required")
    return parse_family(_read(cfg.inputs["family"]))


def _setfamily(cfg: RunConfig, key: str) -> SetFamily:
    if key not in cfg.inputs:
        raise InvalidInput(f"--{key.replace('_', '-')} is required")
    return parse_setfamily(_read(cfg.inputs[key]))


def _cmd_gen(cfg: RunConfig) -> int:
    o = cfg.options
    if o.get("power_set") is not None:
        h = power_set(o["power_set"])
    elif "graph" in cfg.inputs:
        h = independence_complex(parse_graph(_read(cfg.inputs["graph"])))
    elif o.get("random") or "config" in cfg.inputs:
        params = {"n": o.get("n"), "base_count": o.get("base_count"), "min_base": o.get("min_base"),
                  "max_base": o.get("max_base"), "mu_floor": o.get("mu_floor"), "seed": cfg.seed}
        if "config" in cfg.inputs:
            try:
                loaded = json.loads(_read(cfg.inputs["config"]))
            except json.JSONDecodeError as exc:
                raise InvalidInput(f"malformed config: {exc}") from exc
            params.update({k: v for k, v in loaded.items() if k in params})
        if params["seed"] is None:
            params["seed"] = 0
        if params["mu_floor"] is None:
            params["mu_floor"] = 0
        missing = [k for k, v in params.items() if v is None]
        if missing:
            raise InvalidInput(f"random generation needs {', '.join(missing)}")
        h = random_hereditary(RandomSpec(**params))
    else:
        raise InvalidInput("choose one of --power-set, --graph, --random, --config")
    doc = family_to_json(h)
    if "seed" in h.info:
        doc["seed"] = h.info["seed"]
    _emit(cfg, doc, text=f"n={h.n} mu={h.mu} bases={doc['bases']}")
    return EXIT_OK


def _solve_report(cfg: RunConfig, classify: bool) -> int:
    h = _family(cfg)
    ctx = CrossContext.from_levels(h, cfg.r, cfg.s, cfg.t)
    if cfg.options.get("oracle"):
        report = brute_force_m(ctx, cap=cfg.oracle_cap)
    else:
        report = solve_m(ctx, workers=cfg.workers)
    if classify:
        report = classify_maximizers(report, h)
    doc = _header(cfg)
    doc.update(report.to_json(timing=cfg.options.get("timing", False)))
    lines = [f"m = {report.m}  ({len(report.maximizers)} maximizers)"]
    for i, p in enumerate(report.maximizers):
        tag = report.classifications[i].kind if report.classifications else "-"
        lines.append(f"  |A|={len(p.a)} |B|={len(p.b)} {tag}")
    _emit(cfg, doc, text="\n".join(lines))
    return EXIT_OK


def _single_check(cfg: RunConfig):
    o = cfg.options
    name = o.get("lemma")
    sets = {k: _parse_set(o.get(k)) for k in ("X", "Y", "T", "U", "I")}

    def need(*keys):
        for k in keys:
            if (sets.get(k) if k in sets else getattr(cfg, k)) is None:
                raise InvalidInput(f"--{k} is required for lemma {name}")

    if name == "sperner":
        need("r", "s")
        return check_sperner(_family(cfg), cfg.r, cfg.s)
    if name == "mu_trace":
        need("X", "Y")
        return check_mu_trace(_family(cfg), sets["X"], sets["Y"])
    if name == "mu_link":
        need("X")
        return check_mu_link(_setfamily(cfg, "a_family"), sets["X"])
    if name == "fiber_count":
        need("r", "s", "T", "U")
        return check_fiber_count(_family(cfg), cfg.r, cfg.s, cfg.t or 0, sets["T"], sets["U"])
    if name == "transversal_cover":
        need("X", "t")
        return check_transversal_cover(_setfamily(cfg, "a_family"), sets["X"], cfg.t)
    if name == "transversal_partition":
        need("X", "T", "t")
        return check_transversal_partition(_setfamily(cfg, "a_family"), sets["X"], sets["T"], cfg.t)
    if name == "transversal_chain":
        need("r", "s", "t")
        return check_transversal_chain(_setfamily(cfg, "a_family"), _setfamily(cfg, "b_family"), cfg.r, cfg.s, cfg.t)
    if name == "transversal_star_bound":
        need("r", "s", "t")
        return check_transversal_star_bound(
            _family(cfg), _setfamily(cfg, "a_family"), _setfamily(cfg, "b_family"), cfg.r, cfg.s, cfg.t
        )
    if name == "calc":
        need("r", "s", "t")
        if o.get("n") is None:
            raise InvalidInput("--n is required for lemma calc")
        return check_calc(cfg.r, cfg.s, cfg.t, o["n"])
    if name == "sum_bound":
        need("r", "s", "t", "I")
        return check_sum_bound(_family(cfg), cfg.r, cfg.s, cfg.t, sets["I"])
    if name == "sum_conjecture":
        need("r", "s", "t")
        return probe_sum_conjecture(_family(cfg), cfg.r, cfg.s, cfg.t)
    raise InvalidInput(f"unknown lemma {name!r}")


def _cmd_check(cfg: RunConfig) -> int:
    o = cfg.options
    if o.get("fuzz"):
        names = CHECKERS if o.get("lemma") in (None, "all") else (o["lemma"],)
        for name in names:
            if name not in CHECKERS:
                raise InvalidInput(f"no fuzz generator for lemma {name!r}")
        seed = cfg.seed if cfg.seed is not None else 0
        lines: list[str] = [json.dumps(_header(cfg), sort_keys=True)]
        failed = False

        def keep(name):
            def on_result(sub_seed, res):
                lines.append(json.dumps({"lemma": name, "sub_seed": sub_seed, "result": res.to_json()}, sort_keys=True))
            return on_result

        for name in names:
            summary = fuzz(name, o["fuzz"], seed, on_result=keep(name) if o.get("verbose") else None)
            failed |= not summary.ok
            lines.append(json.dumps({"summary": {"lemma": name, "seed": seed, "instances": summary.instances,
                                                 "equalities": summary.equalities,
                                                 "hypothesis_rejects": summary.hypothesis_rejects,
                                                 "failures": summary.failures}}, sort_keys=True))
        body = "\n".join(lines) + "\n"
        if cfg.out:
            Path(cfg.out).write_text(body)
        else:
            sys.stdout.write(body)
        return EXIT_LEMMA_FAILED if failed else EXIT_OK

    result = _single_check(cfg)
    doc = _header(cfg)
    doc["result"] = result.to_json()
    verdict = "holds" if result.holds else "FAILS"
    _emit(cfg, doc, text=f"{result.lemma_id}: {verdict}  lhs={result.lhs} rhs={result.rhs} equality={result.equality}")
    if not result.holds and result.asserted:
        return EXIT_LEMMA_FAILED
    return EXIT_OK


def _cmd_probe(cfg: RunConfig) -> int:
    o = cfg.options
    if o.get("n") is None:
        raise InvalidInput("--n is required")
    spec = SearchSpec(o["n"], o.get("mode") or "random", o.get("count") or 200,
                      cfg.seed if cfg.seed is not None else 0, o.get("max_families"))
    try:
        report = probe_eta(cfg.r, cfg.s, cfg.t, spec, mu_floor=o.get("mu_floor"))
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc
    doc = _header(cfg)
    doc["probe"] = report.to_json()
    _emit(cfg, doc, text=f"population={report.population} counterexamples={len(report.counterexamples)}")
    return EXIT_OK


def _cmd_star(cfg: RunConfig) -> int:
    if cfg.t is None:
        raise InvalidInput("--t is required")
    if "a_family" in cfg.inputs:
        fam = _setfamily(cfg, "a_family")
    else:
        if cfg.r is None:
            raise InvalidInput("--r is required with --family")
        fam = level(_family(cfg), cfg.r)
    res = max_t_intersecting(fam, cfg.t, cap=cfg.clique_cap)
    doc = _header(cfg)
    doc["result"] = {
        "size": res.size,
        "witness": res.witness.to_lists(),
        "is_star_attained": res.is_star_attained,
        "star_core": None if res.star_core is None else SetFamily(fam.n, (res.star_core,)).to_lists()[0],
    }
    _emit(cfg, doc, text=f"largest t-intersecting size {res.size}; star attained: {res.is_star_attained}")
    return EXIT_OK


def run(cfg: RunConfig) -> int:
    """Dispatch one command; errors become JSON on stderr plus an exit code."""
    try:
        cfg.validate()
        handler = {
            "gen": _cmd_gen,
            "solve": lambda c: _solve_report(c, classify=False),
            "classify": lambda c: _solve_report(c, classify=True),
            "check": _cmd_check,
            "probe-eta": _cmd_probe,
            "star-property": _cmd_star,
        }[cfg.command]
        return handler(cfg)
    except NoCrossPair as exc:
        _error("no_cross_pair", str(exc))
        return EXIT_NO_PAIR
    except HypothesisNotMet as exc:
        _error("hypothesis_not_met", str(exc))
        return EXIT_INVALID
    except (InvalidInput, FamilyError, CapExceeded) as exc:
        _error("invalid_input", str(exc))
        return EXIT_INVALID


def _error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    return int(raw) if raw else default


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crossfam", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--r", type=int)
    common.add_argument("--s", type=int)
    common.add_argument("--t", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--family", help="hereditary family JSON {n, bases}")
    common.add_argument("--oracle-cap", type=int, default=_env_int("CROSSFAM_ORACLE_CAP", DEFAULT_ORACLE_CAP))
    common.add_argument("--clique-cap", type=int, default=_env_int("CROSSFAM_CLIQUE_CAP", DEFAULT_CLIQUE_CAP))
    common.add_argument("--workers", type=int, default=_env_int("CROSSFAM_WORKERS", 1))
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="write a hereditary family")
    g.add_argument("--power-set", type=int)
    g.add_argument("--graph", help="graph JSON {n, edges}; emits its independence complex")
    g.add_argument("--random", action="store_true")
    g.add_argument("--config", help="JSON with RandomSpec fields")
    g.add_argument("--n", type=int)
    g.add_argument("--base-count", type=int)
    g.add_argument("--min-base", type=int)
    g.add_argument("--max-base", type=int)
    g.add_argument("--mu-floor", type=int)

    for name in ("solve", "classify"):
        p = sub.add_parser(name, parents=[common], help=f"{name} m(H^(r), H^(s), t)")
        p.add_argument("--oracle", action="store_true", help="use the brute-force oracle")
        p.add_argument("--timing", action="store_true", help="report elapsed_ms (breaks byte-identity)")

    c = sub.add_parser("check", parents=[common], help="run a lemma checker or a fuzz campaign")
    c.add_argument("--lemma", default=None, help=f"one of {', '.join(CHECKERS)}, sum_conjecture, all")
    c.add_argument("--setfamily", dest="a_family", help="family A (or F) as {n, members}")
    c.add_argument("--b-family", help="family B as {n, members}")
    for key in ("X", "Y", "T", "U", "I"):
        c.add_argument(f"--{key}", help="set as comma-separated 1-based labels")
    c.add_argument("--n", type=int)
    c.add_argument("--fuzz", type=int, help="run this many random instances per checker")
    c.add_argument("--verbose", action="store_true", help="with --fuzz, emit one JSON line per instance")

    p = sub.add_parser("probe-eta", parents=[common], help="search for H where no star pair attains m")
    p.add_argument("--n", type=int)
    p.add_argument("--mode", choices=("exhaustive", "random"), default="random")
    p.add_argument("--count", type=int)
    p.add_argument("--mu-floor", type=int)
    p.add_argument("--max-families", type=int)

    sp = sub.add_parser("star-property", parents=[common], help="largest t-intersecting subfamily")
    sp.add_argument("--setfamily", dest="a_family", help="family as {n, members}")
    return parser


_INPUT_KEYS = ("family", "graph", "config", "a_family", "b_family")
_TOP_KEYS = {"command", "out", "format", "r", "s", "t", "seed", "oracle_cap", "clique_cap", "workers"}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    raw = vars(ns)
    inputs = {k: raw[k] for k in _INPUT_KEYS if raw.get(k)}
    options = {k: v for k, v in raw.items() if k not in _TOP_KEYS and k not in _INPUT_KEYS}
    top = {k: raw[k] for k in _TOP_KEYS if k in raw}
    return RunConfig(inputs=inputs, options=options, **top)


def main(argv: Optional[list[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
