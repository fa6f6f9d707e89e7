"""Command line entry point.

Exit codes: 0 on success (an empty front included), 2 for input errors,
3 when a bounded query runs out of time or enumeration budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from itertools import combinations
from pathlib import Path
from typing import Sequence

from . import analysis
from .ltl import LTLSyntaxError, UnknownAtomError, parse, to_text
from .objectives import check_bc
from .search import ALGORITHMS, AmosaConfig, ParetoArchive, Problem, SearchConfig, run_search
from .semantics import (
    DEFAULT_BOUND,
    DEFAULT_TIMEOUT,
    AlphabetMismatchError,
    BoundedChecker,
    LassoTrace,
    ResourceLimitExceeded,
    eval_lasso,
)
from .specfile import SpecFile, SpecFileError, load

log = logging.getLogger("ltlrepair")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RESOURCE = 3


class UsageError(ValueError):
    pass


def _dumps(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _candidate_record(cand, valid: bool) -> dict:
    return {
        "birth": cand.birth,
        "goals": [to_text(g) for g in cand.goals],
        "fitness": cand.fitness.to_json(),
        "valid": valid,
    }


def resolve(sf: SpecFile, cfg: SearchConfig) -> tuple[dict, ParetoArchive]:
    """Run one search and build its report."""
    if not sf.bcs:
        raise UsageError("resolve needs at least one 'bc:' line in the spec file")
    problem = Problem.create(sf.spec, sf.bcs, cfg.bound, cfg.timeout)
    started = time.perf_counter()
    archive = run_search(problem, cfg)
    elapsed = time.perf_counter() - started
    report = {
        "spec": {
            "name": sf.name,
            "aps": list(sf.alphabet),
            "dom": [to_text(f) for f in sf.dom],
            "goals": [to_text(f) for f in sf.goals],
            "bcs": [to_text(f) for f in sf.bcs],
        },
        "config": cfg.to_json(),
        "seed": cfg.seed,
        "evaluations": len(archive.history),
        "candidates": [
            _candidate_record(c, problem.evaluator.is_valid(c.spec)) for c in archive.history
        ],
        "pareto_front": [_candidate_record(c, True) for c in archive],
        "wall_clock_seconds": elapsed,
    }
    return report, archive


def front_table(report: dict) -> str:
    rows = report["pareto_front"]
    if not rows:
        return "no valid resolution found\n"
    out = io.StringIO()
    out.write(f"{'#':>3}  {'cons':>4}  {'res':>4}  {'syn':>6}  {'sem':>6}  goals\n")
    for i, row in enumerate(rows, 1):
        f = row["fitness"]
        out.write(
            f"{i:>3}  {f['consistency']:>4.2g}  {f['resolved_bcs']:>4.2g}  "
            f"{f['syntactic']:>6.3f}  {f['semantic']:>6.3f}  {' ; '.join(row['goals'])}\n"
        )
    return out.getvalue()


def cmd_resolve(args) -> int:
    sf = load(args.spec)
    report, _ = resolve(sf, _config(args, args.algorithm, args.seed))
    if args.format == "text":
        payload = front_table(report)
    elif args.format == "csv":
        payload = _front_csv(report)
    else:
        payload = _dumps(report)
    if args.out:
        Path(args.out).write_text(_dumps(report), encoding="utf-8")
        sys.stdout.write(front_table(report))
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def _front_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["birth", "consistency", "resolved_bcs", "syntactic", "semantic", "goals"])
    for row in report["pareto_front"]:
        f = row["fitness"]
        w.writerow([row["birth"], f["consistency"], f["resolved_bcs"], f["syntactic"], f["semantic"],
                    " ; ".join(row["goals"])])
    return buf.getvalue()


def check_bcs(sf: SpecFile, bound: int, timeout: float | None) -> list[dict]:
    checker = BoundedChecker(timeout=timeout)
    return [
        {"bc": to_text(bc), **check_bc(sf.spec, bc, bound, checker).to_json()} for bc in sf.bcs
    ]


def cmd_check_bc(args) -> int:
    sf = load(args.spec)
    if args.bc:
        sf.bcs = [_parse_input(text, sf.alphabet) for text in args.bc]
    if not sf.bcs:
        raise UsageError("no boundary conditions to check")
    rows = check_bcs(sf, args.bound, args.timeout_secs)
    if args.format == "json":
        sys.stdout.write(_dumps(rows))
    else:
        for row in rows:
            mini = ",".join("yes" if m else "no" for m in row["minimality"])
            sys.stdout.write(
                f"{row['bc']}: inconsistency={'yes' if row['inconsistency'] else 'no'} "
                f"minimality=[{mini}] non-triviality={'yes' if row['non_triviality'] else 'no'} "
                f"=> {'BC' if row['holds'] else 'not a BC'}\n"
            )
    return EXIT_OK


def cmd_count(args) -> int:
    aps = args.aps.replace(",", " ").split() if args.aps else None
    f = _parse_input(args.formula, aps)
    checker = BoundedChecker(timeout=args.timeout_secs)
    sys.stdout.write(f"{checker.count(f, args.bound, aps)}\n")
    return EXIT_OK


def cmd_eval_trace(args) -> int:
    source = args.trace
    path = Path(source)
    text = path.read_text(encoding="utf-8") if not source.lstrip().startswith("{") and path.exists() else source
    try:
        trace = LassoTrace.from_json(text)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad trace: {exc}") from exc
    f = _parse_input(args.formula)
    sys.stdout.write(f"{str(eval_lasso(f, trace)).lower()}\n")
    return EXIT_OK


def compare(sf: SpecFile, algorithms: Sequence[str], runs: int, base: SearchConfig) -> tuple[list[dict], dict]:
    """Seeded runs per algorithm; per-run HV/IGD and pairwise statistics."""
    rows = []
    for alg in algorithms:
        for run in range(runs):
            cfg = _replace(base, algorithm=alg, seed=base.seed + run)
            _, archive = resolve(sf, cfg)
            points = [(c.fitness.syntactic, c.fitness.semantic) for c in archive]
            rows.append({
                "run": run,
                "algorithm": alg,
                "seed": cfg.seed,
                "front_size": len(points),
                "hv": analysis.hypervolume(points),
                "igd": analysis.igd(points),
            })
    summary = {"runs": runs, "algorithms": list(algorithms), "indicators": {}}
    for ind in ("hv", "igd"):
        samples = {alg: [r[ind] for r in rows if r["algorithm"] == alg] for alg in algorithms}
        entry: dict = {"mean": {alg: _mean(v) for alg, v in samples.items()}}
        if len(algorithms) >= 2:
            entry["kruskal_wallis"] = _json_stat(analysis.kruskal_wallis(list(samples.values())))
        pairs = []
        for a, b in combinations(algorithms, 2):
            mwu = analysis.mann_whitney(samples[a], samples[b])
            eff = analysis.a12(samples[a], samples[b]).effect_size
            pairs.append({
                "a": a,
                "b": b,
                "mann_whitney_u": mwu.statistic,
                "p_value": mwu.p_value,
                "a12": eff,
                "magnitude": analysis.magnitude(eff),
            })
        entry["pairwise"] = pairs
        summary["indicators"][ind] = entry
    return rows, summary


def _mean(values: list[float]) -> float | None:
    finite = [v for v in values if math.isfinite(v)]
    return sum(finite) / len(finite) if finite else None


def _json_stat(res: analysis.StatResult) -> dict:
    return {k: v for k, v in res.to_json().items() if v is not None}


def indicators_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["run", "algorithm", "hv", "igd"])
    for r in rows:
        w.writerow([r["run"], r["algorithm"], repr(r["hv"]), repr(r["igd"])])
    return buf.getvalue()


def cmd_compare(args) -> int:
    sf = load(args.spec)
    algorithms = list(dict.fromkeys(a.strip() for a in args.algorithms.split(",") if a.strip()))
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown or not algorithms:
        raise UsageError(f"unknown algorithms {unknown}; choose from {', '.join(ALGORITHMS)}")
    if args.runs < 1:
        raise UsageError("--runs must be positive")
    rows, summary = compare(sf, algorithms, args.runs, _config(args, algorithms[0], args.seed))
    table = indicators_csv(rows)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "indicators.csv").write_text(table, encoding="utf-8")
        (out / "stats.json").write_text(_dumps(summary), encoding="utf-8")
    if args.format == "json":
        sys.stdout.write(_dumps(summary))
    else:
        sys.stdout.write(table)
    return EXIT_OK


def _parse_input(text: str, alphabet=None):
    return parse(text, alphabet)


def _replace(cfg: SearchConfig, **changes) -> SearchConfig:
    data = {k: getattr(cfg, k) for k in cfg.__dataclass_fields__}
    data.update(changes)
    return SearchConfig(**data)


def _weights(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights must be four comma-separated numbers, got {text!r}")
    if len(values) != 4:
        raise argparse.ArgumentTypeError("weights need exactly four values")
    return values


def _config(args, algorithm: str, seed: int) -> SearchConfig:
    try:
        return SearchConfig(
            algorithm=algorithm,
            population_size=args.population,
            evaluation_budget=args.budget,
            crossover_probability=args.crossover_prob,
            weights=args.weights,
            bound=args.bound,
            seed=seed,
            timeout=args.timeout_secs,
            amosa=AmosaConfig(archive_cap=args.archive_cap),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _add_bound(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bound", "--k", "-k", dest="bound", type=int, default=DEFAULT_BOUND,
                   help="maximal lasso base length (default %(default)s)")
    p.add_argument("--timeout-secs", type=float, default=DEFAULT_TIMEOUT,
                   help="per-query time limit in seconds (default %(default)s)")


def _add_search(p: argparse.ArgumentParser) -> None:
    _add_bound(p)
    p.add_argument("--budget", type=int, default=1000, help="fitness evaluations (default %(default)s)")
    p.add_argument("--population", type=int, default=100, help="population size (default %(default)s)")
    p.add_argument("--crossover-prob", type=float, default=0.1)
    p.add_argument("--weights", type=_weights, default=(0.1, 0.7, 0.1, 0.1),
                   help="consistency,resolved,syntactic,semantic weights (default 0.1,0.7,0.1,0.1)")
    p.add_argument("--archive-cap", type=int, default=50, help="AMOSA archive size")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ltlrepair", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resolve", help="search for conflict resolutions")
    p.add_argument("spec")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="nsga3")
    _add_search(p)
    p.add_argument("--out", help="write the JSON run report here")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("check-bc", help="check boundary conditions of a spec")
    p.add_argument("spec")
    p.add_argument("--bc", action="append", help="formula to check instead of the file's bcs")
    _add_bound(p)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_check_bc)

    p = sub.add_parser("count", help="count satisfying lasso bases of length k")
    p.add_argument("formula")
    p.add_argument("--aps", help="atomic propositions, comma or space separated")
    _add_bound(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("compare", help="compare algorithms over seeded runs")
    p.add_argument("spec")
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--algorithms", default=",".join(ALGORITHMS))
    _add_search(p)
    p.add_argument("--out", help="directory for indicators.csv and stats.json")
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("eval-trace", help="evaluate a formula on a lasso trace")
    p.add_argument("formula")
    p.add_argument("trace", help='JSON {"base": [[atom, ...], ...], "loop": i} or a file holding it')
    p.set_defaults(func=cmd_eval_trace)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (SpecFileError, LTLSyntaxError, UnknownAtomError, AlphabetMismatchError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitExceeded as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
