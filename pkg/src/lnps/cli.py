"""Command-line front end: ``solve``, ``lnps``, ``verify``, ``gen``, ``bench``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__
from .bench import (
    DEFAULT_DISTANCES,
    RunSpec,
    brute_force_optimum,
    generate_instance,
    report_csv,
    report_jsonl,
    report_summary,
    run_suite,
    tour_instance,
)
from .config import read_config
from .engine import AcceptPolicy, EngineParams, run
from .errors import LnpsError
from .model import read_instance, serialize_instance, write_instance
from .solver import Budget, SolverSession, Status

_ACCEPT = {"strict": AcceptPolicy.STRICT_IMPROVING, "nonworsening": AcceptPolicy.NON_WORSENING}


def _engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="LNPS configuration fact file")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--init-conflicts", type=int, default=10_000)
    p.add_argument("--iter-conflicts", type=int, default=100)
    p.add_argument("--escalation", type=float, default=1.05)
    p.add_argument("--accept", choices=sorted(_ACCEPT), default="strict")
    p.add_argument("--tighten-bound", action="store_true")
    p.add_argument("--max-iterations", type=int)
    p.add_argument("--time-limit", type=float, help="wall-clock seconds per run")
    p.add_argument("--total-conflicts", type=int, help="conflict budget for a whole run")
    p.add_argument("--percent", type=int, help="override every destroy percentage")
    p.add_argument("--destroy", choices=["auto", "atoms", "constants"], default="auto")


def _params(args) -> EngineParams:
    return EngineParams(
        init_budget=Budget(max_conflicts=args.init_conflicts),
        iter_budget=Budget(max_conflicts=args.iter_conflicts),
        escalation_factor=args.escalation,
        accept_policy=_ACCEPT[args.accept],
        tighten_bound=args.tighten_bound,
        max_iterations=args.max_iterations,
        wall_clock_limit=args.time_limit,
        seed=args.seed,
        total_conflicts=args.total_conflicts,
        destroy_operator=args.destroy,
    )


def _load_config(args):
    config = read_config(args.config)
    if args.percent is not None:
        config = config.with_percent(args.percent)
    return config


def cmd_solve(args) -> int:
    problem = read_instance(args.instance)
    budget = Budget(max_conflicts=args.conflicts, wall_clock=args.time_limit)
    res = SolverSession(problem).solve(assumptions=args.assume or (), budget=budget)
    print(f"status: {res.status.value}")
    print(f"conflicts: {res.conflicts_used}")
    if res.model is not None:
        print(f"cost: {res.model.cost}")
        atoms = [problem.atom_by_var[v].symbol for v in sorted(res.model.true_vars())
                 if v in problem.atom_by_var]
        print("atoms: " + " ".join(atoms))
    return 0 if res.status is not Status.BUDGET_EXHAUSTED else 3


def cmd_lnps(args) -> int:
    problem = read_instance(args.instance)
    config = _load_config(args)
    trace_fh = open(args.trace, "w", encoding="utf-8") if args.trace else None

    def emit(rec):
        line = json.dumps(rec.to_json(), sort_keys=True)
        if args.out == "jsonl":
            print(line, flush=True)
        if trace_fh is not None:
            trace_fh.write(line + "\n")

    try:
        outcome = run(problem, config, _params(args), on_iteration=emit)
    finally:
        if trace_fh is not None:
            trace_fh.close()
    summary = {
        "cost": outcome.best.cost,
        "initial_cost": outcome.initial.cost,
        "proven_optimal": outcome.proven_optimal,
        "iterations": outcome.iterations,
        "conflicts": outcome.conflicts,
        "stop_reason": outcome.stop_reason,
    }
    if args.out == "jsonl":
        print(json.dumps({"summary": summary}, sort_keys=True))
    else:
        for k, v in summary.items():
            print(f"{k}: {v}")
    return 0


def cmd_verify(args) -> int:
    bad = 0
    for path in args.instances:
        problem = read_instance(path)
        oracle, sat = brute_force_optimum(problem)
        res = SolverSession(problem).solve()
        got = res.cost if res.status is Status.OPTIMUM else None
        ok = (sat and got == oracle) or (not sat and res.status is Status.UNSATISFIABLE)
        bad += not ok
        print(f"{'ok ' if ok else 'BAD'} {path}: solver={res.status.value}/{got} oracle={oracle if sat else 'UNSAT'}")
    return 1 if bad else 0


def cmd_gen(args) -> int:
    if args.tour:
        problem = tour_instance(DEFAULT_DISTANCES)
    else:
        problem = generate_instance(args.seed, args.vars, args.clause_density, args.objective_density)
    if args.output:
        write_instance(problem, args.output)
    else:
        sys.stdout.write(serialize_instance(problem))
    return 0


def cmd_bench(args) -> int:
    params = _params(args)
    seeds = tuple(range(args.seed, args.seed + args.runs))
    reports = []
    for inst in args.instances:
        spec = RunSpec(inst, args.config, params, seeds,
                       plain_conflicts=args.plain_conflicts, percent=args.percent)
        report = run_suite(spec, jobs=args.jobs)
        reports.append(report)
        for seed, err in report.errors.items():
            print(f"error {inst} seed {seed}: {err}", file=sys.stderr)
        logging.getLogger(__name__).info(json.dumps(report_summary(report)))
    csv_text = report_csv(reports)
    jsonl_text = report_jsonl(reports)
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        with open(os.path.join(args.out_dir, "report.csv"), "w", encoding="utf-8") as fh:
            fh.write(csv_text)
        with open(os.path.join(args.out_dir, "traces.jsonl"), "w", encoding="utf-8") as fh:
            fh.write(jsonl_text)
    sys.stdout.write(csv_text if args.out == "csv" else jsonl_text)
    return 1 if any(r.errors for r in reports) else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lnps", description="Large neighborhood prioritized search")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="plain branch-and-improve solve")
    p.add_argument("instance")
    p.add_argument("--conflicts", type=int)
    p.add_argument("--time-limit", type=float)
    p.add_argument("--assume", type=int, nargs="*")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("lnps", help="run the LNPS engine")
    p.add_argument("instance")
    _engine_flags(p)
    p.add_argument("--out", choices=["text", "jsonl"], default="text")
    p.add_argument("--trace", help="write the JSON-lines iteration trace here")
    p.set_defaults(func=cmd_lnps)

    p = sub.add_parser("verify", help="compare plain solve against brute force")
    p.add_argument("instances", nargs="+")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--vars", type=int, default=12)
    p.add_argument("--clause-density", type=float, default=0.5)
    p.add_argument("--objective-density", type=float, default=0.5)
    p.add_argument("--tour", action="store_true", help="the built-in 5-city tour instance")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="seeded LNPS runs vs one plain solve")
    p.add_argument("instances", nargs="+")
    _engine_flags(p)
    p.add_argument("--runs", type=int, default=3)
    p.add_argument("--plain-conflicts", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", choices=["csv", "jsonl"], default="csv")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (LnpsError, OSError) as exc:
        print(f"lnps: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
