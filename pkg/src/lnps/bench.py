"""Benchmark harness: brute-force oracle, instance generators, and suites of
seeded engine runs compared against a single plain solve."""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import permutations
from typing import Optional, Sequence

import numpy as np

from .config import LnpsConfig, read_config
from .engine import EngineParams, Outcome, run
from .errors import LnpsError, UsageError
from .kernels.enumerate import MAX_VARS, scan
from .model import Problem, SymbolicAtom, read_instance
from .solver import Budget, SolverSession, Status

THRESHOLD_RATIO = 4.26


def brute_force_optimum(problem: Problem) -> tuple[Optional[int], bool]:
    """Exhaustive minimum cost over feasible assignments: ``(cost, satisfiable)``."""
    if problem.num_vars > MAX_VARS:
        raise UsageError(f"brute force limited to {MAX_VARS} variables, got {problem.num_vars}")
    best, _, _ = scan(problem.num_vars, problem.clauses, problem.objective)
    if best < 0:
        return None, False
    return best, True


def count_models(problem: Problem) -> int:
    return scan(problem.num_vars, problem.clauses, problem.objective)[2]


def generate_instance(seed: int, num_vars: int, clause_density: float = 0.5,
                      objective_density: float = 0.5, max_weight: int = 20,
                      retries: int = 1000) -> Problem:
    """Random 3-clause problem with a positive weighted objective and a ``sel/1`` atom per variable.

    ``clause_density`` scales the clause count relative to the random 3-SAT
    threshold (4.26 clauses per variable).  Instances up to 20 variables are
    re-drawn until the oracle finds them satisfiable.
    """
    if num_vars < 1 or not 0 < clause_density <= 1 or not 0 < objective_density <= 1:
        raise UsageError("need num_vars >= 1 and densities in (0, 1]")
    rng = np.random.default_rng(seed)
    n = num_vars
    m = max(1, round(clause_density * THRESHOLD_RATIO * n))
    k = min(3, n)
    atoms = tuple(SymbolicAtom(v, "sel", (v,)) for v in range(1, n + 1))
    for _ in range(retries):
        clauses = []
        for _ in range(m):
            vs = rng.choice(n, size=k, replace=False) + 1
            signs = rng.integers(0, 2, size=k) * 2 - 1
            clauses.append(tuple(int(s * v) for s, v in zip(signs, vs)))
        n_obj = max(1, round(objective_density * n))
        obj_vars = np.sort(rng.choice(n, size=n_obj, replace=False)) + 1
        weights = rng.integers(1, max_weight + 1, size=n_obj)
        objective = tuple((int(w), int(v)) for w, v in zip(weights, obj_vars))
        problem = Problem(n, tuple(clauses), objective, atoms)
        if n > 20 or brute_force_optimum(problem)[1]:
            return problem
    raise UsageError(f"no satisfiable instance after {retries} draws (seed {seed})")


def tour_instance(distances) -> Problem:
    """Directed Hamiltonian cycle selection over ``cycle(i,j)`` atoms, cities numbered from 1.

    Exactly one outgoing and one incoming edge per city, plus a ban on
    2-cycles, which rules out every subtour for up to 5 cities.
    """
    d = np.asarray(distances)
    n = d.shape[0]
    if not 3 <= n <= 5:
        raise UsageError("tour instances support 3 to 5 cities")
    edges = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    var = {e: k for k, e in enumerate(edges, start=1)}
    atoms = tuple(SymbolicAtom(var[e], "cycle", e) for e in edges)
    clauses = []
    for c in range(1, n + 1):
        for group in ([var[c, j] for j in range(1, n + 1) if j != c],
                      [var[i, c] for i in range(1, n + 1) if i != c]):
            clauses.append(tuple(group))
            clauses += [(-a, -b) for a, b in _pairs(group)]
    clauses += [(-var[i, j], -var[j, i]) for i, j in edges if i < j]
    objective = tuple((int(d[i - 1, j - 1]), var[i, j]) for i, j in edges)
    return Problem(len(edges), tuple(clauses), objective, atoms)


def _pairs(xs):
    return [(xs[a], xs[b]) for a in range(len(xs)) for b in range(a + 1, len(xs))]


def tour_cost_brute(distances) -> int:
    d = np.asarray(distances)
    n = d.shape[0]
    best = None
    for perm in permutations(range(1, n)):
        tour = (0, *perm, 0)
        cost = sum(int(d[a, b]) for a, b in zip(tour, tour[1:]))
        best = cost if best is None else min(best, cost)
    return best


DEFAULT_DISTANCES = np.array([
    [0, 7, 3, 9, 4],
    [5, 0, 8, 2, 6],
    [4, 6, 0, 7, 3],
    [8, 3, 5, 0, 9],
    [2, 9, 6, 4, 0],
])


@dataclass(frozen=True)
class RunSpec:
    instance: str
    config: str
    params: EngineParams = EngineParams()
    seeds: tuple[int, ...] = (1, 2, 3)
    repetitions: Optional[int] = None
    plain_conflicts: Optional[int] = None
    percent: Optional[int] = None

    def __post_init__(self):
        if self.repetitions is not None and self.repetitions != len(self.seeds):
            raise UsageError("repetitions must equal the number of seeds")


@dataclass
class RunReport:
    instance: str
    seeds: list[int]
    costs: list[int]
    proven_optimal: list[bool]
    iterations: list[int]
    conflicts: list[int]
    plain_cost: Optional[int]
    plain_status: str
    plain_conflicts: int
    wall_time: float
    errors: dict[int, str] = field(default_factory=dict)
    traces: list[dict] = field(default_factory=list)

    @property
    def avg(self) -> Optional[float]:
        return sum(self.costs) / len(self.costs) if self.costs else None

    @property
    def min(self) -> Optional[int]:
        return min(self.costs) if self.costs else None

    @property
    def max(self) -> Optional[int]:
        return max(self.costs) if self.costs else None

    @property
    def rate(self) -> Optional[float]:
        if not self.costs or not self.plain_cost:
            return None
        return self.avg / self.plain_cost


def _one_run(problem: Problem, config: LnpsConfig, params: EngineParams, seed: int):
    try:
        outcome = run(problem, config, replace(params, seed=seed))
    except LnpsError as exc:
        return seed, None, f"{type(exc).__name__}: {exc}"
    return seed, outcome, None


def run_suite(spec: RunSpec, jobs: int = 1) -> RunReport:
    t0 = time.perf_counter()
    problem = read_instance(spec.instance)
    config = read_config(spec.config)
    if spec.percent is not None:
        config = config.with_percent(spec.percent)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_one_run, *zip(*[(problem, config, spec.params, s) for s in spec.seeds])))
    else:
        results = [_one_run(problem, config, spec.params, s) for s in spec.seeds]
    results.sort(key=lambda r: r[0])

    name = os.path.basename(spec.instance)
    report = RunReport(name, [], [], [], [], [], None, "", 0, 0.0)
    outcomes: list[Outcome] = []
    for seed, outcome, err in results:
        if err is not None:
            report.errors[seed] = err
            continue
        outcomes.append(outcome)
        report.seeds.append(seed)
        report.costs.append(outcome.best.cost)
        report.proven_optimal.append(outcome.proven_optimal)
        report.iterations.append(outcome.iterations)
        report.conflicts.append(outcome.conflicts)
        for rec in outcome.trace:
            report.traces.append({"instance": name, "seed": seed, **rec.to_json()})

    cap = spec.plain_conflicts or spec.params.total_conflicts
    if cap is None and outcomes:
        cap = max(o.conflicts for o in outcomes)
    plain = SolverSession(problem).solve(budget=Budget(max_conflicts=max(1, cap)) if cap else Budget())
    report.plain_cost = plain.cost
    report.plain_status = plain.status.value
    report.plain_conflicts = plain.conflicts_used
    report.wall_time = time.perf_counter() - t0
    return report


CSV_HEADER = ["instance", "plain", "avg", "min", "max", "rate", "optimal", "runs", "iterations"]


def _fmt(x, spec):
    return "" if x is None else format(x, spec)


def report_csv(reports: Sequence[RunReport]) -> str:
    """CSV report: one row per instance and a closing average-rate row."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerow([
            r.instance,
            "" if r.plain_cost is None else r.plain_cost,
            _fmt(r.avg, ".1f"),
            "" if r.min is None else r.min,
            "" if r.max is None else r.max,
            _fmt(r.rate, ".3f"),
            sum(r.proven_optimal),
            len(r.costs),
            sum(r.iterations),
        ])
    rates = [r.rate for r in reports if r.rate is not None]
    mean = sum(rates) / len(rates) if rates else None
    w.writerow(["Average rate", "1.000", _fmt(mean, ".3f"), "", "", "", "", "", ""])
    return buf.getvalue()


def report_jsonl(reports: Sequence[RunReport]) -> str:
    lines = [json.dumps(t, sort_keys=True) for r in reports for t in r.traces]
    return "".join(line + "\n" for line in lines)


def report_summary(r: RunReport) -> dict:
    return {
        "instance": r.instance,
        "seeds": r.seeds,
        "costs": r.costs,
        "avg": r.avg,
        "min": r.min,
        "max": r.max,
        "proven_optimal": r.proven_optimal,
        "iterations": r.iterations,
        "conflicts": r.conflicts,
        "plain_cost": r.plain_cost,
        "plain_status": r.plain_status,
        "rate": r.rate,
        "errors": {str(k): v for k, v in r.errors.items()},
        "wall_time": round(r.wall_time, 3),
    }
