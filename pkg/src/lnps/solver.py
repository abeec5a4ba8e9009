"""Prioritized systematic search: a CDCL branch-and-improve backend.

Branching follows per-variable directives.  An unassigned variable with the
highest directive level is decided first (undirected variables sit at level
0), on the directive's sign.  Ties go to VSIDS activity.  Directives only
reorder the search; they never remove models.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import UsageError
from .kernels import cdcl
from .model import Problem, Solution

INF = math.inf
Level = Union[int, float]


class Status(enum.Enum):
    OPTIMUM = "OPTIMUM"
    SATISFIABLE = "SATISFIABLE"
    UNSATISFIABLE = "UNSATISFIABLE"
    BUDGET_EXHAUSTED = "BUDGET_EXHAUSTED"


_STATUS = {
    cdcl.STATUS_OPTIMUM: Status.OPTIMUM,
    cdcl.STATUS_SATISFIABLE: Status.SATISFIABLE,
    cdcl.STATUS_UNSATISFIABLE: Status.UNSATISFIABLE,
    cdcl.STATUS_BUDGET_EXHAUSTED: Status.BUDGET_EXHAUSTED,
}


@dataclass(frozen=True)
class Directive:
    """Prefer deciding ``var`` early (higher ``level`` first) on ``sign``."""

    var: int
    level: Level
    sign: bool


@dataclass(frozen=True)
class Budget:
    max_conflicts: Optional[int] = None
    wall_clock: Optional[float] = None

    def __post_init__(self):
        if self.max_conflicts is not None and self.max_conflicts < 1:
            raise ValueError("max_conflicts must be >= 1 when bounded")
        if self.wall_clock is not None and self.wall_clock < 0:
            raise ValueError("wall_clock must be nonnegative")

    @property
    def unlimited(self) -> bool:
        return self.max_conflicts is None and self.wall_clock is None


@dataclass(frozen=True)
class SolveResult:
    status: Status
    model: Optional[Solution]
    conflicts_used: int
    model_costs: tuple[int, ...] = ()
    decisions: int = 0
    timed_out: bool = False

    @property
    def cost(self) -> Optional[int]:
        return None if self.model is None else self.model.cost


def _lit_code(lit: int) -> int:
    return 2 * (abs(lit) - 1) + (1 if lit < 0 else 0)


def _code_lit(code: int) -> int:
    v = (code >> 1) + 1
    return -v if code & 1 else v


class SolverSession:
    """Holds one problem in kernel form.  Every solve call starts from scratch,
    so per-call bounds, assumptions and directives never leak between calls."""

    def __init__(self, problem: Problem, default_phase: bool = False,
                 phase_saving: bool = False, restart_base: int = 100):
        self.problem = problem
        self.default_phase = bool(default_phase)
        self.phase_saving = bool(phase_saving)
        self.restart_base = int(restart_base)
        n = problem.num_vars

        flat: list[int] = []
        starts = [0]
        for clause in problem.clauses:
            lits = list(dict.fromkeys(clause))
            if any(-l in lits for l in lits):
                continue  # tautology
            flat.extend(_lit_code(l) for l in lits)
            starts.append(len(flat))
        self._cl_lits = np.array(flat, dtype=np.int64)
        self._cl_start = np.array(starts, dtype=np.int64)

        merged: dict[int, int] = {}
        for w, lit in problem.objective:
            code = _lit_code(lit)
            merged[code] = merged.get(code, 0) + w
        order = sorted(merged.items(), key=lambda kv: (-kv[1], kv[0]))
        self._obj_lit = np.array([c for c, _ in order], dtype=np.int64)
        self._obj_w = np.array([w for _, w in order], dtype=np.int64)
        self._n = n
        self._first_decision: Optional[int] = None
        self._solved = False

    def solve(self, assumptions: Iterable[int] = (), directives: Sequence[Directive] = (),
              budget: Budget = Budget(), initial_bound: Optional[int] = None) -> SolveResult:
        n = self._n
        assumps = []
        for lit in assumptions:
            if lit == 0 or abs(lit) > n:
                raise UsageError(f"assumption {lit} references an unknown variable")
            assumps.append(_lit_code(lit))

        dlev = np.zeros(n, dtype=np.int64)
        dsign = np.full(n, -1, dtype=np.int8)
        for d in directives:
            if not 1 <= d.var <= n:
                raise UsageError(f"directive on unknown variable {d.var}")
            if d.level == INF or d.level < 1 or int(d.level) != d.level:
                raise UsageError(f"directive level must be a finite integer >= 1, got {d.level}")
            i = d.var - 1
            # highest level wins; equal levels: last registered wins
            if d.level >= dlev[i]:
                dlev[i] = int(d.level)
                dsign[i] = 1 if d.sign else 0

        bound = cdcl.NO_BOUND if initial_bound is None else int(initial_bound) + 1
        max_conf = -1 if budget.max_conflicts is None else int(budget.max_conflicts)
        deadline = math.inf if budget.wall_clock is None else time.perf_counter() + budget.wall_clock

        status, model, cost, conflicts, first, costs, decisions, timed_out = cdcl.search(
            n, self._cl_lits, self._cl_start, self._obj_lit, self._obj_w,
            np.array(assumps, dtype=np.int64), dlev, dsign,
            int(self.default_phase), self.phase_saving, max_conf, bound, deadline,
            self.restart_base,
        )
        self._solved = True
        self._first_decision = None if first < 0 else _code_lit(int(first))
        status = _STATUS[int(status)]
        sol = None
        if status in (Status.OPTIMUM, Status.SATISFIABLE):
            sol = Solution(model.astype(bool), int(cost))
        return SolveResult(status, sol, int(conflicts), tuple(int(c) for c in costs),
                           int(decisions), bool(timed_out))

    def first_decision(self) -> Optional[int]:
        """First branching literal of the latest solve's first descent (None if none was needed)."""
        if not self._solved:
            raise UsageError("first_decision() called before any solve")
        return self._first_decision


def new_session(problem: Problem, **options) -> SolverSession:
    return SolverSession(problem, **options)
