"""The LNPS meta-loop: destroy the current solution, prioritize what is left,
re-solve under a conflict budget, accept, track the best, escalate."""

from __future__ import annotations

import enum
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .config import LnpsConfig, check_variability, validate_against
from .destroy import destroy, projection_view
from .errors import BudgetError, InfeasibleError, UsageError
from .heuristics import StepRegistry, compile_directives, prioritize
from .model import Problem, Solution
from .solver import Budget, SolverSession, Status

log = logging.getLogger(__name__)


class AcceptPolicy(enum.Enum):
    STRICT_IMPROVING = "strict"
    NON_WORSENING = "nonworsening"


@dataclass(frozen=True)
class EngineParams:
    init_budget: Budget = Budget(max_conflicts=10_000)
    iter_budget: Budget = Budget(max_conflicts=100)
    escalation_factor: float = 1.05
    accept_policy: AcceptPolicy = AcceptPolicy.STRICT_IMPROVING
    tighten_bound: bool = False
    max_iterations: Optional[int] = None
    wall_clock_limit: Optional[float] = None
    seed: int = 0
    # extensions beyond the core loop
    total_conflicts: Optional[int] = None
    destroy_operator: str = "auto"

    def __post_init__(self):
        if self.escalation_factor < 1:
            raise ValueError("escalation_factor must be >= 1")
        if self.max_iterations is not None and self.max_iterations < 0:
            raise ValueError("max_iterations must be nonnegative")
        if self.total_conflicts is not None and self.total_conflicts < 1:
            raise ValueError("total_conflicts must be >= 1")


@dataclass(frozen=True)
class IterationRecord:
    step: int
    destroyed: int
    status: str
    temporal_cost: Optional[int]
    accepted: bool
    best_cost: int
    current_cost: int
    conflicts: int
    projection: Optional[frozenset] = field(default=None, compare=False)

    def to_json(self) -> dict:
        d = asdict(self)
        del d["projection"]
        return d


@dataclass
class EngineState:
    current: Solution
    best: Solution
    temporal: Optional[Solution] = None
    step: int = 0
    live_budget: Budget = Budget()
    finished: bool = False
    variability: bool = True


@dataclass(frozen=True)
class Outcome:
    best: Solution
    proven_optimal: bool
    iterations: int
    trace: tuple[IterationRecord, ...]
    initial: Solution
    variability: bool
    conflicts: int
    stop_reason: str


def accept(temporal_cost: int, current_cost: int, policy: AcceptPolicy) -> bool:
    if policy is AcceptPolicy.STRICT_IMPROVING:
        return temporal_cost < current_cost
    return temporal_cost <= current_cost


def escalate_budget(budget: Budget, factor) -> Budget:
    """Scale the conflict cap by ``factor`` (rounded up); unlimited stays unlimited."""
    if factor < 1:
        raise ValueError("escalation factor must be >= 1")
    if budget.max_conflicts is None:
        return budget
    scaled = math.ceil(Fraction(budget.max_conflicts) * Fraction(str(factor)))
    return Budget(scaled, budget.wall_clock)


def _projection(problem: Problem, config: LnpsConfig, sol: Solution) -> frozenset:
    return frozenset(a.var for a in projection_view(problem, config, sol).atoms)


def run(problem: Problem, config: LnpsConfig, params: EngineParams = EngineParams(),
        session: Optional[SolverSession] = None,
        on_iteration: Optional[Callable[[IterationRecord], None]] = None) -> Outcome:
    validate_against(config, problem)
    variability = check_variability(config)
    unbounded_iter = params.iter_budget.max_conflicts is None
    if (params.max_iterations is None and params.wall_clock_limit is None
            and params.total_conflicts is None
            and not (variability and (params.escalation_factor > 1 or unbounded_iter))):
        raise UsageError(
            "no stop criterion: set max_iterations, wall_clock_limit or total_conflicts, "
            "or use a variability-preserving config with escalation > 1"
        )

    session = session or SolverSession(problem)
    rng = np.random.default_rng(params.seed)
    start = time.perf_counter()
    deadline = math.inf if params.wall_clock_limit is None else start + params.wall_clock_limit
    used = 0

    def budget_for(b: Budget) -> Optional[Budget]:
        cap = b.max_conflicts
        if params.total_conflicts is not None:
            left = params.total_conflicts - used
            if left < 1:
                return None
            cap = left if cap is None else min(cap, left)
        wall = b.wall_clock
        if deadline != math.inf:
            left_s = deadline - time.perf_counter()
            if left_s <= 0:
                return None
            wall = left_s if wall is None else min(wall, left_s)
        return Budget(cap, wall)

    init = session.solve(budget=budget_for(params.init_budget) or params.init_budget)
    used += init.conflicts_used
    if init.status is Status.UNSATISFIABLE:
        raise InfeasibleError("problem has no feasible solution")
    if init.status is Status.BUDGET_EXHAUSTED:
        raise BudgetError("no initial solution within the initial budget")
    if init.status is Status.OPTIMUM:
        # fixing configs never claim optimality, even for a plain optimal start
        return Outcome(init.model, variability, 0, (), init.model, variability, used, "optimum")

    state = EngineState(init.model, init.model, live_budget=params.iter_budget,
                        variability=variability)
    registry = StepRegistry()
    trace: list[IterationRecord] = []
    proven = False
    stop_reason = "max_iterations"

    while not state.finished:
        if params.max_iterations is not None and state.step >= params.max_iterations:
            stop_reason = "max_iterations"
            break
        budget = budget_for(state.live_budget)
        if budget is None:
            stop_reason = "time_limit" if time.perf_counter() >= deadline else "total_conflicts"
            break

        state.step += 1
        step = state.step
        view = projection_view(problem, config, state.current)
        parts = destroy(view, config.destroys, rng, params.destroy_operator)
        heu = prioritize(parts.undestroyed, config, step)
        if registry.live_step is not None:
            registry.retire(registry.live_step)
        registry.install(step, compile_directives(heu))

        bound = state.current.cost - 1 if params.tighten_bound else None
        res = session.solve(registry.assumptions(), registry.directives(), budget, bound)
        used += res.conflicts_used
        if res.timed_out:
            stop_reason = "time_limit"
            break

        state.temporal = res.model
        if res.status is Status.OPTIMUM and variability:
            state.finished = proven = True
        elif (res.status is Status.UNSATISFIABLE and variability and params.tighten_bound):
            # nothing cheaper than the current solution exists
            state.finished = proven = True

        accepted = False
        if res.model is not None:
            if accept(res.model.cost, state.current.cost, params.accept_policy):
                state.current = res.model
                accepted = True
            if res.model.cost < state.best.cost:
                state.best = res.model

        rec = IterationRecord(
            step=step,
            destroyed=len(parts.destroyed),
            status=res.status.value,
            temporal_cost=res.cost,
            accepted=accepted,
            best_cost=state.best.cost,
            current_cost=state.current.cost,
            conflicts=res.conflicts_used,
            projection=None if res.model is None else _projection(problem, config, res.model),
        )
        trace.append(rec)
        log.debug("iteration %s", rec.to_json())
        if on_iteration is not None:
            on_iteration(rec)
        state.live_budget = escalate_budget(state.live_budget, params.escalation_factor)

    if state.finished:
        stop_reason = "optimum"
    if registry.live_step is not None:
        registry.retire(registry.live_step)
    return Outcome(state.best, proven, len(trace), tuple(trace),
                   init.model, variability, used, stop_reason)
