import pytest

from lnps.bench import DEFAULT_DISTANCES, generate_instance, tour_cost_brute, tour_instance
from lnps.config import parse_config
from lnps.engine import AcceptPolicy, EngineParams, accept, escalate_budget, run
from lnps.errors import BudgetError, ConfigError, InfeasibleError, UsageError
from lnps.model import Problem, is_feasible
from lnps.solver import Budget, SolverSession

from conftest import enumerate_optimum, sel_atoms

SEL = "_lnps_project(sel,1). _lnps_destroy(sel,1,1,p({p})). _lnps_prioritize(sel,1,{w},true)."


def sel_config(percent=30, weight=1):
    return parse_config(SEL.format(p=percent, w=weight))


def quick(**kw):
    base = dict(init_budget=Budget(20), iter_budget=Budget(5), escalation_factor=1.1)
    base.update(kw)
    return EngineParams(**base)


@pytest.mark.parametrize("t, c, policy, expected", [
    (5, 7, AcceptPolicy.STRICT_IMPROVING, True),
    (7, 7, AcceptPolicy.STRICT_IMPROVING, False),
    (7, 7, AcceptPolicy.NON_WORSENING, True),
    (9, 7, AcceptPolicy.STRICT_IMPROVING, False),
    (9, 7, AcceptPolicy.NON_WORSENING, False),
])
def test_accept(t, c, policy, expected):
    assert accept(t, c, policy) is expected


def test_escalate_examples():
    assert escalate_budget(Budget(1000), 1.05).max_conflicts == 1050
    assert escalate_budget(Budget(1000), 1.0).max_conflicts == 1000
    assert escalate_budget(Budget(), 2).max_conflicts is None
    with pytest.raises(ValueError):
        escalate_budget(Budget(10), 0.5)


def test_escalate_twenty_steps():
    b = Budget(40_000)
    for _ in range(20):
        b = escalate_budget(b, 1.05)
    # independent recurrence in integers: ceil(x * 105 / 100)
    x = 40_000
    for _ in range(20):
        x = -(-x * 105 // 100)
    assert b.max_conflicts == x == 106_147


@pytest.mark.parametrize("seed", range(8))
def test_variability_run_proves_the_optimum(seed):
    p = generate_instance(seed, 14, 0.5, 1.0)
    out = run(p, sel_config(), quick(seed=seed))
    assert out.proven_optimal
    assert out.best.cost == enumerate_optimum(p)
    assert out.stop_reason == "optimum"


def test_inf_zero_destruction_freezes_projection():
    p = generate_instance(3, 40, 0.5, 1.0)
    cfg = sel_config(percent=0, weight="inf")
    out = run(p, cfg, quick(max_iterations=15))
    initial = frozenset(v for v in p.atom_by_var if out.initial.value(v))
    assert len(out.trace) == 15
    assert all(rec.projection == initial for rec in out.trace)
    assert out.best.cost == out.initial.cost
    assert not out.proven_optimal


def test_already_optimal_short_circuits():
    p = Problem(2, ((1, 2),), (), sel_atoms(2))
    out = run(p, sel_config(), EngineParams())
    assert out.proven_optimal and out.iterations == 0 and out.trace == ()


def test_infeasible_problem():
    with pytest.raises(InfeasibleError):
        run(Problem(1, ((1,), (-1,)), (), sel_atoms(1)), sel_config(), EngineParams())


def test_initial_budget_without_model():
    p = generate_instance(0, 150, 1.0, 0.5)
    with pytest.raises(BudgetError):
        run(p, sel_config(), quick())


def test_config_must_match_atom_table():
    with pytest.raises(ConfigError):
        run(tour_instance(DEFAULT_DISTANCES), sel_config(), quick())


def test_no_stop_criterion_is_rejected():
    p = generate_instance(1, 12)
    with pytest.raises(UsageError):
        run(p, sel_config(weight="inf"), quick())
    with pytest.raises(UsageError):
        run(p, sel_config(), quick(escalation_factor=1.0))


def test_inf_never_proves_optimality():
    p = tour_instance(DEFAULT_DISTANCES)
    cfg = parse_config(open("data/tour5_lns.lp").read())
    out = run(p, cfg, EngineParams(init_budget=Budget(1), iter_budget=Budget(1000), max_iterations=30))
    assert not out.proven_optimal
    assert any(r.status == "OPTIMUM" for r in out.trace)


def test_tour_reaches_brute_force_cost():
    p = tour_instance(DEFAULT_DISTANCES)
    cfg = parse_config(open("data/tour5_lnps.lp").read())
    out = run(p, cfg, EngineParams(init_budget=Budget(1), iter_budget=Budget(1)))
    assert out.proven_optimal and out.best.cost == tour_cost_brute(DEFAULT_DISTANCES) == 18


def test_tighten_bound_proves_through_unsat():
    p = tour_instance(DEFAULT_DISTANCES)
    cfg = parse_config(open("data/tour5_lnps.lp").read())
    out = run(p, cfg, EngineParams(init_budget=Budget(1), iter_budget=Budget(1), tighten_bound=True))
    assert out.proven_optimal and out.best.cost == 18
    last = out.trace[-1]
    assert last.status == "UNSATISFIABLE" and last.temporal_cost is None


def test_total_conflicts_caps_the_run():
    p = generate_instance(1001, 300, 0.5, 1.0)
    params = EngineParams(init_budget=Budget(100), iter_budget=Budget(20), escalation_factor=1.0,
                          total_conflicts=600)
    out = run(p, sel_config(10), params)
    assert out.conflicts <= 600
    assert out.stop_reason == "total_conflicts"


def test_wall_clock_limit_stops_the_run():
    p = generate_instance(1001, 300, 0.5, 1.0)
    params = EngineParams(init_budget=Budget(100), iter_budget=Budget(20), escalation_factor=1.0,
                          wall_clock_limit=0.3)
    out = run(p, sel_config(10), params)
    assert out.stop_reason in ("time_limit", "optimum")


class RecordingSession(SolverSession):
    def __init__(self, problem):
        super().__init__(problem)
        self.models = []

    def solve(self, *args, **kwargs):
        res = super().solve(*args, **kwargs)
        if res.model is not None:
            self.models.append(res.model)
        return res


@pytest.mark.parametrize("policy", list(AcceptPolicy))
@pytest.mark.parametrize("seed", range(5))
def test_trace_invariants(seed, policy):
    p = generate_instance(50 + seed, 120, 0.5, 1.0)
    session = RecordingSession(p)
    out = run(p, sel_config(20), quick(seed=seed, accept_policy=policy, max_iterations=40,
                                       escalation_factor=1.0), session=session)
    best = [r.best_cost for r in out.trace]
    assert all(a >= b for a, b in zip(best, best[1:]))
    prev = out.initial.cost
    for r in out.trace:
        if r.current_cost != prev:
            assert r.accepted
        if policy is AcceptPolicy.STRICT_IMPROVING:
            assert r.best_cost <= r.current_cost
        prev = r.current_cost
    # directives never constrain: every model solves the original problem
    assert all(is_feasible(p, m.assignment) for m in session.models)
    assert out.best.cost == min(m.cost for m in session.models)


def test_reproducible_trace():
    p = generate_instance(77, 100, 0.5, 1.0)
    params = quick(seed=9, max_iterations=25)
    a = run(p, sel_config(), params)
    b = run(p, sel_config(), params)
    assert [r.to_json() for r in a.trace] == [r.to_json() for r in b.trace]


def test_on_iteration_callback_sees_every_record():
    p = generate_instance(78, 60, 0.5, 1.0)
    seen = []
    out = run(p, sel_config(), quick(max_iterations=10), on_iteration=seen.append)
    assert tuple(seen) == out.trace
    assert set(seen[0].to_json()) == {
        "step", "destroyed", "status", "temporal_cost", "accepted", "best_cost", "current_cost", "conflicts"}


def test_params_validation():
    with pytest.raises(ValueError):
        EngineParams(escalation_factor=0.9)
    with pytest.raises(ValueError):
        EngineParams(total_conflicts=0)


def test_inf_config_does_not_claim_an_optimal_start():
    p = Problem(2, ((1, 2),), (), sel_atoms(2))
    out = run(p, sel_config(weight="inf"), EngineParams(max_iterations=5))
    assert out.iterations == 0 and not out.proven_optimal and out.stop_reason == "optimum"
