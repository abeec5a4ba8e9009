import json
import os
import random
import subprocess
import sys

import pytest

from lnps.bench import DEFAULT_DISTANCES, tour_instance
from lnps.kernels import DISABLE_ENV, JIT_ENABLED
from lnps.kernels.enumerate import scan
from lnps.solver import SolverSession

from conftest import enumerate_optimum, random_problem


@pytest.mark.parametrize("seed", range(25))
def test_enumeration_routes_agree(seed):
    p = random_problem(random.Random(seed), random.Random(seed).randint(1, 11))
    loop = scan(p.num_vars, p.clauses, p.objective, use_jit=True)
    vec = scan(p.num_vars, p.clauses, p.objective, use_jit=False)
    assert loop[0] == vec[0]
    assert loop[2] == vec[2]
    expected = enumerate_optimum(p)
    assert loop[0] == (-1 if expected is None else expected)


def test_enumeration_counts_tours():
    p = tour_instance(DEFAULT_DISTANCES)
    # directed Hamiltonian cycles on 5 labelled cities: 4! = 24
    assert scan(p.num_vars, p.clauses, p.objective, use_jit=True)[2] == 24
    assert scan(p.num_vars, p.clauses, p.objective, use_jit=False)[2] == 24


def test_enumeration_guard():
    with pytest.raises(ValueError, match="guard"):
        scan(25, (), ())


_SCRIPT = """
import json, random, sys
sys.path.insert(0, {tests!r})
from conftest import random_problem
from lnps.kernels import JIT_ENABLED
from lnps.solver import SolverSession, Budget
out = []
for seed in range(12):
    p = random_problem(random.Random(seed), 6 + seed)
    r = SolverSession(p).solve(budget=Budget(max_conflicts=40))
    out.append([r.status.value, r.cost, r.conflicts_used, list(r.model_costs)])
print(json.dumps({{"jit": JIT_ENABLED, "runs": out}}))
"""


@pytest.mark.skipif(not JIT_ENABLED, reason="compares compiled and interpreted kernels")
def test_interpreted_fallback_matches_compiled():
    tests = os.path.dirname(__file__)
    env = dict(os.environ, **{DISABLE_ENV: "1"})
    proc = subprocess.run([sys.executable, "-c", _SCRIPT.format(tests=tests)],
                          env=env, capture_output=True, text=True, check=True)
    fallback = json.loads(proc.stdout)
    assert fallback["jit"] is False
    compiled = []
    for seed in range(12):
        from lnps.solver import Budget

        p = random_problem(random.Random(seed), 6 + seed)
        r = SolverSession(p).solve(budget=Budget(max_conflicts=40))
        compiled.append([r.status.value, r.cost, r.conflicts_used, list(r.model_costs)])
    assert fallback["runs"] == compiled
