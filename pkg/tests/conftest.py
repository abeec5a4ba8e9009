import itertools
import random

import pytest
from hypothesis import strategies as st

from lnps.model import Problem, SymbolicAtom


def sel_atoms(n):
    return tuple(SymbolicAtom(v, "sel", (v,)) for v in range(1, n + 1))


def random_problem(rng: random.Random, n: int, ratio: float = 3.0, neg_obj: bool = True) -> Problem:
    m = max(1, int(n * ratio))
    k = min(3, n)
    clauses = tuple(
        tuple(rng.choice((-1, 1)) * v for v in rng.sample(range(1, n + 1), k)) for _ in range(m)
    )
    signs = (-1, 1, 1) if neg_obj else (1,)
    objective = tuple(
        (rng.randint(1, 20), rng.choice(signs) * rng.randint(1, n)) for _ in range(rng.randint(0, 2 * n))
    )
    return Problem(n, clauses, objective, sel_atoms(n))


def enumerate_optimum(problem: Problem):
    """Pure-Python exhaustive search, independent of the packaged kernels."""
    best = None
    for bits in itertools.product((False, True), repeat=problem.num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in problem.clauses):
            cost = sum(w for w, l in problem.objective if bits[abs(l) - 1] == (l > 0))
            best = cost if best is None else min(best, cost)
    return best


@st.composite
def problems(draw, max_vars=8):
    n = draw(st.integers(1, max_vars))
    lit = st.integers(1, n).flatmap(lambda v: st.sampled_from((v, -v)))
    clauses = draw(st.lists(st.lists(lit, min_size=1, max_size=3).map(tuple), max_size=3 * n))
    objective = draw(st.lists(st.tuples(st.integers(1, 30), lit), max_size=2 * n))
    return Problem(n, tuple(clauses), tuple(objective), sel_atoms(n))


@pytest.fixture
def two_var():
    # clause {x1 v x2}, objective 2*[x1] + 1*[x2]
    return Problem(2, ((1, 2),), ((2, 1), (1, 2)), sel_atoms(2))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines.items()):
            terminalreporter.write_line(line)
