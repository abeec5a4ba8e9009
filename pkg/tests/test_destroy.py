from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lnps.config import DestroySpec, parse_config
from lnps.destroy import (
    DestroyOutcome,
    ProjectionView,
    destroy,
    destroy_random_atoms,
    destroy_random_constants,
    partition_check,
    projection_view,
    round_half_up,
    select_operator,
)
from lnps.errors import ConfigError
from lnps.model import Problem, Solution, SymbolicAtom


def sel_view(n):
    return ProjectionView(tuple(SymbolicAtom(v, "sel", (v,)) for v in range(1, n + 1)))


def edges(*pairs):
    return ProjectionView(tuple(SymbolicAtom(k, "e", p) for k, p in enumerate(pairs, start=1)))


def rng(seed=0):
    return np.random.default_rng(seed)


@pytest.mark.parametrize("percent, count, expected", [
    (30, 10, 3), (0, 7, 0), (100, 7, 7), (50, 1, 1), (50, 3, 2), (25, 2, 1), (49, 1, 0), (34, 3, 1),
])
def test_round_half_up(percent, count, expected):
    assert round_half_up(percent, count) == expected


def test_thirty_percent_of_ten():
    out = destroy_random_atoms(sel_view(10), DestroySpec("sel", 1, 1, 30), rng())
    assert len(out.destroyed) == 3 and len(out.undestroyed) == 7


def test_zero_percent_destroys_nothing():
    view = sel_view(12)
    out = destroy_random_atoms(view, DestroySpec("sel", 1, 1, 0), rng())
    assert out.destroyed == frozenset() and out.undestroyed == frozenset(view.atoms)


@pytest.mark.parametrize("percent, expected", [(1, 3), (3, 9), (5, 15)])
def test_small_percentages_on_300_atoms(percent, expected):
    out = destroy_random_atoms(sel_view(300), DestroySpec("sel", 1, 1, percent), rng(percent))
    assert len(out.destroyed) == expected


def test_constants_triangle_samples():
    view = edges((1, 2), (2, 3), (3, 1))
    spec = DestroySpec("e", 2, 3, 34)
    induced = {
        1: {(1, 2), (3, 1)},
        2: {(1, 2), (2, 3)},
        3: {(2, 3), (3, 1)},
    }
    seen = set()
    for seed in range(60):
        got = {a.args for a in destroy_random_constants(view, spec, rng(seed)).destroyed}
        assert got in induced.values()
        seen.add(frozenset(got))
    assert len(seen) == 3


def test_constants_saturation():
    view = edges((1, 2), (2, 3), (3, 1))
    out = destroy_random_constants(view, DestroySpec("e", 2, 3, 100), rng())
    assert out.destroyed == frozenset(view.atoms)


def test_constants_single_group_via_first_argument():
    view = edges((1, 2), (1, 3))
    out = destroy_random_constants(view, DestroySpec("e", 2, 1, 100), rng())
    assert out.destroyed == frozenset(view.atoms)


def test_constants_second_argument_only():
    view = edges((1, 2), (2, 3), (3, 2))
    for seed in range(20):
        out = destroy_random_constants(view, DestroySpec("e", 2, 2, 50), rng(seed))
        # constants {2, 3} from the second argument; one is sampled
        assert {a.args for a in out.destroyed} in ({(1, 2), (3, 2)}, {(2, 3)})


def test_partition_check_rejects_overlap_and_gaps():
    view = edges((1, 2), (2, 3))
    a, b = view.atoms
    assert partition_check(DestroyOutcome(frozenset({a}), frozenset({b})), view)
    assert not partition_check(DestroyOutcome(frozenset({a}), frozenset({a, b})), view)
    assert not partition_check(DestroyOutcome(frozenset({a}), frozenset()), view)


def test_operator_selection():
    full, part = DestroySpec("e", 2, 3, 10), DestroySpec("e", 2, 1, 10)
    assert select_operator(full) is destroy_random_atoms
    assert select_operator(part) is destroy_random_constants
    assert select_operator(full, "constants") is destroy_random_constants
    with pytest.raises(ConfigError):
        select_operator(part, "atoms")
    with pytest.raises(ConfigError):
        select_operator(full, "bogus")


def test_projection_view_keeps_true_projected_atoms():
    atoms = (SymbolicAtom(1, "e", (1, 2)), SymbolicAtom(2, "e", (2, 1)), SymbolicAtom(3, "w", (1,)))
    p = Problem(3, (), (), atoms)
    sol = Solution(np.array([True, False, True]), 0)
    view = projection_view(p, parse_config("_lnps_project(e,2)."), sol)
    assert view.atoms == (atoms[0],)


def test_destroy_unions_per_predicate():
    view = ProjectionView(tuple(SymbolicAtom(v, "a", (v,)) for v in range(1, 5))
                          + tuple(SymbolicAtom(v, "b", (v,)) for v in range(5, 9)))
    specs = (DestroySpec("a", 1, 1, 50), DestroySpec("b", 1, 1, 0))
    out = destroy(view, specs, rng())
    assert len(out.destroyed) == 2 and all(a.predicate == "a" for a in out.destroyed)
    assert partition_check(out, view)


@given(st.integers(0, 40), st.integers(0, 100), st.integers(0, 2**32 - 1), st.booleans())
def test_partition_and_determinism(n, percent, seed, by_constants):
    view = edges(*[(i % 5, (i * 7) % 11) for i in range(n)])
    spec = DestroySpec("e", 2, 3, percent)
    op = destroy_random_constants if by_constants else destroy_random_atoms
    first = op(view, spec, rng(seed))
    assert partition_check(first, view)
    assert op(view, spec, rng(seed)) == first
    if not by_constants:
        assert len(first.destroyed) == round_half_up(percent, n)


def test_random_atoms_is_uniform():
    view = sel_view(10)
    spec = DestroySpec("sel", 1, 1, 30)
    hits = Counter()
    trials = 10_000
    for seed in range(trials):
        hits.update(a.var for a in destroy_random_atoms(view, spec, rng(seed)).destroyed)
    for v in range(1, 11):
        assert abs(hits[v] / trials - 0.30) <= 0.05
