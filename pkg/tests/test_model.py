import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from lnps.errors import ParseError
from lnps.model import (
    Problem,
    SymbolicAtom,
    evaluate_cost,
    parse_instance,
    parse_symbol,
    projected_atoms,
    serialize_instance,
)

from conftest import problems, sel_atoms

SMALL = """\
# two variables
p lnps 2 1
a 1 x(1)
a 2 x(2)
c 1 2 0
m 2 1
m 1 2
"""


def test_parse_small_instance():
    p = parse_instance(SMALL)
    assert p.num_vars == 2
    assert p.clauses == ((1, 2),)
    assert p.objective == ((2, 1), (1, 2))
    assert p.atoms == (SymbolicAtom(1, "x", (1,)), SymbolicAtom(2, "x", (2,)))


def test_parse_cycle_atom():
    p = parse_instance("p lnps 1 0\na 1 cycle(1,2)\n")
    assert p.atoms[0] == SymbolicAtom(1, "cycle", (1, 2))
    assert p.atom("cycle(1,2)").var == 1


def test_parse_symbol_terms():
    assert parse_symbol("q") == ("q", ())
    assert parse_symbol("shift(mon, -3, a_b)") == ("shift", ("mon", -3, "a_b"))
    with pytest.raises(ValueError):
        parse_symbol("Cycle(1)")
    with pytest.raises(ValueError):
        parse_symbol("f(g(1))")


@pytest.mark.parametrize(
    "text, message",
    [
        ("p lnps 2 1\nc 0\n", "empty clause"),
        ("p lnps 2 1\nc 1 3 0\n", "out of range"),
        ("p lnps 2 0\nm 0 1\n", "zero weight"),
        ("p lnps 2 0\nm -4 1\n", "negative weight"),
        ("p lnps 2 0\na 1 x(1)\na 2 x(1)\n", "duplicate atom"),
        ("p lnps 2 1\nc 1 2\n", "end with 0"),
        ("p lnps 2 2\nc 1 2 0\n", "declares 2 clauses"),
        ("c 1 2 0\n", "before 'p lnps' header"),
        ("p lnps 2 0\nz 1\n", "unknown line type"),
        ("p lnps 2 0\na 1 1x\n", "malformed"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(ParseError, match=message):
        parse_instance(text)


def test_parse_error_reports_line_number():
    with pytest.raises(ParseError) as info:
        parse_instance("p lnps 2 1\n# note\nc 0\n")
    assert info.value.line == 3


def test_objective_variable_must_be_known():
    with pytest.raises(ParseError, match="occurs in no clause"):
        parse_instance("p lnps 3 1\nc 1 2 0\nm 5 3\n")


def test_evaluate_cost_examples(two_var):
    assert evaluate_cost(two_var, [True, False]) == 2
    empty = Problem(2, ((1, 2),), (), sel_atoms(2))
    assert evaluate_cost(empty, [True, True]) == 0
    neg = Problem(1, ((1, -1),), ((3, -1),), sel_atoms(1))
    assert evaluate_cost(neg, [False]) == 3


@settings(max_examples=60, deadline=None)
@given(problems(max_vars=10))
def test_evaluate_cost_matches_per_term_sum(problem):
    for bits in itertools.product((False, True), repeat=problem.num_vars):
        expected = 0
        for w, lit in problem.objective:
            if (lit > 0 and bits[lit - 1]) or (lit < 0 and not bits[-lit - 1]):
                expected += w
        assert evaluate_cost(problem, np.array(bits)) == expected


TABLE = Problem(
    6,
    ((1, 2, 3),),
    (),
    (
        SymbolicAtom(4, "cost", (1, 2, 7)),
        SymbolicAtom(3, "cycle", (3, 1)),
        SymbolicAtom(1, "cycle", (1, 2)),
        SymbolicAtom(2, "cycle", (2, 3)),
    ),
)


def test_projected_atoms_filters_and_orders_by_var():
    got = projected_atoms(TABLE, "cycle", 2)
    assert [a.var for a in got] == [1, 2, 3]
    assert projected_atoms(TABLE, "cycle", 3) == []
    assert [a.symbol for a in projected_atoms(TABLE, "cost", 3)] == ["cost(1,2,7)"]


@settings(max_examples=80, deadline=None)
@given(problems(max_vars=12))
def test_serialize_round_trip(problem):
    again = parse_instance(serialize_instance(problem))
    assert again == problem
    assert serialize_instance(again) == serialize_instance(problem)
