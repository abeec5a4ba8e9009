"""Ground problems: clauses, a linear objective and a symbolic atom table.

Instance files are line oriented::

    # comment
    p lnps <num_vars> <num_clauses>
    a <var> <symbol>            e.g.  a 3 cycle(1,2)
    c <lit> ... <lit> 0
    m <weight> <lit>

Literals are signed variable ids.  Weights are positive integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import ParseError

Term = Union[int, str]

_IDENT = r"[a-z_][A-Za-z0-9_']*"
_SYMBOL_RE = re.compile(rf"^({_IDENT})(?:\((.*)\))?$")
_TERM_RE = re.compile(rf"^(?:-?\d+|{_IDENT})$")


@dataclass(frozen=True)
class SymbolicAtom:
    var: int
    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def signature(self) -> tuple[str, int]:
        return self.predicate, len(self.args)

    @property
    def symbol(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(a) for a in self.args)})"

    def __str__(self) -> str:
        return self.symbol


def parse_symbol(text: str) -> tuple[str, tuple[Term, ...]]:
    """Split ``p(c1,...,cn)`` into its predicate and ground terms."""
    m = _SYMBOL_RE.match(text.strip())
    if m is None:
        raise ValueError(f"malformed symbol {text!r}")
    name, inner = m.group(1), m.group(2)
    if inner is None:
        return name, ()
    args: list[Term] = []
    for raw in inner.split(","):
        raw = raw.strip()
        if not _TERM_RE.match(raw):
            raise ValueError(f"malformed term {raw!r} in symbol {text!r}")
        args.append(int(raw) if raw.lstrip("-").isdigit() else raw)
    return name, tuple(args)


@dataclass(frozen=True)
class Problem:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    objective: tuple[tuple[int, int], ...]
    atoms: tuple[SymbolicAtom, ...] = ()

    def __post_init__(self):
        n = self.num_vars
        if n < 0:
            raise ValueError("num_vars must be nonnegative")
        for clause in self.clauses:
            if not clause:
                raise ValueError("empty clause")
            for lit in clause:
                if lit == 0 or abs(lit) > n:
                    raise ValueError(f"literal {lit} out of range 1..{n}")
        for w, lit in self.objective:
            if w <= 0:
                raise ValueError(f"objective weight must be positive, got {w}")
            if lit == 0 or abs(lit) > n:
                raise ValueError(f"objective literal {lit} out of range 1..{n}")
        seen_vars = set()
        seen_syms = set()
        for atom in self.atoms:
            if not 1 <= atom.var <= n:
                raise ValueError(f"atom {atom.symbol} bound to out-of-range variable {atom.var}")
            if atom.var in seen_vars:
                raise ValueError(f"variable {atom.var} bound to two atoms")
            if (atom.predicate, atom.args) in seen_syms:
                raise ValueError(f"duplicate atom symbol {atom.symbol}")
            seen_vars.add(atom.var)
            seen_syms.add((atom.predicate, atom.args))
        known = {abs(l) for c in self.clauses for l in c} | seen_vars
        for _, lit in self.objective:
            if abs(lit) not in known:
                raise ValueError(f"objective variable {abs(lit)} occurs in no clause and no atom")

    @cached_property
    def atom_by_var(self) -> dict[int, SymbolicAtom]:
        return {a.var: a for a in self.atoms}

    @cached_property
    def atom_by_symbol(self) -> dict[str, SymbolicAtom]:
        return {a.symbol: a for a in self.atoms}

    def atom(self, symbol: str) -> SymbolicAtom:
        return self.atom_by_symbol[symbol]


@dataclass(frozen=True, eq=False)
class Solution:
    """A total assignment (index ``v - 1`` holds variable ``v``) and its cost."""

    assignment: np.ndarray
    cost: int

    def value(self, var: int) -> bool:
        return bool(self.assignment[var - 1])

    def holds(self, lit: int) -> bool:
        return self.value(abs(lit)) == (lit > 0)

    def true_vars(self) -> frozenset[int]:
        return frozenset(int(i) + 1 for i in np.flatnonzero(self.assignment))

    def __eq__(self, other):
        if not isinstance(other, Solution):
            return NotImplemented
        return self.cost == other.cost and np.array_equal(self.assignment, other.assignment)

    __hash__ = None


def evaluate_cost(problem: Problem, assignment) -> int:
    """Sum of weights of objective terms whose literal is true.  Feasibility is not checked."""
    a = np.asarray(assignment, dtype=bool)
    total = 0
    for w, lit in problem.objective:
        if a[abs(lit) - 1] == (lit > 0):
            total += w
    return total


def is_feasible(problem: Problem, assignment) -> bool:
    a = np.asarray(assignment, dtype=bool)
    return all(any(a[abs(l) - 1] == (l > 0) for l in c) for c in problem.clauses)


def projected_atoms(problem: Problem, predicate: str, arity: int) -> list[SymbolicAtom]:
    return sorted(
        (a for a in problem.atoms if a.predicate == predicate and a.arity == arity),
        key=lambda a: a.var,
    )


def _ints(tokens: Sequence[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def parse_instance(text: str) -> Problem:
    header = None
    atoms: list[SymbolicAtom] = []
    clauses: list[tuple[int, ...]] = []
    objective: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        kind, _, rest = line.partition(" ")
        rest = rest.strip()
        if kind == "p":
            if header is not None:
                raise ParseError("duplicate header", lineno)
            parts = rest.split()
            if len(parts) != 3 or parts[0] != "lnps":
                raise ParseError("header must read 'p lnps <num_vars> <num_clauses>'", lineno)
            header = tuple(_ints(parts[1:], lineno))
            if min(header) < 0:
                raise ParseError("negative count in header", lineno)
            continue
        if header is None:
            raise ParseError("content before 'p lnps' header", lineno)
        n = header[0]
        if kind == "a":
            var_text, _, sym = rest.partition(" ")
            (var,) = _ints([var_text], lineno)
            try:
                pred, args = parse_symbol(sym)
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            if not 1 <= var <= n:
                raise ParseError(f"atom variable {var} out of range 1..{n}", lineno)
            atoms.append(SymbolicAtom(var, pred, args))
        elif kind == "c":
            lits = _ints(rest.split(), lineno)
            if not lits or lits[-1] != 0:
                raise ParseError("clause must end with 0", lineno)
            lits = lits[:-1]
            if not lits:
                raise ParseError("empty clause", lineno)
            for lit in lits:
                if lit == 0 or abs(lit) > n:
                    raise ParseError(f"literal {lit} out of range", lineno)
            clauses.append(tuple(lits))
        elif kind == "m":
            vals = _ints(rest.split(), lineno)
            if len(vals) != 2:
                raise ParseError("objective line must read 'm <weight> <lit>'", lineno)
            w, lit = vals
            if w == 0:
                raise ParseError("zero weight", lineno)
            if w < 0:
                raise ParseError("negative weight", lineno)
            if lit == 0 or abs(lit) > n:
                raise ParseError(f"literal {lit} out of range", lineno)
            objective.append((w, lit))
        else:
            raise ParseError(f"unknown line type {kind!r}", lineno)
    if header is None:
        raise ParseError("missing 'p lnps' header")
    if len(clauses) != header[1]:
        raise ParseError(f"header declares {header[1]} clauses, found {len(clauses)}")
    seen: dict[tuple, int] = {}
    for atom in atoms:
        key = (atom.predicate, atom.args)
        if key in seen:
            raise ParseError(f"duplicate atom symbol {atom.symbol}")
        seen[key] = atom.var
    try:
        return Problem(header[0], tuple(clauses), tuple(objective), tuple(atoms))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_instance(problem: Problem) -> str:
    lines = [f"p lnps {problem.num_vars} {len(problem.clauses)}"]
    lines += [f"a {a.var} {a.symbol}" for a in problem.atoms]
    lines += ["c " + " ".join(str(l) for l in c) + " 0" for c in problem.clauses]
    lines += [f"m {w} {lit}" for w, lit in problem.objective]
    return "\n".join(lines) + "\n"


def read_instance(path) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def write_instance(problem: Problem, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(problem))


def atoms_from(symbols: Iterable[str]) -> tuple[SymbolicAtom, ...]:
    """Bind symbols to variables 1, 2, ... in order."""
    out = []
    for i, sym in enumerate(symbols, start=1):
        pred, args = parse_symbol(sym)
        out.append(SymbolicAtom(i, pred, args))
    return tuple(out)
