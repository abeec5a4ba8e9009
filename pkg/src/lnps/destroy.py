"""Destroy operators: split a solution's true projected atoms into a
destroyed part and an undestroyed part."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DestroySpec, LnpsConfig
from .errors import ConfigError
from .model import Problem, Solution, SymbolicAtom

OPERATORS = ("auto", "atoms", "constants")


@dataclass(frozen=True)
class ProjectionView:
    atoms: tuple[SymbolicAtom, ...]


@dataclass(frozen=True)
class DestroyOutcome:
    destroyed: frozenset[SymbolicAtom]
    undestroyed: frozenset[SymbolicAtom]


def round_half_up(percent: int, count: int) -> int:
    """``round(percent * count / 100)`` with halves rounded up, in exact integers."""
    return (2 * percent * count + 100) // 200


def projection_view(problem: Problem, config: LnpsConfig, solution: Solution) -> ProjectionView:
    sigs = config.project_signatures()
    atoms = tuple(
        a for a in problem.atoms if a.signature in sigs and solution.value(a.var)
    )
    return ProjectionView(tuple(sorted(atoms, key=lambda a: a.var)))


def _split(view: ProjectionView, destroyed) -> DestroyOutcome:
    destroyed = frozenset(destroyed)
    return DestroyOutcome(destroyed, frozenset(a for a in view.atoms if a not in destroyed))


def destroy_random_atoms(view: ProjectionView, spec: DestroySpec,
                         rng: np.random.Generator) -> DestroyOutcome:
    atoms = view.atoms
    k = round_half_up(spec.amount, len(atoms))
    picked = rng.choice(len(atoms), size=k, replace=False) if k else ()
    return _split(view, (atoms[i] for i in picked))


def destroy_random_constants(view: ProjectionView, spec: DestroySpec,
                             rng: np.random.Generator) -> DestroyOutcome:
    positions = [i for i in spec.positions if i < spec.arity]
    if not positions:
        raise ConfigError("random-constants destruction needs at least one selected argument")
    constants = list(dict.fromkeys(a.args[i] for a in view.atoms for i in positions))
    k = round_half_up(spec.amount, len(constants))
    picked = rng.choice(len(constants), size=k, replace=False) if k else ()
    sample = {constants[i] for i in picked}
    return _split(view, (a for a in view.atoms if any(a.args[i] in sample for i in positions)))


def partition_check(outcome: DestroyOutcome, view: ProjectionView) -> bool:
    everything = set(view.atoms)
    return (
        not (outcome.destroyed & outcome.undestroyed)
        and (outcome.destroyed | outcome.undestroyed) == everything
    )


def select_operator(spec: DestroySpec, operator: str = "auto"):
    if operator not in OPERATORS:
        raise ConfigError(f"unknown destroy operator {operator!r}")
    if operator == "constants" or (operator == "auto" and not spec.full_mask):
        return destroy_random_constants
    if not spec.full_mask:
        raise ConfigError(
            f"random-atoms destruction needs the full mask for {spec.predicate}/{spec.arity}"
        )
    return destroy_random_atoms


def destroy(view: ProjectionView, destroys: Sequence[DestroySpec],
            rng: np.random.Generator, operator: str = "auto") -> DestroyOutcome:
    """Apply every destroy spec to its own predicate's atoms; union the destroyed parts."""
    destroyed: set[SymbolicAtom] = set()
    for spec in destroys:
        sub = ProjectionView(tuple(a for a in view.atoms if a.signature == spec.signature))
        destroyed |= select_operator(spec, operator)(sub, spec, rng).destroyed
    return _split(view, destroyed)
