"""Per-step heuristic atoms, their compilation to solver directives, and the
step registry that activates one step's directives at a time."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .config import INF, LnpsConfig
from .errors import ConfigError, UsageError
from .model import SymbolicAtom
from .solver import Directive


@dataclass(frozen=True)
class HeuristicAtom:
    atom: SymbolicAtom
    weight: Union[int, float]
    modifier: bool
    step: int

    def __str__(self):
        w = "inf" if self.weight == INF else self.weight
        return f"heuristic({self.atom.symbol},{w},{str(self.modifier).lower()},{self.step})"


@dataclass(frozen=True)
class DirectiveSet:
    directives: tuple[Directive, ...]
    fixing_assumptions: tuple[int, ...]
    step: int


def prioritize(undestroyed: Iterable[SymbolicAtom], config: LnpsConfig,
               step: int) -> list[HeuristicAtom]:
    if step < 1:
        raise UsageError("steps are numbered from 1")
    out = []
    for atom in sorted(undestroyed, key=lambda a: a.var):
        for spec in config.prioritizes:
            if spec.signature == atom.signature:
                out.append(HeuristicAtom(atom, spec.weight, spec.modifier, step))
    return out


def compile_directives(heuristic_atoms: Iterable[HeuristicAtom]) -> DirectiveSet:
    heuristic_atoms = list(heuristic_atoms)
    steps = {h.step for h in heuristic_atoms}
    if len(steps) > 1:
        raise UsageError(f"heuristic atoms from several steps: {sorted(steps)}")
    step = steps.pop() if steps else 0

    fixed: dict[int, bool] = {}
    best: dict[int, tuple] = {}
    for h in heuristic_atoms:
        var = h.atom.var
        if h.weight == INF:
            if var in fixed and fixed[var] != h.modifier:
                raise ConfigError(f"contradictory fixing of {h.atom.symbol}")
            fixed[var] = h.modifier
        elif var not in best or h.weight >= best[var][0]:
            best[var] = (h.weight, h.modifier)

    directives = tuple(
        Directive(var, level, sign) for var, (level, sign) in best.items() if var not in fixed
    )
    assumptions = tuple(var if sign else -var for var, sign in fixed.items())
    return DirectiveSet(directives, assumptions, step)


class StepRegistry:
    """At most one live step; retiring it makes its directives inert."""

    def __init__(self):
        self._live: Optional[DirectiveSet] = None

    @property
    def live_step(self) -> Optional[int]:
        return None if self._live is None else self._live.step

    def install(self, step: int, directive_set: DirectiveSet) -> None:
        if self._live is not None:
            raise UsageError(f"step {self._live.step} is still live; retire it before installing {step}")
        if directive_set.step not in (0, step):
            raise UsageError(f"directive set belongs to step {directive_set.step}, not {step}")
        self._live = DirectiveSet(directive_set.directives, directive_set.fixing_assumptions, step)

    def retire(self, step: int) -> None:
        if self._live is None or self._live.step != step:
            raise UsageError(f"step {step} is not live")
        self._live = None

    def directives(self) -> tuple[Directive, ...]:
        return () if self._live is None else self._live.directives

    def assumptions(self) -> tuple[int, ...]:
        return () if self._live is None else self._live.fixing_assumptions
