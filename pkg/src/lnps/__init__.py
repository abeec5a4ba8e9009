"""Large Neighborhood Prioritized Search over ground minimization problems."""

from .config import LnpsConfig, check_variability, parse_config
from .engine import AcceptPolicy, EngineParams, Outcome, run
from .model import Problem, Solution, SymbolicAtom, evaluate_cost, parse_instance
from .solver import Budget, Directive, SolveResult, Status, new_session

__version__ = "0.1.0"

__all__ = [
    "AcceptPolicy",
    "Budget",
    "Directive",
    "EngineParams",
    "LnpsConfig",
    "Outcome",
    "Problem",
    "Solution",
    "SolveResult",
    "Status",
    "SymbolicAtom",
    "check_variability",
    "evaluate_cost",
    "new_session",
    "parse_config",
    "parse_instance",
    "run",
]
