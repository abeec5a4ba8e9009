"""The ``_lnps_*`` configuration fact language.

Grammar (whitespace-insensitive, ``%`` starts a line comment)::

    program   ::= { fact }
    fact      ::= name "(" term { "," term } ")" "."
    term      ::= integer | "inf" | ident | ident "(" term { "," term } ")"
    name      ::= "_lnps_project" | "_lnps_destroy" | "_lnps_prioritize"

    _lnps_project(Pred, Arity).
    _lnps_destroy(Pred, Arity, Mask, p(Percent)).
    _lnps_prioritize(Pred, Arity, Weight, Sign).     % Weight: integer >= 1 or inf

Bit ``i`` of ``Mask`` (least significant first) selects argument ``i + 1``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Union

from .errors import ConfigError

INF = math.inf

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[(),.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Func:
    name: str
    args: tuple


Term = Union[int, str, float, Func]


@dataclass(frozen=True)
class ProjectSpec:
    predicate: str
    arity: int

    @property
    def signature(self):
        return self.predicate, self.arity


@dataclass(frozen=True)
class DestroySpec:
    predicate: str
    arity: int
    arg_mask: int
    amount: int

    @property
    def signature(self):
        return self.predicate, self.arity

    @property
    def positions(self) -> tuple[int, ...]:
        """0-based argument positions selected by the mask."""
        return tuple(i for i in range(self.arity) if self.arg_mask >> i & 1)

    @property
    def full_mask(self) -> bool:
        return self.arg_mask == (1 << self.arity) - 1


@dataclass(frozen=True)
class PrioritizeSpec:
    predicate: str
    arity: int
    weight: Union[int, float]
    modifier: bool

    @property
    def signature(self):
        return self.predicate, self.arity


@dataclass(frozen=True)
class LnpsConfig:
    projects: tuple[ProjectSpec, ...]
    destroys: tuple[DestroySpec, ...] = ()
    prioritizes: tuple[PrioritizeSpec, ...] = field(default=())

    def project_signatures(self) -> set[tuple[str, int]]:
        return {p.signature for p in self.projects}

    def with_percent(self, percent: int) -> "LnpsConfig":
        if not 0 <= percent <= 100:
            raise ConfigError(f"percentage {percent} outside [0,100]")
        destroys = tuple(
            DestroySpec(d.predicate, d.arity, d.arg_mask, percent) for d in self.destroys
        )
        return LnpsConfig(self.projects, destroys, self.prioritizes)


def _tokenize(text):
    pos = 0
    line = 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ConfigError(f"line {line}: unexpected character {text[pos]!r}")
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            yield kind, value, line
        line += value.count("\n")
        pos = m.end()


class _Parser:
    def __init__(self, text):
        self.tokens = list(_tokenize(text))
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, None)

    def line(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i][2]
        return self.tokens[-1][2] if self.tokens else 1

    def expect(self, value):
        kind, tok, line = self.peek()
        if tok != value:
            raise ConfigError(f"line {self.line()}: expected {value!r}, got {tok!r}")
        self.i += 1

    def term(self) -> Term:
        kind, tok, line = self.peek()
        if kind == "int":
            self.i += 1
            return int(tok)
        if kind == "ident":
            self.i += 1
            if tok == "inf":
                return INF
            if self.peek()[1] == "(":
                return Func(tok, self.arguments())
            return tok
        raise ConfigError(f"line {self.line()}: expected a term, got {tok!r}")

    def arguments(self) -> tuple:
        self.expect("(")
        args = [self.term()]
        while self.peek()[1] == ",":
            self.i += 1
            args.append(self.term())
        self.expect(")")
        return tuple(args)

    def facts(self):
        while self.i < len(self.tokens):
            line = self.line()
            kind, tok, _ = self.peek()
            if kind != "ident":
                raise ConfigError(f"line {line}: expected a fact, got {tok!r}")
            self.i += 1
            args = self.arguments() if self.peek()[1] == "(" else ()
            self.expect(".")
            yield tok, args, line


def _ident(value, what, fact):
    if not isinstance(value, str):
        raise ConfigError(f"{fact}: {what} must be an identifier, got {value!r}")
    return value


def _count(value, what, fact):
    if not isinstance(value, int) or value < 0:
        raise ConfigError(f"{fact}: {what} must be a nonnegative integer, got {value!r}")
    return value


_ARITY = {"_lnps_project": 2, "_lnps_destroy": 4, "_lnps_prioritize": 4}


def parse_config(text: str) -> LnpsConfig:
    projects: list[ProjectSpec] = []
    destroys: list[DestroySpec] = []
    prioritizes: list[PrioritizeSpec] = []
    for name, args, line in _Parser(text).facts():
        fact = f"line {line}: {name}/{len(args)}"
        if name not in _ARITY:
            raise ConfigError(f"line {line}: unknown predicate {name!r}")
        if len(args) != _ARITY[name]:
            raise ConfigError(f"{fact}: expected arity {_ARITY[name]}")
        pred = _ident(args[0], "predicate", fact)
        arity = _count(args[1], "arity", fact)
        if name == "_lnps_project":
            projects.append(ProjectSpec(pred, arity))
        elif name == "_lnps_destroy":
            mask = args[2]
            if not isinstance(mask, int) or isinstance(mask, bool):
                raise ConfigError(f"{fact}: argument mask must be an integer")
            if mask == 0:
                raise ConfigError(f"{fact}: empty argument mask")
            if not 0 < mask <= (1 << arity) - 1:
                raise ConfigError(f"{fact}: mask {mask} out of range for arity {arity}")
            amount = args[3]
            if not (isinstance(amount, Func) and amount.name == "p" and len(amount.args) == 1
                    and isinstance(amount.args[0], int)):
                raise ConfigError(f"{fact}: amount must be p(N)")
            percent = amount.args[0]
            if not 0 <= percent <= 100:
                raise ConfigError(f"{fact}: percentage {percent} outside [0,100]")
            destroys.append(DestroySpec(pred, arity, mask, percent))
        else:
            weight = args[2]
            if weight != INF and (not isinstance(weight, int) or weight < 1):
                raise ConfigError(f"{fact}: weight must be an integer >= 1 or inf")
            sign = args[3]
            if sign not in ("true", "false"):
                raise ConfigError(f"{fact}: modifier must be true or false")
            prioritizes.append(PrioritizeSpec(pred, arity, weight, sign == "true"))
    if not projects:
        raise ConfigError("configuration declares no _lnps_project fact")
    sigs = {p.signature for p in projects}
    for spec in (*destroys, *prioritizes):
        if spec.signature not in sigs:
            kind = "_lnps_destroy" if isinstance(spec, DestroySpec) else "_lnps_prioritize"
            raise ConfigError(f"{kind}({spec.predicate},{spec.arity},...) has no matching _lnps_project")
    return LnpsConfig(tuple(projects), tuple(destroys), tuple(prioritizes))


def format_config(config: LnpsConfig) -> str:
    lines = [f"_lnps_project({p.predicate},{p.arity})." for p in config.projects]
    lines += [
        f"_lnps_destroy({d.predicate},{d.arity},{d.arg_mask},p({d.amount}))."
        for d in config.destroys
    ]
    for s in config.prioritizes:
        w = "inf" if s.weight == INF else str(s.weight)
        lines.append(f"_lnps_prioritize({s.predicate},{s.arity},{w},{'true' if s.modifier else 'false'}).")
    return "\n".join(lines) + "\n"


def read_config(path) -> LnpsConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def check_variability(config: LnpsConfig) -> bool:
    """False when some prioritization fixes atoms (plain LNS), True otherwise."""
    return not any(s.weight == INF for s in config.prioritizes)


def validate_against(config: LnpsConfig, problem) -> None:
    present = {a.signature for a in problem.atoms}
    for p in config.projects:
        if p.signature not in present:
            raise ConfigError(f"no atom of {p.predicate}/{p.arity} in the instance's atom table")
