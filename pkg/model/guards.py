"""
Guards
======
Propositional formulas over fluent-value conditions. A guard gates a
transition (TG) or an individual arc, and is evaluated against a marking.
"""

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .errors import UnknownFluent
from .multiset import DEFAULT_COLOR, Marking


class ConditionKind(Enum):
    """Comparison operators allowed in a condition"""
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    EQ = "="

    def holds(self, left: int, right: int) -> bool:
        if self is ConditionKind.LT:
            return left < right
        if self is ConditionKind.LE:
            return left <= right
        if self is ConditionKind.GT:
            return left > right
        if self is ConditionKind.GE:
            return left >= right
        return left == right


@dataclass(frozen=True)
class FluentRef:
    """A fluent, optionally at a location"""
    fluent: str
    location: Optional[str] = None

    @property
    def is_locational(self) -> bool:
        return self.location is not None

    @property
    def place(self) -> str:
        return self.location if self.location is not None else self.fluent

    @property
    def color(self) -> str:
        return self.fluent if self.location is not None else DEFAULT_COLOR

    def __str__(self) -> str:
        return f"{self.fluent}@{self.location}" if self.location else self.fluent


def ref_key(ref: FluentRef) -> Tuple[str, str]:
    return (ref.fluent, ref.location or "")


Operand = Union[int, FluentRef]


@dataclass(frozen=True)
class Condition:
    """lhs <kind> rhs, where rhs is a constant or another fluent"""
    kind: ConditionKind
    lhs: FluentRef
    rhs: Operand

    def refs(self) -> Tuple[FluentRef, ...]:
        if isinstance(self.rhs, FluentRef):
            return (self.lhs, self.rhs)
        return (self.lhs,)

    def __str__(self) -> str:
        return f"{self.lhs} {self.kind.value} {self.rhs}"


class Guard:
    """Base class of guard formula nodes"""

    def evaluate(self, lookup: Callable[[FluentRef], int]) -> bool:
        raise NotImplementedError

    def conditions(self) -> List[Condition]:
        return []

    def refs(self) -> Set[FluentRef]:
        return {r for c in self.conditions() for r in c.refs()}


@dataclass(frozen=True)
class TrueGuard(Guard):
    def evaluate(self, lookup: Callable[[FluentRef], int]) -> bool:
        return True

    def __str__(self) -> str:
        return "true"


TRUE = TrueGuard()


@dataclass(frozen=True)
class Atom(Guard):
    condition: Condition

    def evaluate(self, lookup: Callable[[FluentRef], int]) -> bool:
        c = self.condition
        right = lookup(c.rhs) if isinstance(c.rhs, FluentRef) else c.rhs
        return c.kind.holds(lookup(c.lhs), right)

    def conditions(self) -> List[Condition]:
        return [self.condition]

    def __str__(self) -> str:
        return str(self.condition)


@dataclass(frozen=True)
class Not(Guard):
    operand: Guard

    def evaluate(self, lookup: Callable[[FluentRef], int]) -> bool:
        return not self.operand.evaluate(lookup)

    def conditions(self) -> List[Condition]:
        return self.operand.conditions()

    def __str__(self) -> str:
        return f"not ({self.operand})"


@dataclass(frozen=True)
class And(Guard):
    parts: Tuple[Guard, ...]

    def evaluate(self, lookup: Callable[[FluentRef], int]) -> bool:
        return all(p.evaluate(lookup) for p in self.parts)

    def conditions(self) -> List[Condition]:
        return [c for p in self.parts for c in p.conditions()]

    def __str__(self) -> str:
        return " and ".join(f"({p})" if isinstance(p, Or) else str(p) for p in self.parts)


@dataclass(frozen=True)
class Or(Guard):
    parts: Tuple[Guard, ...]

    def evaluate(self, lookup: Callable[[FluentRef], int]) -> bool:
        return any(p.evaluate(lookup) for p in self.parts)

    def conditions(self) -> List[Condition]:
        return [c for p in self.parts for c in p.conditions()]

    def __str__(self) -> str:
        return " or ".join(f"({p})" if isinstance(p, And) else str(p) for p in self.parts)


def atom(kind: ConditionKind, lhs: FluentRef, rhs: Operand) -> Atom:
    return Atom(Condition(kind, lhs, rhs))


def conj(*guards: Guard) -> Guard:
    """AND of the given guards, flattened, with TRUE dropped."""
    parts: List[Guard] = []
    for g in guards:
        if isinstance(g, TrueGuard):
            continue
        parts.extend(g.parts if isinstance(g, And) else [g])
    if not parts:
        return TRUE
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def disj(*guards: Guard) -> Guard:
    """OR of the given guards; any TRUE disjunct makes the result TRUE."""
    parts: List[Guard] = []
    for g in guards:
        if isinstance(g, TrueGuard):
            return TRUE
        parts.extend(g.parts if isinstance(g, Or) else [g])
    if not parts:
        return Not(TRUE)
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


def is_locational(guard: Guard) -> Optional[bool]:
    """True/False when uniform, None for a guard without conditions."""
    kinds = {r.is_locational for r in guard.refs()}
    if not kinds:
        return None
    if len(kinds) > 1:
        raise ValueError(f"Must not mix locational and simple fluents in guard '{guard}'")
    return kinds.pop()


def marking_lookup(marking: Marking) -> Callable[[FluentRef], int]:
    """Value of a fluent in a marking: the multiplicity of its color at its place."""

    def lookup(ref: FluentRef) -> int:
        if ref.place not in marking:
            raise UnknownFluent(f"No place '{ref.place}' for fluent '{ref}'")
        if ref.color not in marking.colors:
            raise UnknownFluent(f"No color '{ref.color}' for fluent '{ref}'")
        return marking[ref.place][ref.color]

    return lookup


def guard_satisfied(guard: Guard, marking: Marking) -> bool:
    """
    Evaluate a guard under the valuation induced by a marking.

    Raises:
        UnknownFluent: if a referenced fluent resolves to no place/color
    """
    return guard.evaluate(marking_lookup(marking))


def _candidate_values(guards: Sequence[Guard], refs: Sequence[FluentRef], bound: int) -> Dict[FluentRef, List[int]]:
    conditions = [c for g in guards for c in g.conditions()]
    if any(isinstance(c.rhs, FluentRef) for c in conditions):
        return {r: list(range(bound + 1)) for r in refs}
    points: Dict[FluentRef, Set[int]] = {r: {0, bound} for r in refs}
    for c in conditions:
        for v in (c.rhs - 1, c.rhs, c.rhs + 1):
            if 0 <= v <= bound:
                points[c.lhs].add(v)
    return {r: sorted(vs) for r, vs in points.items()}


def find_model(guards: Iterable[Guard], bound: int) -> Optional[Dict[FluentRef, int]]:
    """
    Search fluent values 0..bound for a valuation satisfying every guard.

    Constant-only conditions have piecewise-constant truth, so only the
    boundary values around each constant are tried; comparisons between
    fluents fall back to the full range.

    Returns:
        A satisfying valuation, or None if the guards are jointly unsatisfiable
    """
    guards = list(guards)
    refs = sorted({r for g in guards for r in g.refs()}, key=ref_key)
    values = _candidate_values(guards, refs, bound)
    for combo in itertools.product(*(values[r] for r in refs)):
        valuation = dict(zip(refs, combo))
        if all(g.evaluate(valuation.__getitem__) for g in guards):
            return valuation
    return None
