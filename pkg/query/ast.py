"""
Query AST
=========
Formulas, descriptions, interventions and statements of the query language.

Numbers are kept as Fractions so decimal literals such as 0.6 compare
exactly with computed rates. A Hole marks an unknown slot (n, d, p) the
engine is asked to solve.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Optional, Tuple, Union

from model.guards import FluentRef

HORIZON = "k"

Step = Union[int, str]


@dataclass(frozen=True)
class Hole:
    """An unknown value slot"""
    name: str

    def __str__(self) -> str:
        return self.name


Value = Union[Fraction, Hole]


class Aggregate(Enum):
    """Aggregate operators over trajectory sets"""
    MIN = "minimum"
    MAX = "maximum"
    AVG = "average"


class Direction(Enum):
    """Direction of change of the modified value relative to the nominal one"""
    LT = "<"
    GT = ">"
    EQ = "="

    @classmethod
    def between(cls, modified: Fraction, nominal: Fraction) -> "Direction":
        if modified < nominal:
            return cls.LT
        if modified > nominal:
            return cls.GT
        return cls.EQ

    def holds(self, left: Fraction, right: Fraction) -> bool:
        return Direction.between(left, right) is self

    def flipped(self) -> "Direction":
        return {Direction.LT: Direction.GT, Direction.GT: Direction.LT}.get(self, self)


class Measure(Enum):
    RATE_OF_PRODUCTION = "rate of production"
    RATE_OF_FIRING = "rate of firing"
    TOTAL_PRODUCTION = "total production"
    VALUE = "value"

    @property
    def is_interval(self) -> bool:
        return self is not Measure.VALUE


class Relation(Enum):
    """Comparison used by value-of point formulas"""
    EQ = "is"
    HIGHER = "is higher than"
    LOWER = "is lower than"


@dataclass(frozen=True)
class Quantity:
    """A measured quantity; the target is an action id for RATE_OF_FIRING"""
    measure: Measure
    target: Union[FluentRef, str]

    @property
    def is_interval(self) -> bool:
        return self.measure.is_interval


# Simple formulas

@dataclass(frozen=True)
class QuantitativeFormula:
    quantity: Quantity
    value: Value
    relation: Relation = Relation.EQ

    @property
    def is_interval(self) -> bool:
        return self.quantity.is_interval


@dataclass(frozen=True)
class Accumulating:
    ref: FluentRef
    is_interval = True


@dataclass(frozen=True)
class Decreasing:
    ref: FluentRef
    is_interval = True


@dataclass(frozen=True)
class Occurs:
    action: str
    is_interval = False


@dataclass(frozen=True)
class DoesNotOccur:
    action: str
    is_interval = False


@dataclass(frozen=True)
class SwitchesTo:
    first: str
    second: str
    is_interval = False


SimpleFormula = Union[QuantitativeFormula, Accumulating, Decreasing, Occurs, DoesNotOccur, SwitchesTo]
PointFormula = Union[QuantitativeFormula, Occurs, DoesNotOccur, SwitchesTo]


# Trajectory-set formulas

@dataclass(frozen=True)
class AllFormula:
    """rates/values/totals of ... are [r1, ..., rm]; values pair with trajectories in canonical order"""
    quantity: Quantity
    values: Union[Tuple[Fraction, ...], Hole]

    @property
    def is_interval(self) -> bool:
        return self.quantity.is_interval


@dataclass(frozen=True)
class AggregateFormula:
    aggregate: Aggregate
    quantity: Quantity
    value: Value

    @property
    def is_interval(self) -> bool:
        return self.quantity.is_interval


@dataclass(frozen=True)
class ComparativeFormula:
    aggregate: Aggregate
    quantity: Quantity
    direction: Union[Direction, Hole]

    @property
    def is_interval(self) -> bool:
        return self.quantity.is_interval


# Cascades

@dataclass(frozen=True)
class AfterCascade:
    """
    head after g1 ... after gu: every formula of g1 holds at one point
    strictly before the head's point, g2 strictly before that, and so on.
    """
    head: PointFormula
    chain: Tuple[Tuple[PointFormula, ...], ...]
    is_interval = False


@dataclass(frozen=True)
class WhenCascade:
    """head when c1, ..., cn: all hold at the same point"""
    head: PointFormula
    conditions: Tuple[PointFormula, ...]
    is_interval = False


@dataclass(frozen=True)
class Explanation:
    """head when p: p is the unknown condition to explain"""
    head: PointFormula
    hole: Hole
    is_interval = False


Cascade = Union[AfterCascade, WhenCascade, Explanation]
Formula = Union[SimpleFormula, AllFormula, AggregateFormula, ComparativeFormula, Cascade]


# Anchors

@dataclass(frozen=True)
class Interval:
    start: Step = 0
    end: Step = HORIZON


@dataclass(frozen=True)
class Point:
    step: Step


def resolve_step(step: Step, k: int) -> int:
    """Integer time step, with the horizon symbol standing for k."""
    i = k if step == HORIZON else int(step)
    if not 0 <= i <= k:
        raise ValueError(f"Must use time steps within 0..{k}, got {i}")
    return i


@dataclass(frozen=True)
class Observation:
    """A formula with its optional interval or point anchor"""
    formula: Formula
    interval: Optional[Interval] = None
    point: Optional[Point] = None

    def span(self, k: int) -> Tuple[int, int]:
        """The anchored interval, defaulting to [0, k]"""
        interval = self.interval or Interval()
        return resolve_step(interval.start, k), resolve_step(interval.end, k)


@dataclass(frozen=True)
class Description(Observation):
    """The query description: an observation that may quantify over all trajectories"""
    all_trajectories: bool = False


# Interventions

@dataclass(frozen=True)
class RemoveAsProduced:
    ref: FluentRef


@dataclass(frozen=True)
class Disable:
    action: str


@dataclass(frozen=True)
class Transform:
    source: FluentRef
    quantity: int
    target: FluentRef


@dataclass(frozen=True)
class MakeInhibit:
    ref: FluentRef
    action: str


@dataclass(frozen=True)
class Supply:
    ref: FluentRef
    quantity: int


@dataclass(frozen=True)
class Transfer:
    fluent: str
    quantity: int
    first: str
    second: str


@dataclass(frozen=True)
class AddDelay:
    quantity: int
    ref: FluentRef


@dataclass(frozen=True)
class SetValue:
    ref: FluentRef
    value: int


Intervention = Union[RemoveAsProduced, Disable, Transform, MakeInhibit, Supply, Transfer, AddDelay, SetValue]
INITIAL_CONDITIONS = (Supply, SetValue)


@dataclass(frozen=True)
class QueryStatement:
    description: Description
    interventions: Tuple[Intervention, ...] = ()
    observations: Tuple[Observation, ...] = ()
    initial_setup: Tuple[Intervention, ...] = ()

    @property
    def is_comparative(self) -> bool:
        return isinstance(self.description.formula, ComparativeFormula)

    def holes(self) -> Tuple[Hole, ...]:
        return tuple(formula_holes(self.description.formula))


def formula_holes(formula: Formula) -> Iterator[Hole]:
    if isinstance(formula, QuantitativeFormula) and isinstance(formula.value, Hole):
        yield formula.value
    elif isinstance(formula, AggregateFormula) and isinstance(formula.value, Hole):
        yield formula.value
    elif isinstance(formula, AllFormula) and isinstance(formula.values, Hole):
        yield formula.values
    elif isinstance(formula, ComparativeFormula) and isinstance(formula.direction, Hole):
        yield formula.direction
    elif isinstance(formula, Explanation):
        yield formula.hole
