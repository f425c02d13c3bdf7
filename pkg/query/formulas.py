"""
Formula Semantics
=================
Truth and value of query formulas on single trajectories, trajectory
filtering by observations, and the per-trajectory value vectors behind
aggregates.

Interval quantities are exact Fractions. Point formulas read the firing
set T_i of the step, so an action fired in state s_i is observable there.
"""

import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Union

import numpy as np

from model.errors import DegenerateInterval
from model.guards import Condition, ConditionKind, FluentRef
from model.multiset import Marking
from simulation.trajectories import Trajectory

from .ast import (
    Accumulating,
    AfterCascade,
    Aggregate,
    Decreasing,
    DoesNotOccur,
    Explanation,
    Formula,
    Hole,
    Measure,
    Observation,
    Occurs,
    PointFormula,
    QuantitativeFormula,
    Quantity,
    Relation,
    SwitchesTo,
    WhenCascade,
    resolve_step,
)

logger = logging.getLogger(__name__)

CASCADES = (AfterCascade, WhenCascade, Explanation)

_KIND_ORDER = {ConditionKind.GT: 0, ConditionKind.EQ: 1, ConditionKind.LT: 2}

_TERMINATING_LIMIT = 30


def format_number(x: Union[int, Fraction], places: Optional[int] = 6) -> str:
    """
    Shortest decimal for a rational, rounded to at most `places` digits.

    With places=None, terminating decimals are written exactly and anything
    else falls back to 6 digits.

    Examples:
        format_number(Fraction(3, 5)) -> '0.6'
        format_number(Fraction(1)) -> '1'
        format_number(Fraction(1, 3)) -> '0.333333'
    """
    x = Fraction(x)
    if places is None:
        places = 0
        while (x * 10 ** places).denominator != 1 and places < _TERMINATING_LIMIT:
            places += 1
        if (x * 10 ** places).denominator != 1:
            places = 6
    if places < 0:
        raise ValueError(f"Must use places >= 0, got {places}")
    scaled = round(x * 10 ** places)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10 ** places)
    digits = str(frac).rjust(places, "0").rstrip("0") if places else ""
    return f"{sign}{whole}.{digits}" if digits else f"{sign}{whole}"


def check_interval(i: int, j: int) -> None:
    if i >= j:
        raise DegenerateInterval(f"Must observe an interval with start before end, got [{i}, {j}]")


def firing_count(traj: Trajectory, action: str, i: int, j: int) -> int:
    """Occurrences of action over steps i..j-1"""
    return sum(1 for step in range(i, j) if action in traj.fired_at(step))


def quantity_value(traj: Trajectory, quantity: Quantity, i: int, j: Optional[int] = None) -> Fraction:
    """
    Value of a quantity on one trajectory.

    VALUE reads s_i; interval measures use [i, j]:
        rate of production  (s_j(f) - s_i(f)) / (j - i)
        total production    s_j(f) - s_i(f)
        rate of firing      occurrences over i..j-1, divided by (j - i)

    Raises:
        DegenerateInterval: if i >= j for an interval measure
    """
    if quantity.measure is Measure.VALUE:
        return Fraction(traj.value(i, quantity.target))
    if j is None:
        raise ValueError("Must give an interval end for an interval measure")
    check_interval(i, j)
    if quantity.measure is Measure.RATE_OF_FIRING:
        return Fraction(firing_count(traj, quantity.target, i, j), j - i)
    produced = traj.value(j, quantity.target) - traj.value(i, quantity.target)
    if quantity.measure is Measure.TOTAL_PRODUCTION:
        return Fraction(produced)
    return Fraction(produced, j - i)


def _literal(value) -> Fraction:
    if isinstance(value, Hole):
        raise ValueError(f"Must give a number in place of '{value.name}' here")
    return value


def point_holds(traj: Trajectory, formula: PointFormula, i: int) -> bool:
    """Truth of a point formula at step i."""
    if isinstance(formula, QuantitativeFormula):
        current = quantity_value(traj, formula.quantity, i)
        expected = _literal(formula.value)
        if formula.relation is Relation.HIGHER:
            return current > expected
        if formula.relation is Relation.LOWER:
            return current < expected
        return current == expected
    if isinstance(formula, Occurs):
        return formula.action in traj.fired_at(i)
    if isinstance(formula, DoesNotOccur):
        return formula.action not in traj.fired_at(i)
    if isinstance(formula, SwitchesTo):
        if i < 1:
            return False
        before, now = traj.fired_at(i - 1), traj.fired_at(i)
        return (formula.first in before and formula.second not in before
                and formula.first not in now and formula.second in now)
    raise TypeError(f"Not a point formula: {formula!r}")


def _monotone(values: Sequence[int], rising: bool) -> bool:
    steps = np.diff(np.asarray(values, dtype=np.int64))
    if rising:
        return not (steps < 0).any() and values[-1] > values[0]
    return not (steps > 0).any() and values[-1] < values[0]


def interval_holds(traj: Trajectory, formula: Formula, i: int, j: int) -> bool:
    """Truth of an interval formula over [i, j]."""
    check_interval(i, j)
    if isinstance(formula, QuantitativeFormula):
        return quantity_value(traj, formula.quantity, i, j) == _literal(formula.value)
    if isinstance(formula, (Accumulating, Decreasing)):
        values = [traj.value(step, formula.ref) for step in range(i, j + 1)]
        return _monotone(values, rising=isinstance(formula, Accumulating))
    raise TypeError(f"Not an interval formula: {formula!r}")


def _after_points(traj: Trajectory, cascade: AfterCascade, i: int) -> bool:
    """Each group of the chain holds at some point strictly before the previous one."""
    bound = i
    for group in cascade.chain:
        found = None
        for step in range(bound - 1, -1, -1):
            if all(point_holds(traj, f, step) for f in group):
                found = step
                break
        if found is None:
            return False
        bound = found
    return True


def cascade_points(traj: Trajectory, cascade: Formula) -> List[int]:
    """Steps at which a cascade's head holds together with its conditions."""
    points = []
    for i in range(traj.k + 1):
        if not point_holds(traj, cascade.head, i):
            continue
        if isinstance(cascade, WhenCascade) and not all(point_holds(traj, f, i) for f in cascade.conditions):
            continue
        if isinstance(cascade, AfterCascade) and not _after_points(traj, cascade, i):
            continue
        points.append(i)
    return points


def observation_holds(traj: Trajectory, obs: Observation) -> bool:
    """
    Whether a trajectory satisfies an observation.

    Interval formulas use the anchored interval or [0, k]. Point formulas
    at an anchored point are checked there; otherwise they must hold at
    some step, except `does not occur`, which must hold at every step.
    """
    formula, k = obs.formula, traj.k
    if isinstance(formula, CASCADES):
        points = cascade_points(traj, formula)
        if obs.point is not None:
            return resolve_step(obs.point.step, k) in points
        return bool(points)
    if formula.is_interval:
        i, j = obs.span(k)
        return interval_holds(traj, formula, i, j)
    if obs.point is not None:
        return point_holds(traj, formula, resolve_step(obs.point.step, k))
    steps = range(k + 1)
    if isinstance(formula, DoesNotOccur):
        return all(point_holds(traj, formula, i) for i in steps)
    return any(point_holds(traj, formula, i) for i in steps)


def filter_trajectories(trajs: Iterable[Trajectory], observations: Sequence[Observation]) -> List[Trajectory]:
    """Keep exactly the trajectories satisfying every observation."""
    trajs = list(trajs)
    kept = [t for t in trajs if all(observation_holds(t, o) for o in observations)]
    if observations:
        logger.debug("Observations kept %d of %d trajectories", len(kept), len(trajs))
    return kept


def value_matrix(trajs: Sequence[Trajectory], refs: Sequence[FluentRef]) -> np.ndarray:
    """Values as an array of shape (trajectories, steps, refs)."""
    if not trajs:
        return np.zeros((0, 0, len(refs)), dtype=np.int64)
    return np.array([[[t.value(i, r) for r in refs] for i in range(t.k + 1)] for t in trajs], dtype=np.int64)


def firing_matrix(trajs: Sequence[Trajectory], action: str) -> np.ndarray:
    """Boolean array of shape (trajectories, steps): action in T_i."""
    if not trajs:
        return np.zeros((0, 0), dtype=bool)
    return np.array([[action in t.fired_at(i) for i in range(t.k + 1)] for t in trajs], dtype=bool)


def quantity_values(trajs: Sequence[Trajectory], quantity: Quantity, obs: Observation) -> List[Fraction]:
    """
    Per-trajectory values of a quantity under an anchor, in trajectory order.

    Interval measures use the anchored interval or [0, k]; VALUE uses the
    anchored point, defaulting to the last state.
    """
    if not trajs:
        return []
    k = min(t.k for t in trajs)
    if quantity.measure is Measure.VALUE:
        step = resolve_step(obs.point.step if obs.point is not None else k, k)
        values = value_matrix(trajs, [quantity.target])[:, step, 0]
        return [Fraction(int(v)) for v in values]

    i, j = obs.span(k)
    check_interval(i, j)
    if quantity.measure is Measure.RATE_OF_FIRING:
        counts = firing_matrix(trajs, quantity.target)[:, i:j].sum(axis=1)
        return [Fraction(int(c), j - i) for c in counts]
    matrix = value_matrix(trajs, [quantity.target])
    produced = matrix[:, j, 0] - matrix[:, i, 0]
    if quantity.measure is Measure.TOTAL_PRODUCTION:
        return [Fraction(int(p)) for p in produced]
    return [Fraction(int(p), j - i) for p in produced]


def aggregate(values: Sequence[Fraction], op: Aggregate) -> Fraction:
    """Exact minimum, maximum or average of a nonempty value list."""
    if not values:
        raise ValueError("Must aggregate over at least one value")
    column = np.array(values, dtype=object)
    if op is Aggregate.MIN:
        return column.min()
    if op is Aggregate.MAX:
        return column.max()
    return column.sum() / len(column)


def candidate_conditions(marking: Marking, refs: Sequence[FluentRef]) -> Set[Condition]:
    """
    Conditions a state satisfies, per fluent with value v:
    f = v, f > m for 0 <= m < v, and f < v + 1.
    """
    candidates: Set[Condition] = set()
    for ref in refs:
        v = marking[ref.place][ref.color]
        candidates.add(Condition(ConditionKind.EQ, ref, v))
        candidates.update(Condition(ConditionKind.GT, ref, m) for m in range(v))
        candidates.add(Condition(ConditionKind.LT, ref, v + 1))
    return candidates


def order_conditions(conditions: Iterable[Condition], refs: Sequence[FluentRef]) -> List[Condition]:
    """Fluent order, then `>` ascending, `=`, `<`."""
    position = {ref: n for n, ref in enumerate(refs)}
    return sorted(conditions, key=lambda c: (position.get(c.lhs, len(position)), _KIND_ORDER[c.kind], c.rhs))


def weakest_conditions(conditions: Iterable[Condition]) -> Set[Condition]:
    """
    Drop bounds implied by a weaker one on the same fluent: of f > m only
    the smallest m stays, of f < m only the largest.
    """
    conditions = set(conditions)
    lower: Dict[FluentRef, int] = {}
    upper: Dict[FluentRef, int] = {}
    for c in conditions:
        if c.kind is ConditionKind.GT:
            lower[c.lhs] = min(lower.get(c.lhs, c.rhs), c.rhs)
        elif c.kind is ConditionKind.LT:
            upper[c.lhs] = max(upper.get(c.lhs, c.rhs), c.rhs)
    return {c for c in conditions
            if (c.kind is ConditionKind.GT and c.rhs == lower[c.lhs])
            or (c.kind is ConditionKind.LT and c.rhs == upper[c.lhs])
            or c.kind not in (ConditionKind.GT, ConditionKind.LT)}
