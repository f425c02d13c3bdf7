"""
Query Engine
============
Evaluates query statements against a pathway specification:

1. build the nominal (initial setup) and modified (setup plus
   interventions) specifications,
2. simulate them,
3. filter the modified trajectories by the observations,
4. evaluate the description, solving any unknowns.

Non-aggregate descriptions hold if some trajectory satisfies them, or
every trajectory with `in all trajectories`.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Set, Tuple, Union

from model.errors import CompileError, NoTrajectories, NoWitness, UnknownTarget
from model.guards import Condition, FluentRef
from model.net import FiringStyle
from pathway.ast import PathwaySpec
from pathway.compiler import compile_pathway
from pathway.consistency import check_consistency, errors_only
from simulation.trajectories import Trajectory, complete_trajectories, enumerate_trajectories
from util.settings import get_settings

from .ast import (
    Accumulating,
    AfterCascade,
    Aggregate,
    AggregateFormula,
    AllFormula,
    ComparativeFormula,
    Decreasing,
    Description,
    Direction,
    DoesNotOccur,
    Explanation,
    Formula,
    Hole,
    Occurs,
    QuantitativeFormula,
    Quantity,
    QueryStatement,
    Relation,
    SwitchesTo,
    WhenCascade,
    resolve_step,
)
from .formulas import (
    aggregate,
    candidate_conditions,
    cascade_points,
    filter_trajectories,
    format_number,
    observation_holds,
    order_conditions,
    quantity_value,
    quantity_values,
    weakest_conditions,
)
from .interventions import build_domains

logger = logging.getLogger(__name__)


class ResultKind(Enum):
    BOOLEAN = "boolean"
    NUMBER = "number"
    DIRECTION = "direction"
    CONDITIONS = "conditions"
    VALUES = "values"


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return format_number(value)
    if isinstance(value, Direction):
        return value.value
    if isinstance(value, Condition):
        return {"fluent": str(value.lhs), "op": value.kind.value, "value": value.rhs}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass(frozen=True)
class QueryResult:
    """
    Outcome of a query.

    `value` is the truth value for fully specified queries, or the solved
    unknown: a Fraction (NUMBER), a Direction, a tuple of Conditions, or a
    tuple of Fractions (VALUES). Counts are of the trajectories each side
    was evaluated on, after filtering.
    """
    kind: ResultKind
    value: Any
    holes: Dict[str, Any] = field(default_factory=dict)
    modified_count: int = 0
    nominal_count: Optional[int] = None
    modified_value: Optional[Fraction] = None
    nominal_value: Optional[Fraction] = None
    direction: Optional[Direction] = None
    values: Tuple[Fraction, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "value": _jsonable(self.value),
            "holes": {name: _jsonable(v) for name, v in self.holes.items()},
            "trajectory_counts": {"nominal": self.nominal_count, "modified": self.modified_count},
            "nominal_value": _jsonable(self.nominal_value),
            "modified_value": _jsonable(self.modified_value),
            "direction": _jsonable(self.direction),
            "values": _jsonable(self.values),
        }


def simulate_spec(spec: PathwaySpec, k: int, cap: Optional[int] = None, style: Optional[FiringStyle] = None,
                  limit: Optional[int] = None, non_reentrant: bool = False) -> List[Trajectory]:
    """
    Compile a specification and enumerate its complete trajectories.

    Raises:
        CompileError: if the specification is inconsistent
    """
    errors = errors_only(check_consistency(spec, cap))
    if errors:
        raise CompileError("; ".join(str(d) for d in errors))
    net = compile_pathway(spec)
    if style is not None:
        net = net.with_style(style)
    if non_reentrant:
        net = net.non_reentrant()
    trajs = enumerate_trajectories(net, k, cap=cap, limit=limit)
    complete = complete_trajectories(trajs)
    if len(complete) < len(trajs):
        logger.info("Dropped %d halted runs", len(trajs) - len(complete))
    return complete


def _formula_targets(formula: Formula) -> Iterator[Union[FluentRef, str]]:
    if isinstance(formula, (QuantitativeFormula, AllFormula, AggregateFormula, ComparativeFormula)):
        yield formula.quantity.target
    elif isinstance(formula, (Accumulating, Decreasing)):
        yield formula.ref
    elif isinstance(formula, (Occurs, DoesNotOccur)):
        yield formula.action
    elif isinstance(formula, SwitchesTo):
        yield formula.first
        yield formula.second
    elif isinstance(formula, (AfterCascade, WhenCascade, Explanation)):
        yield from _formula_targets(formula.head)
        for group in getattr(formula, "chain", ()):
            for f in group:
                yield from _formula_targets(f)
        for f in getattr(formula, "conditions", ()):
            yield from _formula_targets(f)


def check_targets(spec: PathwaySpec, stmt: QueryStatement) -> None:
    """
    Raises:
        UnknownTarget: if the description or an observation names a fluent
            or action absent from spec
    """
    refs, actions = set(spec.fluent_refs()), set(spec.actions())
    formulas = [stmt.description.formula] + [o.formula for o in stmt.observations]
    for formula in formulas:
        for target in _formula_targets(formula):
            if isinstance(target, FluentRef) and target not in refs:
                raise UnknownTarget(f"Fluent '{target}' does not occur in the pathway")
            if isinstance(target, str) and target not in actions:
                raise UnknownTarget(f"Action '{target}' does not occur in the pathway")


def eval_aggregate(trajs: Sequence[Trajectory], description: Description, quantity: Quantity,
                   op: Aggregate) -> Fraction:
    """
    Aggregate of a quantity's per-trajectory values.

    Raises:
        NoTrajectories: if trajs is empty
    """
    if not trajs:
        raise NoTrajectories(f"Cannot take the {op.value} of {quantity.measure.value} over no trajectories")
    return aggregate(quantity_values(trajs, quantity, description), op)


def eval_comparative(nominal: Sequence[Trajectory], modified: Sequence[Trajectory],
                     description: Description) -> Tuple[Direction, Fraction, Fraction]:
    """
    Direction of change of the aggregate from the nominal to the modified
    trajectories.

    Returns:
        (direction, nominal aggregate, modified aggregate)
    """
    formula: ComparativeFormula = description.formula
    nominal_value = eval_aggregate(nominal, description, formula.quantity, formula.aggregate)
    modified_value = eval_aggregate(modified, description, formula.quantity, formula.aggregate)
    return Direction.between(modified_value, nominal_value), nominal_value, modified_value


def explain_condition(trajs: Sequence[Trajectory], cascade: Formula,
                      refs: Sequence[FluentRef]) -> List[Condition]:
    """
    Conditions that hold in every state where the cascade's head holds,
    across all trajectories, keeping the weakest bound per fluent.

    Raises:
        NoWitness: if no trajectory has such a state
    """
    common: Optional[Set[Condition]] = None
    witnesses = 0
    for traj in trajs:
        for i in cascade_points(traj, cascade):
            witnesses += 1
            found = candidate_conditions(traj.states[i], refs)
            common = found if common is None else common & found
    if common is None:
        raise NoWitness("No trajectory satisfies the cascade being explained")
    logger.debug("Explained over %d witness states", witnesses)
    return order_conditions(weakest_conditions(common), refs)


def _value_sets(trajs: Sequence[Trajectory], description: Description) -> List[Set[Fraction]]:
    formula: QuantitativeFormula = description.formula
    quantity = formula.quantity
    sets = []
    for traj in trajs:
        if quantity.is_interval:
            i, j = description.span(traj.k)
            sets.append({quantity_value(traj, quantity, i, j)})
        elif description.point is not None:
            sets.append({quantity_value(traj, quantity, resolve_step(description.point.step, traj.k))})
        else:
            sets.append({quantity_value(traj, quantity, i) for i in range(traj.k + 1)})
    return sets


def _solve_values(trajs: Sequence[Trajectory], description: Description) -> Tuple[Fraction, ...]:
    if description.formula.relation is not Relation.EQ:
        raise ValueError("Must use 'is' when the value is unknown")
    sets = _value_sets(trajs, description)
    if not sets:
        return ()
    if description.all_trajectories:
        solved = set.intersection(*sets)
    else:
        solved = set.union(*sets)
    return tuple(sorted(solved))


def _quantified(trajs: Sequence[Trajectory], description: Description) -> bool:
    if description.all_trajectories:
        if not trajs:
            logger.warning("No trajectories; 'in all trajectories' holds vacuously")
        return all(observation_holds(t, description) for t in trajs)
    return any(observation_holds(t, description) for t in trajs)


def evaluate(spec: PathwaySpec, stmt: QueryStatement, k: Optional[int] = None, cap: Optional[int] = None,
             style: Optional[FiringStyle] = None, limit: Optional[int] = None,
             non_reentrant: bool = False) -> QueryResult:
    """
    Evaluate a query statement on a pathway specification.

    Args:
        spec: Pathway specification
        stmt: Parsed query
        k: Horizon; defaults to the configured default steps
        cap: Max tokens per place
        style: Firing style override
        limit: Trajectory limit per simulation
        non_reentrant: Simulate durative actions as non-reentrant

    Returns:
        QueryResult with solved unknowns, or the truth value

    Raises:
        UnknownTarget, CompileError, NoTrajectories, NoWitness,
        DegenerateInterval, TrajectoryLimitExceeded
    """
    k = get_settings().default_steps if k is None else k
    nominal_spec, modified_spec = build_domains(spec, stmt)
    check_targets(modified_spec, stmt)
    description = stmt.description
    formula = description.formula

    def simulate(s: PathwaySpec) -> List[Trajectory]:
        return simulate_spec(s, k, cap, style, limit, non_reentrant)

    modified_all = simulate(modified_spec)
    modified = filter_trajectories(modified_all, stmt.observations)
    logger.info("Modified domain: %d trajectories, %d after observations", len(modified_all), len(modified))

    if isinstance(formula, ComparativeFormula):
        nominal = simulate(nominal_spec)
        logger.info("Nominal domain: %d trajectories", len(nominal))
        direction, nominal_value, modified_value = eval_comparative(nominal, modified, description)
        counts = dict(modified_count=len(modified), nominal_count=len(nominal), nominal_value=nominal_value,
                      modified_value=modified_value, direction=direction)
        if isinstance(formula.direction, Hole):
            return QueryResult(ResultKind.DIRECTION, direction, {formula.direction.name: direction}, **counts)
        return QueryResult(ResultKind.BOOLEAN, direction is formula.direction, **counts)

    if isinstance(formula, AggregateFormula):
        value = eval_aggregate(modified, description, formula.quantity, formula.aggregate)
        if isinstance(formula.value, Hole):
            return QueryResult(ResultKind.NUMBER, value, {formula.value.name: value},
                               len(modified), modified_value=value)
        return QueryResult(ResultKind.BOOLEAN, value == formula.value, modified_count=len(modified),
                           modified_value=value)

    if isinstance(formula, AllFormula):
        values = tuple(quantity_values(modified, formula.quantity, description))
        if isinstance(formula.values, Hole):
            return QueryResult(ResultKind.VALUES, values, {formula.values.name: values}, len(modified),
                               values=values)
        return QueryResult(ResultKind.BOOLEAN, values == tuple(formula.values), modified_count=len(modified),
                           values=values)

    if isinstance(formula, Explanation):
        conditions = tuple(explain_condition(modified, formula, modified_spec.fluent_refs()))
        return QueryResult(ResultKind.CONDITIONS, conditions, {formula.hole.name: conditions}, len(modified))

    if isinstance(formula, QuantitativeFormula) and isinstance(formula.value, Hole):
        values = _solve_values(modified, description)
        return QueryResult(ResultKind.VALUES, values, {formula.value.name: values}, len(modified), values=values)

    return QueryResult(ResultKind.BOOLEAN, _quantified(modified, description), modified_count=len(modified))

