"""
Query Rendering
===============
Canonical text for query ASTs, exact decimal formatting of rationals, and
the solved-query echo printed after evaluation:

    direction of change in average rate of production of 'bpg13' is '<' (0.6<1)
        when observed between time step 0 and time step 5;
        comparing nominal pathway with modified pathway obtained
        due to interventions:
            remove 'dhap' as soon as produced;
        using initial setup:
            continuously supply 'f16bp' in quantity 1;
"""

from fractions import Fraction
from typing import Any, List, Mapping, Optional, Sequence, Tuple

from model.guards import Condition, ConditionKind, FluentRef

from .ast import (
    AddDelay,
    AfterCascade,
    AggregateFormula,
    AllFormula,
    Accumulating,
    ComparativeFormula,
    Decreasing,
    Description,
    Direction,
    Disable,
    DoesNotOccur,
    Explanation,
    Formula,
    Hole,
    Intervention,
    MakeInhibit,
    Measure,
    Observation,
    Occurs,
    QuantitativeFormula,
    Quantity,
    QueryStatement,
    Relation,
    RemoveAsProduced,
    SetValue,
    Step,
    Supply,
    SwitchesTo,
    Transfer,
    Transform,
    WhenCascade,
    resolve_step,
)
from .engine import ResultKind
from .formulas import format_number

PLURAL = {
    Measure.RATE_OF_PRODUCTION: "rates of production",
    Measure.RATE_OF_FIRING: "rates of firing",
    Measure.TOTAL_PRODUCTION: "totals of production",
    Measure.VALUE: "values",
}


def quote(name: str) -> str:
    return f"'{name}'"


def render_ref(ref: FluentRef) -> str:
    return f"{quote(ref.fluent)} atloc {quote(ref.location)}" if ref.location else quote(ref.fluent)


def render_value(value: Any) -> str:
    if isinstance(value, Hole):
        return value.name
    if isinstance(value, Direction):
        return quote(value.value)
    return format_number(value, None)


def render_quantity(q: Quantity, plural: bool = False) -> str:
    target = quote(q.target) if isinstance(q.target, str) else render_ref(q.target)
    name = PLURAL[q.measure] if plural else q.measure.value
    return f"{name} of {target}"


def render_formula(f: Formula) -> str:
    if isinstance(f, QuantitativeFormula):
        return f"{render_quantity(f.quantity)} {f.relation.value} {render_value(f.value)}"
    if isinstance(f, Accumulating):
        return f"{render_ref(f.ref)} is accumulating"
    if isinstance(f, Decreasing):
        return f"{render_ref(f.ref)} is decreasing"
    if isinstance(f, Occurs):
        return f"{quote(f.action)} occurs"
    if isinstance(f, DoesNotOccur):
        return f"{quote(f.action)} does not occur"
    if isinstance(f, SwitchesTo):
        return f"{quote(f.first)} switches to {quote(f.second)}"
    if isinstance(f, AllFormula):
        values = render_value(f.values) if isinstance(f.values, Hole) else (
            "[" + ", ".join(map(render_value, f.values)) + "]")
        return f"{render_quantity(f.quantity, plural=True)} are {values}"
    if isinstance(f, AggregateFormula):
        return f"{f.aggregate.value} {render_quantity(f.quantity)} is {render_value(f.value)}"
    if isinstance(f, ComparativeFormula):
        return (f"direction of change in {f.aggregate.value} {render_quantity(f.quantity)} "
                f"is {render_value(f.direction)}")
    if isinstance(f, AfterCascade):
        return render_formula(f.head) + "".join(
            " after " + ", ".join(map(render_formula, group)) for group in f.chain)
    if isinstance(f, WhenCascade):
        return f"{render_formula(f.head)} when " + ", ".join(map(render_formula, f.conditions))
    if isinstance(f, Explanation):
        return f"{render_formula(f.head)} when {f.hole.name}"
    raise TypeError(f"Unknown formula: {f!r}")


def _step(step: Step, k: Optional[int]) -> str:
    return str(resolve_step(step, k)) if k is not None else str(step)


def render_anchor(obs: Observation, k: Optional[int] = None, description: bool = False) -> str:
    """Anchor text; with k given, the horizon symbol is replaced by its value."""
    if obs.interval is not None:
        return (f"when observed between time step {_step(obs.interval.start, k)} "
                f"and time step {_step(obs.interval.end, k)}")
    if obs.point is not None:
        prefix = "when observed at" if description else "at"
        return f"{prefix} time step {_step(obs.point.step, k)}"
    return ""


def render_observation(obs: Observation) -> str:
    anchor = render_anchor(obs)
    return f"{render_formula(obs.formula)} {anchor}" if anchor else render_formula(obs.formula)


def render_intervention(iv: Intervention) -> str:
    if isinstance(iv, RemoveAsProduced):
        return f"remove {render_ref(iv.ref)} as soon as produced"
    if isinstance(iv, Disable):
        return f"disable {quote(iv.action)}"
    if isinstance(iv, Transform):
        return (f"continuously transform {render_ref(iv.source)} in quantity {iv.quantity} "
                f"to {render_ref(iv.target)}")
    if isinstance(iv, MakeInhibit):
        return f"make {render_ref(iv.ref)} inhibit {quote(iv.action)}"
    if isinstance(iv, Supply):
        return f"continuously supply {render_ref(iv.ref)} in quantity {iv.quantity}"
    if isinstance(iv, Transfer):
        return (f"continuously transfer {quote(iv.fluent)} in quantity {iv.quantity} "
                f"across {quote(iv.first)}, {quote(iv.second)} to lower gradient")
    if isinstance(iv, AddDelay):
        return f"add delay of {iv.quantity} time units in availability of {render_ref(iv.ref)}"
    if isinstance(iv, SetValue):
        return f"set value of {render_ref(iv.ref)} to {iv.value}"
    raise TypeError(f"Unknown intervention: {iv!r}")


def _description_line(d: Description, k: Optional[int] = None) -> List[str]:
    parts = [render_anchor(d, k, description=True)]
    if d.all_trajectories:
        parts.append("in all trajectories")
    return [p for p in parts if p]


def _clauses(stmt: QueryStatement) -> List[Tuple[str, List[str]]]:
    clauses = []
    if stmt.interventions:
        clauses.append(("due to interventions:", [render_intervention(i) for i in stmt.interventions]))
    if stmt.observations:
        clauses.append(("due to observations:", [render_observation(o) for o in stmt.observations]))
    if stmt.initial_setup:
        clauses.append(("using initial setup:", [render_intervention(i) for i in stmt.initial_setup]))
    return clauses


def render_query(stmt: QueryStatement) -> str:
    """Canonical query text; parsing it yields an equal statement."""
    desc = stmt.description
    lines = [" ".join([render_formula(desc.formula)] + _description_line(desc)) + ";"]
    if stmt.is_comparative:
        lines.append("comparing nominal pathway with modified pathway obtained;")
    for header, items in _clauses(stmt):
        lines.append(f"{header} " + ", ".join(items) + ";")
    return "\n".join(lines) + "\n"


def condition_formula(c: Condition) -> QuantitativeFormula:
    """A solved explanation condition as a value-of point formula"""
    relation = {ConditionKind.GT: Relation.HIGHER, ConditionKind.LT: Relation.LOWER}.get(c.kind, Relation.EQ)
    return QuantitativeFormula(Quantity(Measure.VALUE, c.lhs), Fraction(c.rhs), relation)


def solve_formula(f: Formula, holes: Mapping[str, Any]) -> Formula:
    """Substitute solved unknowns back into a formula."""
    def solved(slot: Any) -> Any:
        return holes.get(slot.name, slot) if isinstance(slot, Hole) else slot

    if isinstance(f, QuantitativeFormula):
        value = solved(f.value)
        if isinstance(value, (list, tuple)):
            if len(value) != 1:
                return f
            value = value[0]
        return QuantitativeFormula(f.quantity, value, f.relation)
    if isinstance(f, AggregateFormula):
        return AggregateFormula(f.aggregate, f.quantity, solved(f.value))
    if isinstance(f, AllFormula):
        values = solved(f.values)
        return AllFormula(f.quantity, tuple(values) if isinstance(values, (list, tuple)) else values)
    if isinstance(f, ComparativeFormula):
        return ComparativeFormula(f.aggregate, f.quantity, solved(f.direction))
    if isinstance(f, Explanation) and f.hole.name in holes:
        return WhenCascade(f.head, tuple(condition_formula(c) for c in holes[f.hole.name]))
    return f


def _note(result: Any) -> str:
    if result.nominal_value is not None and result.modified_value is not None and result.direction is not None:
        return (f" ({format_number(result.modified_value)}{result.direction.value}"
                f"{format_number(result.nominal_value)})")
    if result.kind is ResultKind.VALUES and len(result.values) != 1:
        return " (" + (", ".join(format_number(v) for v in result.values) or "none") + ")"
    return ""


def echo_query(stmt: QueryStatement, result: Any, k: int) -> str:
    """
    The query with its unknowns filled in, laid out one clause per line.

    Args:
        stmt: The evaluated statement
        result: QueryResult holding solved holes and aggregate values
        k: Horizon used for the evaluation; replaces the symbol k

    Returns:
        Multi-line text ending in a newline
    """
    desc = stmt.description
    lines = [render_formula(solve_formula(desc.formula, result.holes)) + _note(result)]
    lines.extend("    " + part for part in _description_line(desc, k))
    if stmt.is_comparative:
        lines.append("    comparing nominal pathway with modified pathway obtained")
    lines[-1] += ";"
    for header, items in _clauses(stmt):
        lines.append("    " + header)
        lines.extend(f"        {item}{';' if n == len(items) - 1 else ','}" for n, item in enumerate(items))
    return "\n".join(lines) + "\n"


def render_conditions(conditions: Sequence[Condition]) -> str:
    """p = acoa > 0, sug = 0, ..."""
    return ", ".join(str(c) for c in conditions)
