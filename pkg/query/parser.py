"""
Query Parser
============
pyparsing grammar for query statements:

    <description>;
    [comparing nominal pathway with modified pathway obtained;]
    [due to interventions: i1, i2;]
    [due to observations: o1, o2;]
    [using initial setup: s1, s2;]

`in all trajectories` may follow the description or close the observation
clause; either way it quantifies the description. A bare identifier in a value slot (`is n`, `is d`, `when p`) is an unknown
to be solved. Decimal literals are read as Fractions.
"""

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, List, Optional, Tuple

import pyparsing as pp

from model.errors import QuerySyntaxError
from model.guards import FluentRef

from pathway.parser import COMMENT, NUMBER, expected_tokens, fluent_ref, identifier, phrase

from .ast import (
    HORIZON,
    INITIAL_CONDITIONS,
    Accumulating,
    AddDelay,
    AfterCascade,
    Aggregate,
    AggregateFormula,
    AllFormula,
    ComparativeFormula,
    Decreasing,
    Description,
    Direction,
    Disable,
    DoesNotOccur,
    Explanation,
    Hole,
    Interval,
    MakeInhibit,
    Measure,
    Observation,
    Occurs,
    Point,
    QuantitativeFormula,
    Quantity,
    QueryStatement,
    Relation,
    RemoveAsProduced,
    SetValue,
    Supply,
    SwitchesTo,
    Transfer,
    Transform,
    WhenCascade,
)

logger = logging.getLogger(__name__)

QUERY_KEYWORDS = frozenset("""
    value values of is are higher lower than rate rates production firing total totals
    accumulating decreasing atloc occurs does not switches to when after observed between
    at and time step in all trajectories direction change average minimum maximum avg min max
    comparing nominal pathway with modified obtained due interventions intervention observations
    using initial setup remove as soon produced disable disabled continuously transform quantity
    make inhibit supply produce transfer across gradient add delay units availability set
""".split())

AGGREGATES = {
    "average": Aggregate.AVG, "avg": Aggregate.AVG,
    "minimum": Aggregate.MIN, "min": Aggregate.MIN,
    "maximum": Aggregate.MAX, "max": Aggregate.MAX,
}

DECIMAL = pp.Regex(r"-?\d+(?:\.\d+)?").set_parse_action(lambda t: Fraction(t[0])).set_name("number")


@dataclass(frozen=True)
class _Compared:
    relation: Relation
    value: Any


@dataclass(frozen=True)
class _Clause:
    name: str
    items: Tuple[Any, ...]


class _AllTrajectories:
    pass


ALL_TRAJECTORIES = _AllTrajectories()


def _direction(s: str, loc: int, t: pp.ParseResults) -> Direction:
    symbol = t[0]
    if symbol not in {d.value for d in Direction}:
        raise pp.ParseException(s, loc, f"Expected a direction '<', '>' or '=', found '{symbol}'")
    return Direction(symbol)


def _values(item: Any) -> Any:
    return tuple(item) if isinstance(item, pp.ParseResults) else item


def _located(t: pp.ParseResults, build) -> Any:
    """Apply a trailing `atloc l` written after the formula keyword."""
    ref = t[0]
    if len(t) > 1:
        ref = FluentRef(ref.fluent, t[1])
    return build(ref)


def _description(t: pp.ParseResults) -> Description:
    formula, interval, point, everywhere = t[0], None, None, False
    for item in t[1:]:
        if isinstance(item, Interval):
            interval = item
        elif isinstance(item, Point):
            point = item
        elif item is ALL_TRAJECTORIES:
            everywhere = True
    return Description(formula, interval, point, everywhere)


def _observation(t: pp.ParseResults) -> Observation:
    anchor = t[1] if len(t) > 1 else None
    if isinstance(anchor, Interval):
        return Observation(t[0], interval=anchor)
    if isinstance(anchor, Point):
        return Observation(t[0], point=anchor)
    return Observation(t[0])


def _statement(t: pp.ParseResults) -> QueryStatement:
    clauses = {item.name: item.items for item in t[1:] if isinstance(item, _Clause)}
    description = t[0]
    if "every" in clauses:
        description = replace(description, all_trajectories=True)
    return QueryStatement(
        description=description,
        interventions=clauses.get("interventions", ()),
        observations=clauses.get("observations", ()),
        initial_setup=clauses.get("setup", ()),
    )


def _initial_setup(s: str, loc: int, t: pp.ParseResults) -> _Clause:
    items = tuple(t[0])
    for item in items:
        if not isinstance(item, INITIAL_CONDITIONS):
            raise pp.ParseFatalException(
                s, loc, "Must use only 'continuously supply' or 'set value of' in the initial setup")
    return _Clause("setup", items)


class QueryParser:
    """Grammar for query statements, built once and reused"""

    def __init__(self):
        ident = identifier(QUERY_KEYWORDS)
        fref = fluent_ref(ident)
        keywords = pp.MatchFirst([pp.Keyword(w) for w in sorted(QUERY_KEYWORDS, key=len, reverse=True)])
        hole = (~keywords + pp.Word(pp.alphas + "_", pp.alphanums + "_")).set_parse_action(
            lambda t: Hole(t[0])).set_name("unknown")
        value = DECIMAL | hole
        quantity_number = NUMBER.copy().add_condition(
            lambda t: t[0] > 0, message="Must use a positive quantity", fatal=True)

        # anchors
        step = NUMBER | pp.Keyword(HORIZON).set_parse_action(lambda: HORIZON)
        point = (phrase("time step") - step).set_parse_action(lambda t: Point(t[0]))
        interval = (point + phrase("and") - point).set_parse_action(lambda t: Interval(t[0].step, t[1].step))
        between = phrase("when observed between") - interval
        at_point = (phrase("when observed at") | phrase("at")) - point
        anchor = between | at_point
        every = pp.And([pp.Keyword(w) for w in ("in", "all", "trajectories")]).set_parse_action(
            lambda: ALL_TRAJECTORIES).set_name("'in all trajectories'")

        # quantities
        def measured(words: str, measure: Measure, target: pp.ParserElement) -> pp.ParserElement:
            return (phrase(words) - target).set_parse_action(lambda t: Quantity(measure, t[0]))

        production = measured("rate of production of", Measure.RATE_OF_PRODUCTION, fref)
        firing = measured("rate of firing of", Measure.RATE_OF_FIRING, ident)
        total = measured("total production of", Measure.TOTAL_PRODUCTION, fref)
        valued = measured("value of", Measure.VALUE, fref)
        quantity = production | firing | total | valued
        plural = (
            measured("rates of production of", Measure.RATE_OF_PRODUCTION, fref)
            | measured("rates of firing of", Measure.RATE_OF_FIRING, ident)
            | measured("totals of production of", Measure.TOTAL_PRODUCTION, fref)
            | measured("values of", Measure.VALUE, fref)
        )

        # simple formulas
        compared = (
            (phrase("higher than") - value).set_parse_action(lambda t: _Compared(Relation.HIGHER, t[0]))
            | (phrase("lower than") - value).set_parse_action(lambda t: _Compared(Relation.LOWER, t[0]))
            | value.copy().add_parse_action(lambda t: _Compared(Relation.EQ, t[0]))
        )
        quant_point = (valued + phrase("is") - compared).set_parse_action(
            lambda t: QuantitativeFormula(t[0], t[1].value, t[1].relation))
        quant_interval = ((production | firing | total) + phrase("is") - value).set_parse_action(
            lambda t: QuantitativeFormula(t[0], t[1]))
        accumulating = (fref + phrase("is accumulating") + pp.Opt(phrase("atloc") - ident)).set_parse_action(
            lambda t: _located(t, Accumulating))
        decreasing = (fref + phrase("is decreasing") + pp.Opt(phrase("atloc") - ident)).set_parse_action(
            lambda t: _located(t, Decreasing))
        switches = (ident + phrase("switches to") - ident).set_parse_action(lambda t: SwitchesTo(t[0], t[1]))
        not_occurs = (ident + phrase("does not occur")).set_parse_action(lambda t: DoesNotOccur(t[0]))
        occurs = (ident + phrase("occurs")).set_parse_action(lambda t: Occurs(t[0]))

        point_formula = (quant_point | switches | not_occurs | occurs).set_name("point formula")
        simple = (quant_interval | accumulating | decreasing | point_formula).set_name("formula")
        point_list = pp.Group(pp.DelimitedList(point_formula, delim=","))

        # trajectory-set formulas
        aggop = pp.MatchFirst([pp.Keyword(w) for w in AGGREGATES]).set_parse_action(
            lambda t: AGGREGATES[t[0]]).set_name("aggregate")
        direction_literal = (pp.QuotedString("'") | pp.QuotedString('"') | pp.one_of("< > =")).set_parse_action(
            _direction)
        comparative = (phrase("direction of change in") - aggop - quantity - phrase("is")
                       - (direction_literal | hole)).set_parse_action(
            lambda t: ComparativeFormula(t[0], t[1], t[2]))
        aggregate = (aggop + quantity + phrase("is") - value).set_parse_action(
            lambda t: AggregateFormula(t[0], t[1], t[2]))
        number_list = pp.Group(pp.Suppress("[") - pp.Opt(pp.DelimitedList(DECIMAL, delim=",")) - pp.Suppress("]"))
        every_value = (plural + phrase("are") - (number_list | hole)).set_parse_action(
            lambda t: AllFormula(t[0], _values(t[1])))

        # cascades
        after = (point_formula + pp.OneOrMore(phrase("after") - point_list)).set_parse_action(
            lambda t: AfterCascade(t[0], tuple(tuple(g) for g in t[1:])))
        when = (point_formula + phrase("when") + point_list).set_parse_action(
            lambda t: WhenCascade(t[0], tuple(t[1])))
        explanation = (point_formula + phrase("when") + hole).set_parse_action(
            lambda t: Explanation(t[0], t[1]))

        body = (comparative | aggregate | every_value | after | when | explanation | simple).set_name("description")
        description = (body + pp.Opt(every) + pp.Opt(anchor) + pp.Opt(every)).set_parse_action(_description)

        # interventions
        remove = (phrase("remove") - fref - phrase("as soon as produced")).set_parse_action(
            lambda t: RemoveAsProduced(t[0]))
        disable = (phrase("disable") - ident).set_parse_action(lambda t: Disable(t[0]))
        disabled = (ident + phrase("disabled")).set_parse_action(lambda t: Disable(t[0]))
        transform = (phrase("continuously transform") - fref - phrase("in quantity") - quantity_number
                     - phrase("to") - fref).set_parse_action(lambda t: Transform(t[0], t[1], t[2]))
        supply = ((phrase("continuously supply") | phrase("continuously produce")) - fref
                  - phrase("in quantity") - quantity_number).set_parse_action(lambda t: Supply(t[0], t[1]))
        transfer = (phrase("continuously transfer") - ident - phrase("in quantity") - quantity_number
                    - phrase("across") - ident - pp.Suppress(",") - ident
                    - phrase("to lower gradient")).set_parse_action(lambda t: Transfer(t[0], t[1], t[2], t[3]))
        inhibit = (phrase("make") - fref - phrase("inhibit") - ident).set_parse_action(
            lambda t: MakeInhibit(t[0], t[1]))
        delay = (phrase("add delay of") - quantity_number - phrase("time units in availability of")
                 - fref).set_parse_action(lambda t: AddDelay(t[0], t[1]))
        set_value = (phrase("set value of") - fref - phrase("to") - NUMBER).set_parse_action(
            lambda t: SetValue(t[0], t[1]))
        intervention = (remove | disable | transform | supply | transfer | inhibit | delay | set_value
                        | disabled).set_name("intervention")
        observation = (simple + pp.Opt(anchor)).set_parse_action(_observation).set_name("observation")

        def listed(expr: pp.ParserElement) -> pp.ParserElement:
            return pp.Group(pp.DelimitedList(expr, delim=pp.one_of(", ;")))

        colon = pp.Opt(pp.Suppress(":"))
        semi = pp.Opt(pp.Suppress(";"))
        comparing = phrase("comparing nominal pathway with modified pathway obtained") + semi
        interventions = ((phrase("due to interventions") | phrase("due to intervention")) + colon
                         - listed(intervention) + semi).set_parse_action(
            lambda t: _Clause("interventions", tuple(t[0])))
        observations = (phrase("due to observations") + colon - listed(observation) + semi).set_parse_action(
            lambda t: _Clause("observations", tuple(t[0])))
        trailing_every = (every + semi).set_parse_action(lambda: _Clause("every", ()))
        setup = (phrase("using initial setup") + colon - listed(intervention) + semi).set_parse_action(
            _initial_setup)

        self.statement = (description + semi + pp.Opt(comparing) + pp.Opt(interventions)
                          + pp.Opt(observations) + pp.Opt(trailing_every) + pp.Opt(setup)
                          + pp.StringEnd()).set_parse_action(_statement)
        self.statement.ignore(COMMENT)
        self.observation_list = listed(observation) + semi + pp.StringEnd()
        self.observation_list.ignore(COMMENT)

    def _parse(self, expr: pp.ParserElement, text: str) -> pp.ParseResults:
        try:
            return expr.parse_string(text, parse_all=True)
        except pp.ParseBaseException as err:
            raise QuerySyntaxError(err.msg, err.lineno, err.col, expected_tokens(err)) from None

    def parse(self, text: str) -> QueryStatement:
        """
        Parse query text into a QueryStatement.

        Raises:
            QuerySyntaxError: with line, column and expected tokens
        """
        stmt = self._parse(self.statement, text)[0]
        logger.debug("Parsed query: %s with %d interventions, %d observations",
                     type(stmt.description.formula).__name__, len(stmt.interventions), len(stmt.observations))
        return stmt

    def parse_observations(self, text: str) -> List[Observation]:
        """Parse a bare `o1, o2, ...` observation list."""
        return list(self._parse(self.observation_list, text)[0])


_PARSER: Optional[QueryParser] = None


def _parser() -> QueryParser:
    global _PARSER
    if _PARSER is None:
        _PARSER = QueryParser()
    return _PARSER


def parse_query(text: str) -> QueryStatement:
    """Parse query statement text."""
    return _parser().parse(text)


def parse_observations(text: str) -> List[Observation]:
    """Parse an observation list such as `'a1' switches to 'a2', 'a1' occurs at time step 5`."""
    return _parser().parse_observations(text)
