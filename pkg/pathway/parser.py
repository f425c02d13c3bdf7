"""
Pathway Parser
==============
pyparsing grammar for the pathway specification language. A newline or the
end of input ends a statement. A statement continues on the next line
after a list comma and after `causing`, `initially`, `domain of` or `if`,
and an `if` clause may start on its own line. '%' starts a comment.
"""

import logging
import re
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, List, Optional

import pyparsing as pp

from model.errors import PathwaySyntaxError
from model.guards import Condition, ConditionKind, FluentRef
from model.net import FiringStyle

from .ast import (
    RESET_ALL,
    DomainDecl,
    DomainKind,
    Duration,
    Effect,
    Inhibit,
    Initially,
    MayExecute,
    MustExecute,
    PathwaySpec,
    Priority,
    Stimulate,
)

logger = logging.getLogger(__name__)

PATHWAY_KEYWORDS = frozenset("""
    domain of is integer binary may execute causing normally must inhibit if
    stimulate by factor initially has value or higher lower than equal to change
    atloc executes in time units duration firing style priority fire
""".split())

COMMENT = pp.Regex(r"%[^\n]*")
LINE_WHITESPACE = " \t\r"


def phrase(words: str) -> pp.ParserElement:
    """A suppressed sequence of keywords, e.g. phrase('may execute')."""
    parts = [pp.Keyword(w) for w in words.split()]
    expr = parts[0] if len(parts) == 1 else pp.And(parts)
    return expr.set_name(repr(words)).suppress()


def identifier(reserved: Iterable[str]) -> pp.ParserElement:
    """Bare [a-zA-Z_][a-zA-Z0-9_]* word that is not reserved, or a name quoted as 'x', "x" or `x'."""
    keywords = pp.MatchFirst([pp.Keyword(w) for w in sorted(reserved, key=len, reverse=True)])
    bare = ~keywords + pp.Word(pp.alphas + "_", pp.alphanums + "_")
    quoted = pp.QuotedString("`", end_quote_char="'") | pp.QuotedString("'") | pp.QuotedString('"')
    return (quoted | bare).set_name("identifier")


NUMBER = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0])).set_name("number")


def fluent_ref(ident: pp.ParserElement) -> pp.ParserElement:
    """f or f atloc l"""
    expr = ident + pp.Opt(phrase("atloc") + ident)
    return expr.set_parse_action(lambda t: FluentRef(t[0], t[1] if len(t) > 1 else None)).set_name("fluent")


@dataclass(frozen=True)
class _Relation:
    kind: ConditionKind
    rhs: Any


def _rel(kind: ConditionKind, expr: pp.ParserElement) -> pp.ParserElement:
    return expr.copy().add_parse_action(lambda t: _Relation(kind, t[0]))


def condition(fref: pp.ParserElement, number: pp.ParserElement) -> pp.ParserElement:
    """
    Guard condition forms:
        f has value w or higher | f has value w or lower | f has value w
        f has value lower than w|g | f has value higher than w|g
        f has value equal to w | f has higher value than g | f has lower value than g
    """
    operand = number | fref
    valued = phrase("value") + (
        _rel(ConditionKind.LT, phrase("lower than") + operand)
        | _rel(ConditionKind.GT, phrase("higher than") + operand)
        | _rel(ConditionKind.EQ, phrase("equal to") + operand)
        | _rel(ConditionKind.GE, number + phrase("or higher"))
        | _rel(ConditionKind.LE, number + phrase("or lower"))
        | _rel(ConditionKind.EQ, number)
    )
    compared = (
        _rel(ConditionKind.GT, phrase("higher value than") + fref)
        | _rel(ConditionKind.LT, phrase("lower value than") + fref)
    )
    expr = fref + phrase("has") + (valued | compared)
    return expr.set_parse_action(lambda t: Condition(t[1].kind, t[0], t[1].rhs)).set_name("condition")


def delimited(expr: pp.ParserElement, gap: pp.ParserElement) -> pp.ParserElement:
    """`expr, expr, ...` with an optional trailing comma; `gap` may follow any comma."""
    comma = pp.Suppress(",")
    return expr + pp.ZeroOrMore(comma + pp.Opt(gap) + expr) + pp.Opt(comma)


def expected_tokens(err: pp.ParseBaseException) -> List[str]:
    match = re.match(r"Expected (.*?)(?:, found .*)?$", err.msg or "")
    return [match.group(1)] if match else []


@contextmanager
def _line_whitespace() -> Iterator[None]:
    """Elements created inside skip blanks and tabs but stop at newlines."""
    saved = pp.ParserElement.DEFAULT_WHITE_CHARS
    pp.ParserElement.set_default_whitespace_chars(LINE_WHITESPACE)
    try:
        yield
    finally:
        pp.ParserElement.set_default_whitespace_chars(saved)


class PathwayParser:
    """Grammar for pathway specifications, built once and reused"""

    def __init__(self):
        with _line_whitespace():
            self._build()

    def _build(self) -> None:
        number = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0])).set_name("number")
        signed = pp.Regex(r"[+-]?\d+").set_parse_action(lambda t: int(t[0])).set_name("signed number")
        comment = pp.Regex(r"%[^\n]*")
        newline = pp.Suppress(pp.OneOrMore(pp.LineEnd())).set_name("end of line")
        gap = pp.Opt(newline)

        ident = identifier(PATHWAY_KEYWORDS)
        fref = fluent_ref(ident)
        cond = condition(fref, number)
        conditions = pp.Opt(gap + phrase("if") - gap - pp.Group(delimited(cond, newline)), default=[])

        delta = signed | pp.Literal("*").set_parse_action(lambda: RESET_ALL)
        effect = (fref + phrase("change value by") + delta).set_parse_action(lambda t: Effect(t[0], t[1]))
        effects = pp.Group(delimited(effect, newline))

        may = (ident + (phrase("may execute") | phrase("may fire")) - phrase("causing") - gap - effects
               + conditions).set_parse_action(lambda t: MayExecute(t[0], tuple(t[1]), tuple(t[2])))
        must = (ident + phrase("normally must execute") - phrase("causing") - gap - effects
                + conditions).set_parse_action(lambda t: MustExecute(t[0], tuple(t[1]), tuple(t[2])))
        inhibit = (phrase("inhibit") - ident + conditions).set_parse_action(
            lambda t: Inhibit(t[0], tuple(t[1])))
        stimulate = (phrase("normally stimulate") - ident - phrase("by factor") - number + conditions).set_parse_action(
            lambda t: Stimulate(t[0], t[1], tuple(t[2])))
        executes_in = (ident + phrase("executes in") - number - phrase("time units")).set_parse_action(
            lambda t: Duration(t[0], t[1]))
        duration_of = (phrase("duration of") - ident - phrase("is") - number).set_parse_action(
            lambda t: Duration(t[0], t[1]))
        priority = (phrase("priority of") - ident - phrase("is") - number).set_parse_action(
            lambda t: Priority(t[0], t[1]))

        initial_item = (fref + phrase("has value") - number).set_parse_action(lambda t: Initially(t[0], t[1]))
        initially = phrase("initially") - gap - delimited(initial_item, newline)

        kind = (pp.Keyword("integer") | pp.Keyword("binary")).set_parse_action(lambda t: DomainKind(t[0]))
        domain_item = (fref + phrase("is") - kind).set_parse_action(lambda t: DomainDecl(t[0], t[1]))
        domain = phrase("domain of") - gap - delimited(domain_item, newline)

        style = (pp.Keyword("max") | pp.Literal("*") | pp.Literal("1")).set_parse_action(
            lambda t: FiringStyle.parse(t[0]))
        firing_style = phrase("firing style") - style

        self.statement = (
            domain | initially | firing_style | inhibit | stimulate | duration_of | priority
            | may | must | executes_in
        ).set_name("statement")
        self.program = gap + pp.ZeroOrMore(self.statement - (newline | pp.StringEnd())) + pp.StringEnd()
        self.program.ignore(comment)

    def parse(self, text: str) -> PathwaySpec:
        """
        Parse pathway text into a PathwaySpec.

        Raises:
            PathwaySyntaxError: with line, column and expected tokens
        """
        try:
            tokens = self.program.parse_string(text, parse_all=True)
        except pp.ParseBaseException as err:
            raise PathwaySyntaxError(err.msg, err.lineno, err.col, expected_tokens(err)) from None

        domains, statements, styles = [], [], []
        for item in tokens:
            if isinstance(item, DomainDecl):
                domains.append(item)
            elif isinstance(item, FiringStyle):
                styles.append(item)
            else:
                statements.append(item)
        spec = PathwaySpec(tuple(domains), tuple(statements), tuple(styles))
        logger.debug("Parsed pathway: %d domains, %d statements", len(domains), len(statements))
        return spec


_PARSER: Optional[PathwayParser] = None


def parse_pathway(text: str) -> PathwaySpec:
    """Parse pathway specification text."""
    global _PARSER
    if _PARSER is None:
        _PARSER = PathwayParser()
    return _PARSER.parse(text)
