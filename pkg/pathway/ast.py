"""
Pathway AST
===========
Statements of the pathway specification language.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator, List, Optional, Tuple, Union

from model.guards import Condition, FluentRef
from model.net import FiringStyle

RESET_ALL = "*"

Delta = Union[int, str]


class DomainKind(Enum):
    """Value domain of a fluent"""
    INTEGER = "integer"
    BINARY = "binary"


@dataclass(frozen=True)
class DomainDecl:
    ref: FluentRef
    kind: DomainKind = DomainKind.INTEGER


@dataclass(frozen=True)
class Effect:
    """f change value by delta; delta is a signed integer or RESET_ALL"""
    ref: FluentRef
    delta: Delta

    @property
    def is_reset(self) -> bool:
        return self.delta == RESET_ALL


@dataclass(frozen=True)
class MayExecute:
    action: str
    effects: Tuple[Effect, ...]
    conditions: Tuple[Condition, ...] = ()


@dataclass(frozen=True)
class MustExecute:
    action: str
    effects: Tuple[Effect, ...]
    conditions: Tuple[Condition, ...] = ()


@dataclass(frozen=True)
class Inhibit:
    action: str
    conditions: Tuple[Condition, ...] = ()


@dataclass(frozen=True)
class Stimulate:
    action: str
    factor: int
    conditions: Tuple[Condition, ...] = ()


@dataclass(frozen=True)
class Initially:
    ref: FluentRef
    value: int


@dataclass(frozen=True)
class Duration:
    action: str
    steps: int


@dataclass(frozen=True)
class Priority:
    """Accepted as `priority of a is n`; lower numbers fire first"""
    action: str
    level: int


Statement = Union[MayExecute, MustExecute, Inhibit, Stimulate, Initially, Duration, Priority]
ExecuteStatement = Union[MayExecute, MustExecute]


@dataclass(frozen=True)
class PathwaySpec:
    """
    A parsed pathway specification. Statement order is preserved; every
    firing-style statement is kept so duplicates can be reported.
    """
    domains: Tuple[DomainDecl, ...] = ()
    statements: Tuple[Statement, ...] = ()
    firing_styles: Tuple[FiringStyle, ...] = ()

    @property
    def firing_style(self) -> FiringStyle:
        return self.firing_styles[0] if self.firing_styles else FiringStyle.MAX

    def executes(self, action: Optional[str] = None) -> List[ExecuteStatement]:
        return [s for s in self.statements
                if isinstance(s, (MayExecute, MustExecute)) and (action is None or s.action == action)]

    def actions(self) -> List[str]:
        """Actions with a may/must-execute statement, in first-appearance order"""
        seen: List[str] = []
        for s in self.executes():
            if s.action not in seen:
                seen.append(s.action)
        return seen

    def mentioned_actions(self) -> List[str]:
        seen = self.actions()
        for s in self.statements:
            name = getattr(s, "action", None)
            if name is not None and name not in seen:
                seen.append(name)
        return seen

    def fluent_refs(self) -> List[FluentRef]:
        """Every fluent reference in first-appearance order"""
        seen: List[FluentRef] = []

        def add(ref: FluentRef) -> None:
            if ref not in seen:
                seen.append(ref)

        for d in self.domains:
            add(d.ref)
        for s in self.statements:
            for ref in statement_refs(s):
                add(ref)
        return seen

    def domain_of(self, ref: FluentRef) -> DomainKind:
        for d in self.domains:
            if d.ref == ref:
                return d.kind
        return DomainKind.INTEGER

    def initial_value(self, ref: FluentRef) -> Optional[int]:
        for s in self.statements:
            if isinstance(s, Initially) and s.ref == ref:
                return s.value
        return None

    def with_statements(self, statements: List[Statement]) -> "PathwaySpec":
        return replace(self, statements=tuple(statements))

    def add(self, *statements: Statement) -> "PathwaySpec":
        return replace(self, statements=self.statements + tuple(statements))


def statement_refs(s: Statement) -> Iterator[FluentRef]:
    if isinstance(s, (MayExecute, MustExecute)):
        for e in s.effects:
            yield e.ref
    if isinstance(s, (MayExecute, MustExecute, Inhibit, Stimulate)):
        for c in s.conditions:
            yield from c.refs()
    if isinstance(s, Initially):
        yield s.ref
