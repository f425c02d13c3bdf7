"""
Pathway Rendering
=================
Canonical text for pathway ASTs and guard conditions; parsing the output
yields an equal AST.
"""

import re
from typing import Iterable, List

from model.guards import Condition, ConditionKind, FluentRef

from .ast import (
    DomainDecl,
    Duration,
    Effect,
    Inhibit,
    Initially,
    MayExecute,
    MustExecute,
    PathwaySpec,
    Priority,
    Statement,
    Stimulate,
)
from .parser import PATHWAY_KEYWORDS


_BARE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def render_name(name: str) -> str:
    """Bare when it reads back as an identifier, quoted otherwise."""
    if _BARE.fullmatch(name) and name not in PATHWAY_KEYWORDS:
        return name
    return f'"{name}"' if "'" in name else f"'{name}'"


def render_ref(ref: FluentRef) -> str:
    if ref.location:
        return f"{render_name(ref.fluent)} atloc {render_name(ref.location)}"
    return render_name(ref.fluent)


def render_condition(c: Condition) -> str:
    rhs = render_ref(c.rhs) if isinstance(c.rhs, FluentRef) else str(c.rhs)
    lhs = render_ref(c.lhs)
    if c.kind is ConditionKind.GE:
        return f"{lhs} has value {rhs} or higher"
    if c.kind is ConditionKind.LE:
        return f"{lhs} has value {rhs} or lower"
    if c.kind is ConditionKind.LT:
        return f"{lhs} has value lower than {rhs}"
    if c.kind is ConditionKind.GT:
        return f"{lhs} has value higher than {rhs}"
    return f"{lhs} has value equal to {rhs}"


def render_effect(e: Effect) -> str:
    if e.is_reset:
        by = "*"
    else:
        by = f"+{e.delta}" if e.delta > 0 else str(e.delta)
    return f"{render_ref(e.ref)} change value by {by}"


def _conditions(conds: Iterable[Condition]) -> str:
    conds = list(conds)
    return " if " + ", ".join(render_condition(c) for c in conds) if conds else ""


def render_statement(s: Statement) -> str:
    if isinstance(s, MayExecute):
        return (f"{render_name(s.action)} may execute causing " + ", ".join(map(render_effect, s.effects))
                + _conditions(s.conditions))
    if isinstance(s, MustExecute):
        return (f"{render_name(s.action)} normally must execute causing " + ", ".join(map(render_effect, s.effects))
                + _conditions(s.conditions))
    if isinstance(s, Inhibit):
        return f"inhibit {render_name(s.action)}" + _conditions(s.conditions)
    if isinstance(s, Stimulate):
        return f"normally stimulate {render_name(s.action)} by factor {s.factor}" + _conditions(s.conditions)
    if isinstance(s, Initially):
        return f"initially {render_ref(s.ref)} has value {s.value}"
    if isinstance(s, Duration):
        return f"duration of {render_name(s.action)} is {s.steps}"
    if isinstance(s, Priority):
        return f"priority of {render_name(s.action)} is {s.level}"
    raise TypeError(f"Unknown statement {s!r}")


def render_pathway(spec: PathwaySpec) -> str:
    """One statement per line, domains first and firing styles last."""
    lines: List[str] = []
    if spec.domains:
        lines.append("domain of " + ", ".join(f"{render_ref(d.ref)} is {d.kind.value}" for d in spec.domains))
    lines.extend(render_statement(s) for s in spec.statements)
    lines.extend(f"firing style {style.value}" for style in spec.firing_styles)
    return "\n".join(lines) + "\n"
