"""
Pathway Consistency
===================
Static checks on a parsed pathway specification.
"""

import itertools
from collections import Counter
from typing import List, Optional

from model.diagnostics import Diagnostic
from model.guards import Atom, conj, find_model
from util.settings import get_settings

from .ast import (
    DomainKind,
    Duration,
    Initially,
    PathwaySpec,
    Priority,
    Stimulate,
)
from .render import render_condition, render_statement


def _guard(conditions):
    return conj(*(Atom(c) for c in conditions))


def check_consistency(spec: PathwaySpec, bound: Optional[int] = None) -> List[Diagnostic]:
    """
    Report consistency problems in a pathway specification.

    Args:
        spec: Parsed specification
        bound: Largest fluent value tried when testing guard overlap
            (defaults to the configured max tokens)

    Returns:
        Diagnostics; those with severity "warning" do not make the spec inconsistent
    """
    found: List[Diagnostic] = []
    constants = [c.rhs for s in spec.statements for c in getattr(s, "conditions", ()) if isinstance(c.rhs, int)]
    bound = bound or get_settings().default_max_tokens
    bound = max([bound] + [n + 1 for n in constants])

    if len(spec.firing_styles) > 1:
        found.append(Diagnostic("duplicate-style", "more than one firing style statement"))

    durations = Counter(s.action for s in spec.statements if isinstance(s, Duration))
    for action, n in durations.items():
        if n > 1:
            found.append(Diagnostic("duplicate-duration", f"{n} duration statements for '{action}'", (action,)))
    priorities = Counter(s.action for s in spec.statements if isinstance(s, Priority))
    for action, n in priorities.items():
        if n > 1:
            found.append(Diagnostic("duplicate-priority", f"{n} priority statements for '{action}'", (action,)))
    stimulations = Counter(s.action for s in spec.statements if isinstance(s, Stimulate))
    for action, n in stimulations.items():
        if n > 1:
            found.append(Diagnostic("duplicate-stimulation", f"{n} stimulate statements for '{action}'", (action,)))

    for s in spec.statements:
        if isinstance(s, Priority):
            found.append(Diagnostic("priority-extension",
                                    f"'{render_statement(s)}' uses the priority statement extension",
                                    (s.action,), "warning"))
        if isinstance(s, Duration) and s.steps < 1:
            found.append(Diagnostic("bad-duration", f"duration of '{s.action}' must be at least 1", (s.action,)))
        if isinstance(s, Stimulate) and s.factor < 1:
            found.append(Diagnostic("bad-factor", f"stimulation factor of '{s.action}' must be at least 1",
                                    (s.action,)))

    actions = set(spec.actions())
    for name in spec.mentioned_actions():
        if name not in actions:
            found.append(Diagnostic("unknown-action", f"'{name}' has no may/must execute statement", (name,)))

    for action in spec.actions():
        statements = spec.executes(action)
        for s in statements:
            signs = Counter((e.ref, "*" if e.is_reset else e.delta > 0) for e in s.effects)
            for (ref, sign), n in signs.items():
                if n > 1:
                    found.append(Diagnostic("duplicate-effect",
                                            f"'{action}' has {n} effects of the same sign on '{ref}'",
                                            (action, str(ref))))
        for s1, s2 in itertools.combinations(statements, 2):
            if find_model([_guard(s1.conditions), _guard(s2.conditions)], bound) is not None:
                g1 = ", ".join(map(render_condition, s1.conditions)) or "true"
                g2 = ", ".join(map(render_condition, s2.conditions)) or "true"
                found.append(Diagnostic("overlapping-guards",
                                        f"guards of '{action}' overlap: '{g1}' overlaps with '{g2}'", (action,)))

    refs = spec.fluent_refs()
    if len({r.is_locational for r in refs}) > 1:
        found.append(Diagnostic("locational-mixing", "locational and simple fluents are mixed",
                                tuple(str(r) for r in refs)))

    binary = {d.ref for d in spec.domains if d.kind is DomainKind.BINARY}
    for s in spec.statements:
        for e in getattr(s, "effects", ()):
            if e.ref in binary and not e.is_reset and e.delta not in (-1, 1):
                found.append(Diagnostic("binary-domain", f"binary fluent '{e.ref}' changed by {e.delta}",
                                        (str(e.ref),)))
        if isinstance(s, Initially) and s.ref in binary and s.value > 1:
            found.append(Diagnostic("binary-domain", f"binary fluent '{s.ref}' initially {s.value}",
                                    (str(s.ref),)))

    initial = Counter(s.ref for s in spec.statements if isinstance(s, Initially))
    for ref, n in initial.items():
        if n > 1:
            found.append(Diagnostic("duplicate-initially", f"{n} initial values for '{ref}'", (str(ref),)))

    return found


def errors_only(diagnostics: List[Diagnostic]) -> List[Diagnostic]:
    return [d for d in diagnostics if d.severity == "error"]
