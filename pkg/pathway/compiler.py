"""
Pathway Compiler
================
Builds a guarded-arc Petri net from a pathway specification.

Simple fluents become places holding the default color. Locational fluents
become colors at the place named by their location. Each may/must-execute
statement contributes arcs guarded by its own conditions; the transition
guard is the disjunction of those guards conjoined with the negation of
every inhibit condition.
"""

import logging
from collections import OrderedDict
from typing import Dict, List, Tuple

from model.errors import CompileError
from model.guards import TRUE, Atom, Guard, Not, conj, disj
from model.multiset import DEFAULT_COLOR, ColoredMultiset
from model.net import Arc, ArcKind, GuardedNet, Stimulation, TransitionDef

from .ast import (
    DomainKind,
    Duration,
    Inhibit,
    MustExecute,
    PathwaySpec,
    Priority,
    Stimulate,
)

logger = logging.getLogger(__name__)


def _guard(conditions) -> Guard:
    return conj(*(Atom(c) for c in conditions))


def _statement_arcs(action: str, statement, guard: Guard) -> List[Arc]:
    grouped: "OrderedDict[Tuple[ArcKind, str], Dict[str, int]]" = OrderedDict()
    arcs: List[Arc] = []
    for effect in statement.effects:
        ref = effect.ref
        if effect.is_reset:
            arcs.append(Arc(ArcKind.RESET, ref.place, action, None, guard, ref.color))
            continue
        if effect.delta == 0:
            continue
        kind = ArcKind.INPUT if effect.delta < 0 else ArcKind.OUTPUT
        weights = grouped.setdefault((kind, ref.place), {})
        weights[ref.color] = weights.get(ref.color, 0) + abs(effect.delta)
    for (kind, place), weights in grouped.items():
        arcs.append(Arc(kind, place, action, ColoredMultiset(weights), guard))
    return arcs


def compile_pathway(spec: PathwaySpec) -> GuardedNet:
    """
    Compile a consistent pathway specification into a GuardedNet.

    Args:
        spec: Parsed (and consistency-checked) specification

    Returns:
        The net, with its firing style taken from the specification

    Raises:
        CompileError: for references that resolve to no action, or mixed
            locational and simple fluents
    """
    refs = spec.fluent_refs()
    locational = {r.is_locational for r in refs}
    if len(locational) > 1:
        raise CompileError("Cannot compile a pathway mixing locational and simple fluents")

    places: List[str] = []
    colors: List[str] = []
    for ref in refs:
        if ref.place not in places:
            places.append(ref.place)
        if ref.color not in colors:
            colors.append(ref.color)
    if not colors:
        colors = [DEFAULT_COLOR]

    actions = spec.actions()
    for name in spec.mentioned_actions():
        if name not in actions:
            raise CompileError(f"'{name}' is referenced but has no may/must execute statement")

    transitions: List[TransitionDef] = []
    arcs: List[Arc] = []
    for action in actions:
        executes = spec.executes(action)
        guards = [_guard(s.conditions) for s in executes]
        inhibits = [Not(_guard(s.conditions)) for s in spec.statements
                    if isinstance(s, Inhibit) and s.action == action]
        transition_guard = conj(disj(*guards), *inhibits)

        must_fire = tuple(g for s, g in zip(executes, guards) if isinstance(s, MustExecute))
        for s, g in zip(executes, guards):
            arcs.extend(_statement_arcs(action, s, g))

        duration, priority, stimulation = 1, 1, None
        for s in spec.statements:
            if getattr(s, "action", None) != action:
                continue
            if isinstance(s, Duration):
                duration = s.steps
            elif isinstance(s, Priority):
                priority = s.level
            elif isinstance(s, Stimulate):
                if stimulation is not None:
                    raise CompileError(f"'{action}' has more than one stimulate statement")
                stimulation = Stimulation(_guard(s.conditions), s.factor)

        try:
            transitions.append(TransitionDef(action, transition_guard, priority, duration, stimulation, must_fire))
        except ValueError as e:
            raise CompileError(str(e)) from None

    initial: Dict[str, Dict[str, int]] = {p: {} for p in places}
    for ref in refs:
        value = spec.initial_value(ref)
        if value:
            initial[ref.place][ref.color] = value

    caps = {(d.ref.place, d.ref.color): 1 for d in spec.domains if d.kind is DomainKind.BINARY}

    net = GuardedNet.build(places, transitions, arcs,
                           {p: ColoredMultiset(c) for p, c in initial.items()},
                           colors, caps, spec.firing_style)
    logger.debug("Compiled net: %d places, %d transitions, %d arcs", len(places), len(transitions), len(arcs))
    return net
