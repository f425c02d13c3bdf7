"""
Structural Validation
=====================
Checks the constraints a guarded-arc net must satisfy before simulation.
Problems come back as Diagnostic values rather than exceptions.
"""

import itertools
import logging
from typing import List

from .diagnostics import Diagnostic
from .guards import Guard, find_model
from .net import ArcKind, GuardedNet

logger = logging.getLogger(__name__)


def _guard_refs_known(net: GuardedNet, guard: Guard, owner: str) -> List[Diagnostic]:
    found = []
    locational = set()
    for ref in sorted(guard.refs(), key=str):
        locational.add(ref.is_locational)
        if ref.place not in net.places or ref.color not in net.colors:
            found.append(Diagnostic("unknown-fluent", f"guard of '{owner}' references unknown fluent '{ref}'",
                                    (owner, str(ref))))
    if len(locational) > 1:
        found.append(Diagnostic("locational-mixing",
                                f"guard of '{owner}' mixes locational and simple fluents", (owner,)))
    return found


def validate_net(net: GuardedNet, bound: int) -> List[Diagnostic]:
    """
    Validate the structural constraints of a guarded-arc net.

    Guard disjointness is decided by searching fluent values 0..bound.

    Args:
        net: Net to check
        bound: Largest fluent value considered in the interpretation search

    Returns:
        Diagnostics, empty when every constraint holds
    """
    if bound < 1:
        raise ValueError(f"Must use a bound >= 1, got {bound}")

    found: List[Diagnostic] = []
    places = set(net.places)
    tids = list(net.transition_ids)

    for name in sorted(places & set(tids)):
        found.append(Diagnostic("name-clash", f"'{name}' is both a place and a transition", (name,)))
    for tid in sorted({t for t in tids if tids.count(t) > 1}):
        found.append(Diagnostic("duplicate-transition", f"transition '{tid}' is declared twice", (tid,)))

    for arc in net.arcs:
        if arc.place not in places or arc.transition not in tids:
            found.append(Diagnostic("dangling-arc", f"{arc.kind.value} arc {arc.place}/{arc.transition} "
                                    "names an undeclared place or transition", (arc.place, arc.transition)))
        found.extend(_guard_refs_known(net, arc.guard, arc.transition))

    for t in net.transitions:
        found.extend(_guard_refs_known(net, t.guard, t.id))
        for g in t.must_fire_guards:
            found.extend(_guard_refs_known(net, g, t.id))

        arcs = net.arcs_of(t.id)
        resets = {(a.place, a.guard) for a in arcs if a.kind is ArcKind.RESET}
        for a in arcs:
            if a.kind is ArcKind.INPUT and (a.place, a.guard) in resets:
                found.append(Diagnostic("reset-input-overlap",
                                        f"'{t.id}' has both a reset and an input arc on '{a.place}' "
                                        f"under guard '{a.guard}'", (t.id, a.place)))

        distinct: List[Guard] = []
        for a in arcs:
            if a.guard not in distinct:
                distinct.append(a.guard)
        for g1, g2 in itertools.combinations(distinct, 2):
            if find_model([g1, g2], bound) is not None:
                found.append(Diagnostic("overlapping-arc-guards",
                                        f"arc guards '{g1}' and '{g2}' of '{t.id}' can hold together", (t.id,)))

        if t.stimulation is not None and t.stimulation.factor > 1:
            for a in net.arcs_of(t.id, ArcKind.INPUT):
                if any(net.cap(a.place, c) == 1 for c in a.weight):
                    found.append(Diagnostic("binary-stimulation",
                                            f"'{t.id}' is stimulated by {t.stimulation.factor} "
                                            f"but consumes binary place '{a.place}'", (t.id, a.place)))

    for t1, t2 in itertools.combinations(net.transitions, 2):
        for g1, g2 in itertools.product(t1.must_fire_guards, t2.must_fire_guards):
            if find_model([g1, g2], bound) is not None:
                found.append(Diagnostic("overlapping-must-fire",
                                        f"overlapping must-fire guards '{g1}' on '{t1.id}' and '{g2}' on '{t2.id}'",
                                        (t1.id, t2.id)))

    for place in net.places:
        for color, n in net.initial_marking.get(place, {}).items():
            cap = net.cap(place, color)
            if cap is not None and n > cap:
                found.append(Diagnostic("cap-violation", f"initial {n} tokens of '{color}' at '{place}' "
                                        f"exceed cap {cap}", (place, color)))

    if found:
        logger.debug("validate_net found %d diagnostics", len(found))
    return found
