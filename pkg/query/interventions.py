"""
Interventions
=============
Applies interventions and initial conditions to a pathway specification as
edits written in the pathway language itself. Each edit adds (and for some
interventions first removes) statements; the modified specification is then
simulated like any other.

Fresh actions are named `<prefix>_<name>_<i>` with the smallest unused i,
where <name> is the fluent, or `fluent_location` for a located fluent.
"""

import logging
from typing import Iterable, List, Sequence, Set, Tuple

from model.errors import UnknownTarget
from model.guards import Condition, ConditionKind, FluentRef

from pathway.ast import (
    RESET_ALL,
    DomainDecl,
    Duration,
    Effect,
    Inhibit,
    Initially,
    MayExecute,
    MustExecute,
    PathwaySpec,
    Statement,
)

from .ast import (
    INITIAL_CONDITIONS,
    AddDelay,
    Disable,
    Intervention,
    MakeInhibit,
    QueryStatement,
    RemoveAsProduced,
    SetValue,
    Supply,
    Transfer,
    Transform,
)

logger = logging.getLogger(__name__)


def ref_name(ref: FluentRef) -> str:
    return f"{ref.fluent}_{ref.location}" if ref.location else ref.fluent


def fresh_action(spec: PathwaySpec, prefix: str, name: str, taken: Iterable[str] = ()) -> str:
    """Smallest `<prefix>_<name>_<i>`, i >= 1, not used by any action."""
    used = set(spec.mentioned_actions()) | set(taken)
    i = 1
    while f"{prefix}_{name}_{i}" in used:
        i += 1
    return f"{prefix}_{name}_{i}"


def _require_ref(spec: PathwaySpec, ref: FluentRef) -> None:
    if ref not in spec.fluent_refs():
        raise UnknownTarget(f"Fluent '{ref}' does not occur in the pathway")


def _require_action(spec: PathwaySpec, action: str) -> None:
    if action not in spec.actions():
        raise UnknownTarget(f"Action '{action}' does not occur in the pathway")


def _without_initially(spec: PathwaySpec, ref: FluentRef) -> List[Statement]:
    return [s for s in spec.statements if not (isinstance(s, Initially) and s.ref == ref)]


def _set_value(spec: PathwaySpec, ref: FluentRef, value: int) -> PathwaySpec:
    """Replace the initially statement for ref in place, or append one."""
    statements, replaced = [], False
    for s in spec.statements:
        if isinstance(s, Initially) and s.ref == ref:
            if not replaced:
                statements.append(Initially(ref, value))
                replaced = True
            continue
        statements.append(s)
    if not replaced:
        statements.append(Initially(ref, value))
    return spec.with_statements(statements)


def _produces(effect: Effect, ref: FluentRef) -> bool:
    return effect.ref == ref and not effect.is_reset and effect.delta > 0


def _delayed(spec: PathwaySpec, ref: FluentRef, steps: int) -> PathwaySpec:
    """
    Route every production of ref through a relay action of the given
    duration. Each producing statement writes to its own primed fluent,
    which the relay moves to ref after `steps` time units.
    """
    names = {r.fluent for r in spec.fluent_refs()} | {r.location for r in spec.fluent_refs() if r.location}
    taken: Set[str] = set()
    statements: List[Statement] = []
    extra: List[Statement] = []
    domains = list(spec.domains)
    delayed = 0

    for s in spec.statements:
        if not isinstance(s, (MayExecute, MustExecute)) or not any(_produces(e, ref) for e in s.effects):
            statements.append(s)
            continue

        i = 1
        while True:
            relay = f"delay_{ref_name(ref)}_{i}"
            primed_name = f"{ref.location if ref.location else ref.fluent}_d{i}"
            if relay not in taken and relay not in spec.mentioned_actions() and primed_name not in names:
                break
            i += 1
        taken.add(relay)
        names.add(primed_name)
        primed = FluentRef(ref.fluent, primed_name) if ref.location else FluentRef(primed_name)

        rewritten, weight = [], 0
        for e in s.effects:
            if _produces(e, ref):
                weight += e.delta
                rewritten.append(Effect(primed, e.delta))
            else:
                rewritten.append(e)
        statements.append(type(s)(s.action, tuple(rewritten), s.conditions))
        extra.append(MayExecute(relay, (Effect(primed, -weight), Effect(ref, weight))))
        extra.append(Duration(relay, steps))
        if any(d.ref == ref for d in spec.domains):
            domains.append(DomainDecl(primed, spec.domain_of(ref)))
        delayed += 1

    if not delayed:
        logger.warning("No action produces '%s'; delay intervention has no effect", ref)
        return spec
    logger.debug("Delayed %d producer(s) of '%s' by %d", delayed, ref, steps)
    return PathwaySpec(tuple(domains), tuple(statements + extra), spec.firing_styles)


def apply_intervention(spec: PathwaySpec, iv: Intervention) -> PathwaySpec:
    """
    Apply one intervention or initial condition (D ◇ I).

    Args:
        spec: The specification to modify
        iv: The intervention

    Returns:
        A new specification; the input is left unchanged

    Raises:
        UnknownTarget: if a fluent or action named by iv is not in spec
    """
    if isinstance(iv, RemoveAsProduced):
        _require_ref(spec, iv.ref)
        name = fresh_action(spec, "reset", ref_name(iv.ref))
        return spec.add(MayExecute(name, (Effect(iv.ref, RESET_ALL),)))

    if isinstance(iv, Disable):
        _require_action(spec, iv.action)
        return spec.add(Inhibit(iv.action, ()))

    if isinstance(iv, Transform):
        _require_ref(spec, iv.source)
        _require_ref(spec, iv.target)
        name = fresh_action(spec, "transform", ref_name(iv.source))
        return spec.add(MayExecute(name, (Effect(iv.source, -iv.quantity), Effect(iv.target, iv.quantity))))

    if isinstance(iv, MakeInhibit):
        _require_ref(spec, iv.ref)
        _require_action(spec, iv.action)
        statements = _without_initially(spec, iv.ref)
        statements.append(Inhibit(iv.action, (Condition(ConditionKind.GE, iv.ref, 1),)))
        statements.append(Initially(iv.ref, 1))
        return spec.with_statements(statements)

    if isinstance(iv, Supply):
        _require_ref(spec, iv.ref)
        name = fresh_action(spec, "src", ref_name(iv.ref))
        return spec.add(MayExecute(name, (Effect(iv.ref, iv.quantity),)))

    if isinstance(iv, Transfer):
        first, second = FluentRef(iv.fluent, iv.first), FluentRef(iv.fluent, iv.second)
        _require_ref(spec, first)
        _require_ref(spec, second)
        forward = fresh_action(spec, "transfer", iv.fluent)
        backward = fresh_action(spec, "transfer", iv.fluent, taken=[forward])
        return spec.add(
            MayExecute(forward, (Effect(first, -iv.quantity), Effect(second, iv.quantity)),
                       (Condition(ConditionKind.GT, first, second),)),
            MayExecute(backward, (Effect(second, -iv.quantity), Effect(first, iv.quantity)),
                       (Condition(ConditionKind.GT, second, first),)),
        )

    if isinstance(iv, AddDelay):
        _require_ref(spec, iv.ref)
        return _delayed(spec, iv.ref, iv.quantity)

    if isinstance(iv, SetValue):
        _require_ref(spec, iv.ref)
        return _set_value(spec, iv.ref, iv.value)

    raise TypeError(f"Unknown intervention: {iv!r}")


def apply_all(spec: PathwaySpec, interventions: Sequence[Intervention]) -> PathwaySpec:
    for iv in interventions:
        spec = apply_intervention(spec, iv)
    return spec


def build_domains(spec: PathwaySpec, stmt: QueryStatement) -> Tuple[PathwaySpec, PathwaySpec]:
    """
    Build the nominal and modified specifications for a query.

    The nominal specification carries the initial setup only; the modified
    one additionally carries the interventions.

    Raises:
        ValueError: if the initial setup holds anything but initial conditions
        UnknownTarget: if an intervention names something absent from spec
    """
    for item in stmt.initial_setup:
        if not isinstance(item, INITIAL_CONDITIONS):
            raise ValueError(f"Must use only initial conditions in the initial setup, got {type(item).__name__}")
    nominal = apply_all(spec, stmt.initial_setup)
    modified = apply_all(nominal, stmt.interventions)
    logger.debug("Domains built: nominal %d statements, modified %d statements",
                 len(nominal.statements), len(modified.statements))
    return nominal, modified
