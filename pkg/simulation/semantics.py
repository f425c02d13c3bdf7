"""
Execution Semantics
===================
Single-step semantics of guarded-arc Petri nets: stimulation, enabledness,
must-fire sets, consumption, conflict, firing-set selection and the state
update with durative production.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from model.diagnostics import Diagnostic
from model.errors import CapExceeded
from model.guards import guard_satisfied
from model.multiset import (
    EMPTY,
    ColoredMultiset,
    Marking,
    ms_add,
    ms_leq,
    ms_scale,
    ms_sub_saturating,
)
from model.net import Arc, ArcKind, FiringStyle, GuardedNet

logger = logging.getLogger(__name__)

FiringSet = FrozenSet[str]


@dataclass(frozen=True)
class PendingProduction:
    """Tokens a durative transition will deliver into state `due_step`"""
    due_step: int
    place: str
    amount: ColoredMultiset
    transition: str = ""


@dataclass(frozen=True)
class SimState:
    """
    State s_k of a run: the marking, deliveries still in flight, and the
    non-reentrant transitions busy until a given step.
    """
    step: int
    marking: Marking
    pending: Tuple[PendingProduction, ...] = ()
    busy: Tuple[Tuple[str, int], ...] = ()

    def in_progress(self) -> FrozenSet[str]:
        return frozenset(t for t, until in self.busy if self.step < until)


def stimulation_factor(net: GuardedNet, tid: str, marking: Marking) -> int:
    """The stimulation factor of a transition, 1 when none applies."""
    stim = net.transition(tid).stimulation
    if stim is not None and guard_satisfied(stim.guard, marking):
        return stim.factor
    return 1


def _active_arcs(net: GuardedNet, tid: str, marking: Marking, *kinds: ArcKind) -> List[Arc]:
    return [a for a in net.arcs_of(tid, *kinds) if guard_satisfied(a.guard, marking)]


def _inhibits(arc: Arc, marking: Marking) -> bool:
    held = marking[arc.place]
    if arc.weight is None:
        return held.total() > 0
    return any(held[c] >= n for c, n in arc.weight.items())


def enabled_set(net: GuardedNet, marking: Marking, in_progress: Iterable[str] = ()) -> FrozenSet[str]:
    """
    Transitions enabled in a marking.

    A transition is enabled when its guard holds, every active input arc is
    covered (scaled by stimulation), every active read arc threshold is met,
    no active inhibitor arc blocks it, and it is not a non-reentrant
    transition still in progress.
    """
    busy = set(in_progress)
    enabled = set()
    for t in net.transitions:
        if t.id in busy and not t.reentrant:
            continue
        if not guard_satisfied(t.guard, marking):
            continue
        factor = stimulation_factor(net, t.id, marking)
        ok = True
        for arc in _active_arcs(net, t.id, marking, ArcKind.INPUT, ArcKind.READ, ArcKind.INHIBITOR):
            if arc.kind is ArcKind.INPUT:
                ok = ms_leq(ms_scale(arc.weight, factor), marking[arc.place])
            elif arc.kind is ArcKind.READ:
                ok = ms_leq(arc.weight, marking[arc.place])
            else:
                ok = not _inhibits(arc, marking)
            if not ok:
                break
        if ok:
            enabled.add(t.id)
    return frozenset(enabled)


def must_fire_set(net: GuardedNet, marking: Marking, enabled: Optional[Iterable[str]] = None) -> FrozenSet[str]:
    """Enabled transitions with a satisfied must-fire guard."""
    enabled = enabled_set(net, marking) if enabled is None else set(enabled)
    return frozenset(
        t.id for t in net.transitions
        if t.id in enabled and any(guard_satisfied(g, marking) for g in t.must_fire_guards)
    )


def reset_transitions(net: GuardedNet, marking: Marking, enabled: Iterable[str]) -> FrozenSet[str]:
    """Enabled transitions owning a reset arc whose guard holds."""
    return frozenset(t for t in enabled if _active_arcs(net, t, marking, ArcKind.RESET))


def consumption(net: GuardedNet, marking: Marking, firing: Iterable[str]) -> Dict[str, ColoredMultiset]:
    """
    Per-place demand of a firing set. Input arcs demand their weight times
    the stimulation factor; reset arcs demand the full current marking of
    their color (or of every color).
    """
    demand: Dict[str, ColoredMultiset] = {p: EMPTY for p in net.places}
    for tid in firing:
        factor = stimulation_factor(net, tid, marking)
        for arc in _active_arcs(net, tid, marking, ArcKind.INPUT, ArcKind.RESET):
            if arc.kind is ArcKind.INPUT:
                amount = ms_scale(arc.weight, factor)
            elif arc.color is None:
                amount = marking[arc.place]
            else:
                amount = marking[arc.place].restrict(arc.color)
            demand[arc.place] = ms_add(demand[arc.place], amount)
    return demand


def overconsumed(net: GuardedNet, marking: Marking, firing: Iterable[str]) -> FrozenSet[str]:
    """Places where the firing set demands more tokens of some color than are held."""
    demand = consumption(net, marking, firing)
    return frozenset(p for p, need in demand.items() if not ms_leq(need, marking[p]))


def priority_filter(net: GuardedNet, enabled: Iterable[str]) -> FrozenSet[str]:
    """Keep the enabled transitions with the smallest priority number."""
    enabled = list(enabled)
    if not enabled:
        return frozenset()
    best = min(net.transition(t).priority for t in enabled)
    return frozenset(t for t in enabled if net.transition(t).priority == best)


def canonical_key(net: GuardedNet, firing: Iterable[str]) -> Tuple[int, Tuple[int, ...]]:
    """Sort key for firing sets: size, then declaration indices."""
    idx = sorted(net.order(t) for t in firing)
    return (len(idx), tuple(idx))


def _feasible_supersets(net: GuardedNet, marking: Marking, base: FrozenSet[str],
                        optional: Sequence[str]) -> List[FrozenSet[str]]:
    # overconsumption is monotone in the firing set, so infeasible branches are pruned
    if overconsumed(net, marking, base):
        return []
    found: List[FrozenSet[str]] = []

    def extend(current: FrozenSet[str], start: int) -> None:
        found.append(current)
        for i in range(start, len(optional)):
            grown = current | {optional[i]}
            if not overconsumed(net, marking, grown):
                extend(grown, i + 1)

    extend(base, 0)
    return found


def select_firing_sets(net: GuardedNet, marking: Marking, style: FiringStyle,
                       in_progress: Iterable[str] = ()) -> Tuple[List[FiringSet], Optional[Diagnostic]]:
    """
    Candidate firing sets plus a diagnostic when the style's selection is
    undefined for this state (serial firing with several must-fire transitions).
    """
    enabled = priority_filter(net, enabled_set(net, marking, in_progress))
    mf = must_fire_set(net, marking, enabled)
    resets = reset_transitions(net, marking, enabled)
    ordered = sorted(enabled, key=net.order)
    note = None

    if style is FiringStyle.SERIAL:
        if len(mf) > 1:
            note = Diagnostic("serial-must-fire",
                              f"serial firing with {len(mf)} must-fire transitions is undefined",
                              tuple(sorted(mf, key=net.order)))
            logger.warning(str(note))
            candidates: List[FiringSet] = []
        elif len(mf) == 1:
            candidates = [mf]
        else:
            candidates = [frozenset()] + [frozenset([t]) for t in ordered]
        candidates = [c for c in candidates if not overconsumed(net, marking, c)]
    else:
        optional = [t for t in ordered if t not in mf]
        candidates = _feasible_supersets(net, marking, mf, optional)
        if style is FiringStyle.MAX:
            candidates = [
                c for c in candidates
                if all(overconsumed(net, marking, c | {t}) for t in optional if t not in c)
            ]

    candidates = [c for c in candidates if resets <= c]
    candidates.sort(key=lambda c: canonical_key(net, c))
    return candidates, note


def candidate_firing_sets(net: GuardedNet, marking: Marking, style: FiringStyle,
                          in_progress: Iterable[str] = ()) -> List[FiringSet]:
    """
    Firing sets allowed in a marking under a firing style, in canonical order.

    An empty result means no firing set is possible and the run halts here.
    """
    return select_firing_sets(net, marking, style, in_progress)[0]


def step(net: GuardedNet, state: SimState, firing: Iterable[str], max_tokens: Optional[int] = None) -> SimState:
    """
    Fire a candidate set and compute the next state.

    Consumption is taken at the firing step. Outputs of duration-1
    transitions and deliveries due at step+1 are added; longer transitions
    schedule their outputs for step + D(t). Capped colors are clamped.

    Raises:
        Underflow: if `firing` is not a candidate set
        CapExceeded: if an uncapped count would exceed max_tokens
    """
    marking = state.marking
    firing = frozenset(firing)
    demand = consumption(net, marking, firing)
    after = {p: ms_sub_saturating(marking[p], demand[p]) for p in net.places}

    nxt = state.step + 1
    pending = []
    for item in state.pending:
        if item.due_step == nxt:
            after[item.place] = ms_add(after[item.place], item.amount)
        else:
            pending.append(item)

    busy = [(t, until) for t, until in state.busy if until > nxt]
    for tid in sorted(firing, key=net.order):
        t = net.transition(tid)
        factor = stimulation_factor(net, tid, marking)
        for arc in _active_arcs(net, tid, marking, ArcKind.OUTPUT):
            amount = ms_scale(arc.weight, factor)
            if t.duration == 1:
                after[arc.place] = ms_add(after[arc.place], amount)
            else:
                pending.append(PendingProduction(state.step + t.duration, arc.place, amount, tid))
        if t.duration > 1 and not t.reentrant:
            busy.append((tid, state.step + t.duration))

    for place, held in after.items():
        clamped = {}
        for color, n in held.items():
            cap = net.cap(place, color)
            if cap is not None:
                n = min(n, cap)
            elif max_tokens is not None and n > max_tokens:
                raise CapExceeded(place, color, n, max_tokens)
            clamped[color] = n
        after[place] = ColoredMultiset(clamped)

    return SimState(nxt, Marking(after, marking.colors), tuple(pending), tuple(busy))
