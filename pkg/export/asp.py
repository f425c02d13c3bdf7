"""
ASP Export
==========
Emits answer-set programs (clingo syntax) encoding the bounded execution of
a guarded-arc net. Nothing is ground or solved here; the text is meant for
golden-file comparison and for running an external solver.

Two layouts are produced:

* pooled (BASIC, MAXFIRE): untimed arc facts with `p;q` pooling, places and
  transitions in declaration order,
* time-indexed (RESET and above): `ptarc(p,t,n,TS) :- time(TS).` arc rules
  grouped per transition, everything sorted by name, with `#const nts`
  and `#const ntok` so the horizon can be overridden on the solver
  command line.

From COLORED up every token count carries a color argument; an uncolored
net exported there uses the single color `tok`.
"""

import json
import logging
import re
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from model.errors import UnsupportedFeature
from model.guards import And, Atom, ConditionKind, FluentRef, Guard, Not, TrueGuard
from model.multiset import DEFAULT_COLOR
from model.net import Arc, ArcKind, FiringStyle, GuardedNet, TransitionDef
from util.settings import get_settings

logger = logging.getLogger(__name__)

ASP_DEFAULT_COLOR = "tok"

_CONSTANT = re.compile(r"_*[a-z][A-Za-z0-9_']*")


class EncodingLevel(IntEnum):
    """Cumulative encoding levels; each includes every lower level's rules"""
    BASIC = 0
    MAXFIRE = 1
    RESET = 2
    INHIBIT = 3
    READ = 4
    COLORED = 5
    PRIORITY = 6
    DURATIVE = 7

    @classmethod
    def parse(cls, text: str) -> "EncodingLevel":
        text = text.strip()
        if text.isdigit() and int(text) in {level.value for level in cls}:
            return cls(int(text))
        try:
            return cls[text.upper()]
        except KeyError:
            names = ", ".join(level.name.lower() for level in cls)
            raise ValueError(f"Must be one of {names} or 0-7; got '{text}'") from None


class ResetStyle(Enum):
    """
    CONTENTION: a reset arc consumes the whole marking in contention with
    other consumers, and an enabled reset transition must fire.
    STANDARD: emptying is a side effect after the other arcs consume.
    """
    CONTENTION = "contention"
    STANDARD = "standard"

    @classmethod
    def parse(cls, text: str) -> "ResetStyle":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"Must be contention or standard; got '{text}'") from None


def term(name: str) -> str:
    """A symbol as a clingo constant, or a quoted string when it cannot be one."""
    return name if _CONSTANT.fullmatch(name) else json.dumps(name)


def color_term(color: str) -> str:
    return ASP_DEFAULT_COLOR if color == DEFAULT_COLOR else term(color)


@dataclass
class LoweredGuard:
    """
    A transition guard lowered to arc facts: (place, color, threshold)
    triples for inhibitor and read arcs, and whether the guard is constantly
    false.
    """
    inhibitors: List[Tuple[str, str, int]] = field(default_factory=list)
    reads: List[Tuple[str, str, int]] = field(default_factory=list)
    disabled: bool = False
    positive: List[Atom] = field(default_factory=list)


def _conjuncts(guard: Guard) -> List[Guard]:
    if isinstance(guard, TrueGuard):
        return []
    if isinstance(guard, And):
        return list(guard.parts)
    return [guard]


def _threshold(atom: Atom, tid: str) -> Tuple[str, str, int]:
    c = atom.condition
    if c.kind not in (ConditionKind.GE, ConditionKind.GT) or isinstance(c.rhs, FluentRef):
        raise UnsupportedFeature(f"Guard condition '{c}' of '{tid}' has no ASP encoding")
    weight = c.rhs + 1 if c.kind is ConditionKind.GT else c.rhs
    return c.lhs.place, c.lhs.color, weight


def lower_guard(t: TransitionDef) -> LoweredGuard:
    """
    Lower a transition guard that is a conjunction of `f >= w` / `f > w`
    conditions and their negations.

    Raises:
        UnsupportedFeature: for any other guard shape
    """
    lowered = LoweredGuard()
    for part in _conjuncts(t.guard):
        if isinstance(part, Not):
            inner = part.operand
            if isinstance(inner, TrueGuard):
                lowered.disabled = True
                continue
            if not isinstance(inner, Atom):
                raise UnsupportedFeature(f"Guard '{part}' of '{t.id}' has no ASP encoding")
            place, color, weight = _threshold(inner, t.id)
            if weight <= 0:
                lowered.disabled = True
            else:
                lowered.inhibitors.append((place, color, weight))
        elif isinstance(part, Atom):
            place, color, weight = _threshold(part, t.id)
            lowered.positive.append(part)
            if weight > 0:
                lowered.reads.append((place, color, weight))
        else:
            raise UnsupportedFeature(f"Guard '{part}' of '{t.id}' has no ASP encoding")
    return lowered


def _check_supported(net: GuardedNet) -> Dict[str, LoweredGuard]:
    if net.caps:
        raise UnsupportedFeature("Binary (capped) fluents have no ASP encoding")
    guards = {}
    for t in net.transitions:
        if t.stimulation is not None:
            raise UnsupportedFeature(f"Stimulation of '{t.id}' has no ASP encoding")
        if t.must_fire_guards:
            raise UnsupportedFeature(f"Must-execute statements for '{t.id}' have no ASP encoding")
        lowered = lower_guard(t)
        for arc in net.arcs_of(t.id):
            arc_atoms = _conjuncts(arc.guard)
            if any(a not in lowered.positive for a in arc_atoms):
                raise UnsupportedFeature(f"Arc guard '{arc.guard}' on '{t.id}' has no ASP encoding")
        guards[t.id] = lowered
    if len({t.reentrant for t in net.transitions if t.duration > 1}) > 1:
        raise UnsupportedFeature("Mixed reentrant and non-reentrant durative transitions")
    return guards


def detect_level(net: GuardedNet) -> EncodingLevel:
    """
    The lowest encoding level covering every feature the net uses.

    Raises:
        UnsupportedFeature: if the net uses a feature with no encoding
    """
    guards = _check_supported(net)
    kinds = {a.kind for a in net.arcs}
    level = EncodingLevel.MAXFIRE if net.firing_style is FiringStyle.MAX else EncodingLevel.BASIC
    if ArcKind.RESET in kinds:
        level = max(level, EncodingLevel.RESET)
    if ArcKind.INHIBITOR in kinds or any(g.inhibitors or g.disabled for g in guards.values()):
        level = max(level, EncodingLevel.INHIBIT)
    if ArcKind.READ in kinds or any(g.reads for g in guards.values()):
        level = max(level, EncodingLevel.READ)
    if net.is_colored:
        level = max(level, EncodingLevel.COLORED)
    if len({t.priority for t in net.transitions}) > 1:
        level = max(level, EncodingLevel.PRIORITY)
    if any(t.duration > 1 for t in net.transitions):
        level = max(level, EncodingLevel.DURATIVE)
    return level


# Rule texts. Pooled rules use untimed arcs; timed ones the 4-ary form.

POOLED_RULES = """\
notenabled(T,TS):-ptarc(P,T,N),holds(P,Q,TS),Q<N, place(P), trans(T), time(TS),num(N),num(Q).
enabled(T,TS) :- trans(T), time(TS), not notenabled(T, TS).
{fires(T,TS)} :- enabled(T,TS), trans(T), time(TS).
add(P,Q,T,TS) :- fires(T,TS), tparc(T,P,Q), time(TS).
del(P,Q,T,TS) :- fires(T,TS), ptarc(P,T,Q), time(TS).
tot_incr(P,QQ,TS) :- QQ=#sum[add(P,Q,T,TS)=Q:num(Q):trans(T)], time(TS), num(QQ), place(P).
tot_decr(P,QQ,TS) :- QQ=#sum[del(P,Q,T,TS)=Q:num(Q):trans(T)], time(TS), num(QQ), place(P).
holds(P,Q,TS+1) :-holds(P,Q1,TS),tot_incr(P,Q2,TS),time(TS+1),tot_decr(P,Q3,TS),Q=Q1+Q2-Q3,place(P),num(Q;Q1;Q2;Q3),time(TS).
consumesmore(P,TS) :- holds(P,Q,TS), tot_decr(P,Q1,TS), Q1 > Q.
consumesmore :- consumesmore(P,TS).
:- consumesmore."""

POOLED_MAXFIRE = """\
could_not_have(T,TS) :- enabled(T,TS), not fires(T,TS), ptarc(S,T,Q), holds(S,QQ,TS), tot_decr(S,QQQ,TS), Q > QQ - QQQ.
:- not could_not_have(T,TS), enabled(T,TS), not fires(T,TS), trans(T), time(TS)."""

INTERLEAVED = """\
more_than_one_fires :- fires(T1,TS), fires(T2, TS), T1 != T2, time(TS).
:- more_than_one_fires."""

TIMED_MAXFIRE = """\
could_not_have(T,TS) :- {enabled}(T,TS), not fires(T,TS), ptarc(P,T,Q{c},TS),
    holds(P,QQ{c},TS), tot_decr(P,QQQ{c},TS), Q > QQ - QQQ.
:- not could_not_have(T,TS), time(TS), {enabled}(T,TS), not fires(T,TS), trans(T)."""

MIN_RULES = """\
min(A,B,A) :- A<=B, num(A;B).
min(A,B,B) :- B<=A, num(A;B).
#hide min/3."""

HOLDSPOS = """\
holdspos(P):- holds(P,N,0), place(P), num(N), N > 0.
holds(P,0,0) :- place(P), not holdspos(P)."""

NOTENABLED = """\
notenabled(T,TS) :- ptarc(P,T,N,TS), holds(P,Q,TS), Q < N, place(P), trans(T),
    time(TS), num(N), num(Q)."""

NOTENABLED_INHIBIT = """\
notenabled(T,TS) :- iptarc(P,T,N,TS), holds(P,Q,TS), place(P), trans(T),
    time(TS), num(N), num(Q), Q >= N."""

NOTENABLED_READ = """\
notenabled(T,TS) :- tptarc(P,T,N,TS), holds(P,Q,TS), place(P), trans(T),
    time(TS), num(N), num(Q), Q < N."""

ENABLED = "enabled(T,TS) :- trans(T), time(TS), not notenabled(T, TS)."

FIRES = "{{ fires(T,TS) }} :- {enabled}(T,TS), trans(T), time(TS)."

ADD_DEL = """\
add(P,Q,T,TS) :- fires(T,TS), tparc(T,P,Q,TS), time(TS).
del(P,Q,T,TS) :- fires(T,TS), ptarc(P,T,Q,TS), time(TS)."""

TOTALS = """\
tot_incr(P,QQ,TS) :- QQ = #sum[add(P,Q,T,TS) = Q : num(Q) : trans(T)],
    time(TS), num(QQ), place(P).
tot_decr(P,QQ,TS) :- QQ = #sum[del(P,Q,T,TS) = Q : num(Q) : trans(T)],
    time(TS), num(QQ), place(P)."""

NEXT_STATE = """\
holds(P,Q,TS+1) :- holds(P,Q1,TS), tot_incr(P,Q2,TS), tot_decr(P,Q3,TS),
    Q=Q1+Q2-Q3, place(P), num(Q;Q1;Q2;Q3), time(TS), time(TS+1)."""

STANDARD_RESET = """\
reset(P,TS) :- rptarc(P,T), place(P), trans(T), fires(T,TS), time(TS).

holds(P,Q,TS+1) :- holds(P,Q1,TS), tot_incr(P,Q2,TS), tot_decr(P,Q3,TS),
    Q=Q1+Q2-Q3, place(P), num(Q;Q1;Q2;Q3), time(TS), time(TS+1), not reset(P,TS).
holds(P,Q,TS+1) :- tot_incr(P,Q,TS), place(P), num(Q), time(TS), time(TS+1), reset(P,TS)."""

CONSUMES_MORE = """\
consumesmore(P,TS) :- holds(P,Q,TS), tot_decr(P,Q1,TS), Q1 > Q.
consumesmore :- consumesmore(P,TS).
:- consumesmore."""

COLORED_NOTENABLED = """\
notenabled(T,TS) :- ptarc(P,T,N,C,TS), holds(P,Q,C,TS), place(P), trans(T),
    time(TS), num(N), num(Q), col(C), Q<N.
notenabled(T,TS) :- iptarc(P,T,N,C,TS), holds(P,Q,C,TS), place(P), trans(T),
    time(TS), num(N), num(Q), col(C), Q>=N.
notenabled(T,TS) :- tptarc(P,T,N,C,TS), holds(P,Q,C,TS), place(P), trans(T),
    time(TS), num(N), num(Q), col(C), Q<N."""

NON_REENTRANT = """\
notenabled(T,TS) :- fires(T,TS0), num(N), TS>TS0, tparc(T,P,N,C,TS0,D),
    col(C), time(TS0), time(TS), TS<(TS0+D)."""

PRIORITY = """\
notprenabled(T,TS) :- enabled(T,TS), transpr(T,P), enabled(TT,TS), transpr(TT,PP), PP < P.
prenabled(T,TS) :- enabled(T,TS), not notprenabled(T,TS)."""

COLORED_ADD = "add(P,Q,T,C,TS) :- fires(T,TS), tparc(T,P,Q,C,TS), time(TS)."

DURATIVE_ADD = "add(P,Q,T,C,TS) :- fires(T,TS0), time(TS0;TS), tparc(T,P,Q,C,TS0,D), TS=TS0+D-1."

COLORED_DEL = "del(P,Q,T,C,TS) :- fires(T,TS), ptarc(P,T,Q,C,TS), time(TS)."

COLORED_TOTALS = """\
tot_incr(P,QQ,C,TS) :- col(C), QQ = #sum[add(P,Q,T,C,TS) = Q : num(Q) : trans(T)],
    time(TS), num(QQ), place(P).
tot_decr(P,QQ,C,TS) :- col(C), QQ = #sum[del(P,Q,T,C,TS) = Q : num(Q) : trans(T)],
    time(TS), num(QQ), place(P)."""

COLORED_NEXT_STATE = """\
holds(P,Q,C,TS+1) :- place(P), num(Q;Q1;Q2;Q3), time(TS), time(TS+1), col(C),
    holds(P,Q1,C,TS), tot_incr(P,Q2,C,TS), tot_decr(P,Q3,C,TS), Q=Q1+Q2-Q3."""

COLORED_CONSUMES_MORE = """\
consumesmore(P,TS) :- holds(P,Q,C,TS), tot_decr(P,Q1,C,TS), Q1 > Q.
consumesmore :- consumesmore(P,TS).
:- consumesmore."""


def _pool(names: Iterable[str]) -> str:
    return ";".join(term(n) for n in names)


def _weight(arc: Arc) -> int:
    return arc.weight.total() if arc.weight is not None else 1


def _pooled_program(net: GuardedNet, k: int, cap: int) -> List[str]:
    facts = [f"num(0..{cap}).", f"time(0..{k})."]
    if net.places:
        facts.append(f"place({_pool(net.places)}).")
    if net.transitions:
        facts.append(f"trans({_pool(net.transition_ids)}).")
    for tid in net.transition_ids:
        for arc in net.arcs_of(tid, ArcKind.INPUT, ArcKind.OUTPUT):
            if arc.kind is ArcKind.INPUT:
                facts.append(f"ptarc({term(arc.place)},{term(tid)},{_weight(arc)}).")
            else:
                facts.append(f"tparc({term(tid)},{term(arc.place)},{_weight(arc)}).")

    by_count: Dict[int, List[str]] = {}
    for p in net.places:
        by_count.setdefault(net.initial_marking[p].total(), []).append(p)
    facts.extend(f"holds({_pool(places)},{count},0)." for count, places in by_count.items())

    blocks = ["\n".join(facts), POOLED_RULES]
    if net.firing_style is FiringStyle.MAX:
        blocks.append(POOLED_MAXFIRE)
    elif net.firing_style is FiringStyle.SERIAL:
        blocks.append(INTERLEAVED)
    return blocks


class _TimedEmitter:
    """Builds the time-indexed layout for one net and level."""

    def __init__(self, net: GuardedNet, level: EncodingLevel, reset_style: ResetStyle,
                 guards: Dict[str, LoweredGuard]):
        self.net = net
        self.level = level
        self.reset_style = reset_style
        self.guards = guards
        self.colored = level >= EncodingLevel.COLORED
        self.enabled = "prenabled" if level >= EncodingLevel.PRIORITY else "enabled"

    def count(self, place: str, n: int, color: str, ts: str = "TS") -> str:
        """`place,n,TS` or `place,n,color,TS`"""
        if self.colored:
            return f"{term(place)},{n},{color_term(color)},{ts}"
        return f"{term(place)},{n},{ts}"

    def _colors(self, color: Optional[str]) -> Sequence[str]:
        return (color,) if color is not None else self.net.colors

    def transition_group(self, t: TransitionDef) -> List[str]:
        tid, lines = term(t.id), []
        lowered = self.guards[t.id]
        resets = self.net.arcs_of(t.id, ArcKind.RESET)
        for arc in resets:
            p = term(arc.place)
            if self.reset_style is ResetStyle.STANDARD:
                lines.append(f"rptarc({p},{tid}).")
                continue
            for color in self._colors(arc.color):
                if self.colored:
                    c = color_term(color)
                    lines.append(f"ptarc({p},{tid},Q,{c},TS) :- holds({p},Q,{c},TS), num(Q), Q>0, time(TS).")
                else:
                    lines.append(f"ptarc({p},{tid},Q,TS) :- holds({p},Q,TS), Q>0, time(TS).")
        if resets and self.reset_style is ResetStyle.CONTENTION:
            lines.append(f":- {self.enabled}({tid},TS), not fires({tid},TS), time(TS).")

        if lowered.disabled:
            lines.append(f"notenabled({tid},TS) :- time(TS).")
        for arc in self.net.arcs_of(t.id, ArcKind.INHIBITOR):
            if arc.weight is None:
                for color in self.net.colors if self.colored else (DEFAULT_COLOR,):
                    lines.append(f"iptarc({self._arc_args(arc.place, tid, 1, color)}) :- time(TS).")
            else:
                lines.extend(self._weighted("iptarc", arc))
        for place, color, weight in lowered.inhibitors:
            lines.append(f"iptarc({self._arc_args(place, tid, weight, color)}) :- time(TS).")
        for arc in self.net.arcs_of(t.id, ArcKind.READ):
            lines.extend(self._weighted("tptarc", arc))
        for place, color, weight in lowered.reads:
            lines.append(f"tptarc({self._arc_args(place, tid, weight, color)}) :- time(TS).")
        for arc in self.net.arcs_of(t.id, ArcKind.INPUT):
            lines.extend(self._weighted("ptarc", arc))
        for arc in self.net.arcs_of(t.id, ArcKind.OUTPUT):
            lines.extend(self._outputs(t, arc))
        return lines

    def _arc_args(self, place: str, tid: str, weight: int, color: str) -> str:
        return f"{term(place)},{tid},{weight}" + (f",{color_term(color)}" if self.colored else "") + ",TS"

    def _weighted(self, predicate: str, arc: Arc) -> List[str]:
        tid = term(arc.transition)
        if not self.colored:
            return [f"{predicate}({self._arc_args(arc.place, tid, _weight(arc), DEFAULT_COLOR)}) :- time(TS)."]
        return [f"{predicate}({self._arc_args(arc.place, tid, n, color)}) :- time(TS)."
                for color, n in arc.weight.items()]

    def _outputs(self, t: TransitionDef, arc: Arc) -> List[str]:
        tid, p = term(t.id), term(arc.place)
        if not self.colored:
            return [f"tparc({tid},{p},{_weight(arc)},TS) :- time(TS)."]
        duration = f",{t.duration}" if self.level >= EncodingLevel.DURATIVE else ""
        return [f"tparc({tid},{p},{n},{color_term(color)},TS{duration}) :- time(TS)."
                for color, n in arc.weight.items()]

    def facts(self, k: int, cap: int) -> List[str]:
        net = self.net
        blocks = [f"#const nts={k}.\ntime(0..nts).", f"#const ntok={cap}.\nnum(0..ntok)."]
        if self.colored:
            blocks.append("\n".join(f"col({c})." for c in sorted(color_term(c) for c in net.colors)))
        if net.places:
            blocks.append("\n".join(f"place({term(p)})." for p in sorted(net.places)))
        if net.transitions:
            blocks.append("\n".join(f"trans({term(t)})." for t in sorted(net.transition_ids)))
        if self.level >= EncodingLevel.PRIORITY and net.transitions:
            blocks.append("\n".join(f"transpr({term(t.id)},{t.priority})."
                                    for t in sorted(net.transitions, key=lambda t: t.id)))
        for t in sorted(net.transitions, key=lambda t: t.id):
            group = self.transition_group(t)
            if group:
                blocks.append("\n".join(group))
        if net.places:
            blocks.append("\n".join(self.initial_holds()))
        return blocks

    def initial_holds(self) -> List[str]:
        marking = self.net.initial_marking
        if not self.colored:
            return [f"holds({self.count(p, marking[p].total(), DEFAULT_COLOR, '0')})." for p in sorted(self.net.places)]
        return [f"holds({self.count(p, marking[p][c], c, '0')})."
                for p in sorted(self.net.places)
                for c in sorted(self.net.colors, key=color_term)]

    def firing_pair(self) -> Optional[str]:
        style = self.net.firing_style
        if style is FiringStyle.SERIAL:
            return INTERLEAVED
        if style is FiringStyle.MAX:
            return TIMED_MAXFIRE.format(enabled=self.enabled, c=",C" if self.colored else "")
        return None

    def rules(self) -> List[str]:
        fires = FIRES.format(enabled=self.enabled)
        if not self.colored:
            notenabled = [NOTENABLED]
            if self.level >= EncodingLevel.INHIBIT:
                notenabled.append(NOTENABLED_INHIBIT)
            if self.level >= EncodingLevel.READ:
                notenabled.append(NOTENABLED_READ)
            next_state = STANDARD_RESET if self.reset_style is ResetStyle.STANDARD else NEXT_STATE
            return [MIN_RULES, HOLDSPOS, *notenabled, ENABLED, fires, ADD_DEL, TOTALS, next_state, CONSUMES_MORE]

        notenabled = COLORED_NOTENABLED
        if self.level >= EncodingLevel.DURATIVE and any(not t.reentrant for t in self.net.transitions):
            notenabled += "\n" + NON_REENTRANT
        blocks = [notenabled, ENABLED]
        if self.level >= EncodingLevel.PRIORITY:
            blocks.append(PRIORITY)
        add = DURATIVE_ADD if self.level >= EncodingLevel.DURATIVE else COLORED_ADD
        blocks += [fires, f"{add}\n{COLORED_DEL}", COLORED_TOTALS, COLORED_NEXT_STATE, COLORED_CONSUMES_MORE]
        return blocks


def emit_program(net: GuardedNet, level: Optional[EncodingLevel] = None, k: Optional[int] = None,
                 cap: Optional[int] = None, reset_style: ResetStyle = ResetStyle.CONTENTION) -> str:
    """
    Emit the answer-set program for a net.

    Args:
        net: The net, with its initial marking and firing style
        level: Encoding level; defaults to detect_level(net)
        k: Horizon (time(0..k)); defaults to the configured default steps
        cap: Largest token count (num(0..cap)); defaults to the configured max tokens
        reset_style: Reset arc semantics

    Returns:
        Program text ending in a newline; identical inputs give identical text

    Raises:
        UnsupportedFeature: if the net needs a higher level than requested,
            or uses a feature with no encoding
    """
    settings = get_settings()
    k = settings.default_steps if k is None else k
    cap = settings.default_max_tokens if cap is None else cap
    if k < 0:
        raise ValueError(f"Must use steps >= 0, got {k}")
    if cap < 1:
        raise ValueError(f"Must use max tokens >= 1, got {cap}")

    needed = detect_level(net)
    level = needed if level is None else EncodingLevel(level)
    if level < needed:
        raise UnsupportedFeature(f"Net needs encoding level {needed.name.lower()}, "
                                 f"but {level.name.lower()} was requested")
    if reset_style is ResetStyle.STANDARD and level >= EncodingLevel.COLORED:
        raise UnsupportedFeature("Standard reset semantics has no colored encoding")

    if level <= EncodingLevel.MAXFIRE:
        text = "\n\n".join(_pooled_program(net, k, cap))
    else:
        emitter = _TimedEmitter(net, level, reset_style, _check_supported(net))
        text = "\n\n".join(emitter.facts(k, cap))
        pair = emitter.firing_pair()
        if pair is not None:
            text += "\n\n\n" + pair
        text += "\n\n\n\n" + "\n\n".join(emitter.rules())
    logger.debug("Emitted %s program: %d places, %d transitions", level.name, len(net.places), len(net.transitions))
    return text + "\n"
