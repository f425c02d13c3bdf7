"""
Guarded-Arc Petri Net
=====================
Places, transitions and guarded arcs, with per-color caps, priorities,
durations, stimulation and must-fire guards. All values are immutable.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

from .guards import TRUE, Guard
from .multiset import DEFAULT_COLOR, ColoredMultiset, Marking


class ArcKind(Enum):
    """Kinds of arcs between places and transitions"""
    INPUT = "input"
    OUTPUT = "output"
    RESET = "reset"
    INHIBITOR = "inhibitor"
    READ = "read"


class FiringStyle(Enum):
    """How many enabled transitions may fire in one step"""
    SERIAL = "1"
    ANY = "*"
    MAX = "max"

    @classmethod
    def parse(cls, text: str) -> "FiringStyle":
        for style in cls:
            if style.value == text or style.name.lower() == text.lower():
                return style
        raise ValueError(f"Must be one of 1, *, max; got '{text}'")


@dataclass(frozen=True)
class Arc:
    """
    A guarded arc. INPUT/READ/RESET/INHIBITOR arcs run place -> transition,
    OUTPUT arcs run transition -> place.

    A RESET arc has no weight; `color` restricts it to a single color
    (None empties every color). An INHIBITOR arc without a weight blocks
    on one token of any color.
    """
    kind: ArcKind
    place: str
    transition: str
    weight: Optional[ColoredMultiset] = None
    guard: Guard = TRUE
    color: Optional[str] = None

    def __post_init__(self):
        if self.kind is ArcKind.RESET:
            if self.weight is not None:
                raise ValueError(f"Must not weight reset arc {self.place}->{self.transition}")
        elif self.kind is not ArcKind.INHIBITOR:
            if self.weight is None or not len(self.weight):
                raise ValueError(f"Must give a nonempty weight to {self.kind.value} arc {self.place}/{self.transition}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "place": self.place,
            "transition": self.transition,
            "weight": self.weight.to_dict() if self.weight is not None else None,
            "guard": str(self.guard),
            "color": self.color,
        }


@dataclass(frozen=True)
class Stimulation:
    """Marking-dependent factor scaling consumption and production"""
    guard: Guard
    factor: int

    def __post_init__(self):
        if self.factor < 1:
            raise ValueError(f"Must use a stimulation factor >= 1, got {self.factor}")


@dataclass(frozen=True)
class TransitionDef:
    """A transition with its guard, priority, duration and modifiers"""
    id: str
    guard: Guard = TRUE
    priority: int = 1
    duration: int = 1
    stimulation: Optional[Stimulation] = None
    must_fire_guards: Tuple[Guard, ...] = ()
    reentrant: bool = True

    def __post_init__(self):
        if self.duration < 1:
            raise ValueError(f"Must use a duration >= 1 for '{self.id}', got {self.duration}")
        if self.priority < 1:
            raise ValueError(f"Must use a priority >= 1 for '{self.id}', got {self.priority}")


@dataclass(frozen=True)
class GuardedNet:
    """
    A guarded-arc Petri net with its initial marking.

    Places and transitions keep declaration order, which fixes the canonical
    ordering of trajectories. `caps` maps (place, color) to 1 for binary
    fluents; anything absent is unbounded.
    """
    places: Tuple[str, ...]
    transitions: Tuple[TransitionDef, ...]
    arcs: Tuple[Arc, ...]
    initial_marking: Marking
    colors: Tuple[str, ...] = (DEFAULT_COLOR,)
    caps: Mapping[Tuple[str, str], int] = field(default_factory=dict)
    firing_style: FiringStyle = FiringStyle.MAX

    @classmethod
    def build(cls, places: Iterable[str], transitions: Iterable[TransitionDef], arcs: Iterable[Arc],
              initial: Optional[Mapping[str, Any]] = None, colors: Iterable[str] = (DEFAULT_COLOR,),
              caps: Optional[Mapping[Tuple[str, str], int]] = None,
              firing_style: FiringStyle = FiringStyle.MAX) -> "GuardedNet":
        """
        Convenience constructor. `initial` values may be ColoredMultisets,
        color->count dicts, or plain integers for the default color.
        """
        places = tuple(places)
        colors = tuple(colors)
        initial = initial or {}
        marking: Dict[str, ColoredMultiset] = {}
        for p in places:
            value = initial.get(p, 0)
            if isinstance(value, int):
                value = ColoredMultiset.single(value)
            marking[p] = ColoredMultiset(value)
        return cls(places, tuple(transitions), tuple(arcs), Marking(marking, colors),
                   colors, dict(caps or {}), firing_style)

    @property
    def transition_ids(self) -> Tuple[str, ...]:
        return tuple(t.id for t in self.transitions)

    @property
    def is_colored(self) -> bool:
        return tuple(self.colors) != (DEFAULT_COLOR,)

    def transition(self, tid: str) -> TransitionDef:
        for t in self.transitions:
            if t.id == tid:
                return t
        raise KeyError(tid)

    def arcs_of(self, tid: str, *kinds: ArcKind) -> List[Arc]:
        return [a for a in self.arcs if a.transition == tid and (not kinds or a.kind in kinds)]

    def cap(self, place: str, color: str) -> Optional[int]:
        return self.caps.get((place, color))

    def order(self, tid: str) -> int:
        """Declaration index of a transition"""
        return self.transition_ids.index(tid)

    def with_style(self, style: FiringStyle) -> "GuardedNet":
        return GuardedNet(self.places, self.transitions, self.arcs, self.initial_marking,
                          self.colors, self.caps, style)

    def non_reentrant(self) -> "GuardedNet":
        transitions = tuple(
            TransitionDef(t.id, t.guard, t.priority, t.duration, t.stimulation, t.must_fire_guards, False)
            for t in self.transitions
        )
        return GuardedNet(self.places, transitions, self.arcs, self.initial_marking,
                          self.colors, self.caps, self.firing_style)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "places": list(self.places),
            "colors": list(self.colors),
            "transitions": [
                {
                    "id": t.id,
                    "guard": str(t.guard),
                    "priority": t.priority,
                    "duration": t.duration,
                    "stimulation": (
                        {"guard": str(t.stimulation.guard), "factor": t.stimulation.factor}
                        if t.stimulation else None
                    ),
                    "must_fire": [str(g) for g in t.must_fire_guards],
                    "reentrant": t.reentrant,
                }
                for t in self.transitions
            ],
            "arcs": [a.to_dict() for a in self.arcs],
            "initial_marking": self.initial_marking.to_dict(),
            "caps": [{"place": p, "color": c, "cap": n} for (p, c), n in sorted(self.caps.items())],
            "firing_style": self.firing_style.value,
        }
