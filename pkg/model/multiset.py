"""
Colored Multisets
=================
Immutable color -> count mappings used for tokens, arc weights and markings.
Simple (uncolored) nets use the single reserved color DEFAULT_COLOR.
"""

from collections import Counter
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

from .errors import Underflow

DEFAULT_COLOR = "_"


class ColoredMultiset(Mapping):
    """
    A multiset over colors. Zero counts are never stored, so two multisets
    are equal exactly when their nonzero entries agree.
    """

    __slots__ = ("_counts", "_hash")

    def __init__(self, counts: Optional[Union[Mapping[str, int], Iterable[Tuple[str, int]]]] = None):
        items = counts.items() if isinstance(counts, Mapping) else (counts or [])
        stored: Dict[str, int] = {}
        for color, n in items:
            if int(n) != n or n < 0:
                raise ValueError(f"Must use non-negative integer counts, got {color}={n}")
            if n:
                stored[color] = stored.get(color, 0) + int(n)
        self._counts = dict(sorted(stored.items()))
        self._hash = None

    @classmethod
    def single(cls, count: int, color: str = DEFAULT_COLOR) -> "ColoredMultiset":
        return cls({color: count})

    def __getitem__(self, color: str) -> int:
        return self._counts.get(color, 0)

    def __contains__(self, color: object) -> bool:
        return color in self._counts

    def __iter__(self) -> Iterator[str]:
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ColoredMultiset):
            return self._counts == other._counts
        if isinstance(other, Mapping):
            return self._counts == {c: n for c, n in other.items() if n}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._counts.items()))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{c}:{n}" for c, n in self._counts.items())
        return "{" + inner + "}"

    def __add__(self, other: "ColoredMultiset") -> "ColoredMultiset":
        return ms_add(self, other)

    def __le__(self, other: "ColoredMultiset") -> bool:
        return ms_leq(self, other)

    def total(self) -> int:
        return sum(self._counts.values())

    def restrict(self, color: str) -> "ColoredMultiset":
        """Keep only the given color"""
        return ColoredMultiset({color: self[color]})

    def to_dict(self) -> Dict[str, int]:
        return dict(self._counts)


EMPTY = ColoredMultiset()


def ms_add(a: ColoredMultiset, b: ColoredMultiset) -> ColoredMultiset:
    """Pointwise sum per color."""
    total = Counter(a.to_dict())
    total.update(b.to_dict())
    return ColoredMultiset(total)


def ms_sub_saturating(a: ColoredMultiset, b: ColoredMultiset) -> ColoredMultiset:
    """
    Pointwise difference a - b.

    Raises:
        Underflow: if b exceeds a on any color
    """
    result = dict(a.to_dict())
    for color, n in b.items():
        have = result.get(color, 0)
        if n > have:
            raise Underflow(color, have, n)
        result[color] = have - n
    return ColoredMultiset(result)


def ms_scale(a: ColoredMultiset, n: int) -> ColoredMultiset:
    """Multiply every count by n (n >= 1)."""
    if n < 1:
        raise ValueError(f"Must scale by a positive integer, got {n}")
    return ColoredMultiset({c: k * n for c, k in a.items()})


def ms_leq(a: ColoredMultiset, b: ColoredMultiset) -> bool:
    """True iff a <= b on every color."""
    return all(n <= b[c] for c, n in a.items())


def ms_clamp(a: ColoredMultiset, caps: Mapping[str, int]) -> ColoredMultiset:
    """Clamp each color to its cap; colors without a cap are left alone."""
    return ColoredMultiset({c: min(n, caps[c]) if c in caps else n for c, n in a.items()})


class Marking(Mapping):
    """
    Token assignment of every place: place-id -> ColoredMultiset.
    `colors` is the color universe of the net the marking belongs to.
    """

    __slots__ = ("_places", "colors", "_hash")

    def __init__(self, places: Mapping[str, ColoredMultiset], colors: Iterable[str] = (DEFAULT_COLOR,)):
        self._places = {p: ColoredMultiset(places[p]) for p in places}
        self.colors = frozenset(colors)
        self._hash = None

    def __getitem__(self, place: str) -> ColoredMultiset:
        return self._places[place]

    def __iter__(self) -> Iterator[str]:
        return iter(self._places)

    def __len__(self) -> int:
        return len(self._places)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Marking):
            return self._places == other._places
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._places.items())))
        return self._hash

    def __repr__(self) -> str:
        return "Marking(" + ", ".join(f"{p}={m!r}" for p, m in self._places.items()) + ")"

    def count(self, place: str, color: str = DEFAULT_COLOR) -> int:
        return self._places[place][color]

    def replace(self, updates: Mapping[str, ColoredMultiset]) -> "Marking":
        merged = dict(self._places)
        merged.update(updates)
        return Marking(merged, self.colors)

    def to_dict(self) -> Dict[str, Dict[str, int]]:
        return {p: m.to_dict() for p, m in self._places.items()}
