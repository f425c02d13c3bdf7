"""
Error Types
===========
Exception hierarchy shared by every pathquery package.
"""

from typing import Iterable, List, Optional


class PathQueryError(Exception):
    """Base class for all library errors"""


class Underflow(PathQueryError):
    """A multiset subtraction would drive a count negative"""

    def __init__(self, color: str, have: int, take: int):
        self.color = color
        self.have = have
        self.take = take
        super().__init__(f"Underflow on color '{color}': {have} - {take} < 0")


class UnknownFluent(PathQueryError):
    """A guard references a place or color that does not exist"""


class CapExceeded(PathQueryError):
    """An un-capped place grew beyond the simulation token cap"""

    def __init__(self, place: str, color: str, count: int, cap: int):
        self.place = place
        self.color = color
        self.count = count
        self.cap = cap
        super().__init__(
            f"Place '{place}' color '{color}' reached {count} tokens, above max tokens {cap}"
        )


class TrajectoryLimitExceeded(PathQueryError):
    """Enumeration produced more trajectories than allowed"""

    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(f"Trajectory enumeration exceeded the limit of {limit}")


class _LocatedSyntaxError(PathQueryError):
    """Syntax error carrying a source position and the expected tokens"""

    kind = "syntax"

    def __init__(self, message: str, line: int = 0, column: int = 0,
                 expected: Optional[Iterable[str]] = None):
        self.line = line
        self.column = column
        self.expected: List[str] = sorted(set(expected or []))
        self.detail = message
        super().__init__(f"{self.kind} error at line {line}, column {column}: {message}")


class PathwaySyntaxError(_LocatedSyntaxError):
    """Malformed pathway specification text"""

    kind = "pathway syntax"


class QuerySyntaxError(_LocatedSyntaxError):
    """Malformed query statement text"""

    kind = "query syntax"


class CompileError(PathQueryError):
    """A pathway specification cannot be turned into a net"""


class UnknownTarget(PathQueryError):
    """An intervention names a fluent or action absent from the pathway"""


class DegenerateInterval(PathQueryError):
    """Interval formula evaluated with i >= j"""


class NoTrajectories(PathQueryError):
    """An aggregate was requested over an empty trajectory set"""


class NoWitness(PathQueryError):
    """No trajectory satisfies the cascade being explained"""


class UnsupportedFeature(PathQueryError):
    """The requested operation does not cover a feature used by the net"""
