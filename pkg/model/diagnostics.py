"""
Diagnostics
===========
Structured findings reported by validation and consistency checks.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Tuple


@dataclass(frozen=True)
class Diagnostic:
    """A single violated constraint and the elements involved"""
    code: str
    message: str
    elements: Tuple[str, ...] = field(default_factory=tuple)
    severity: str = "error"

    def to_dict(self) -> Dict[str, Any]:
        return {"code": self.code, "message": self.message, "elements": list(self.elements),
                "severity": self.severity}

    def __str__(self) -> str:
        where = f" [{', '.join(self.elements)}]" if self.elements else ""
        return f"{self.severity}: {self.code}: {self.message}{where}"
