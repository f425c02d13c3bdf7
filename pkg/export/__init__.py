"""
ASP Export
==========
Answer-set program text for guarded-arc nets and query observations.
"""

from .asp import (
    EncodingLevel,
    LoweredGuard,
    ResetStyle,
    detect_level,
    emit_program,
    lower_guard,
)
from .observations import emit_observation_constraints

__all__ = [
    # Levels and options
    'EncodingLevel',
    'ResetStyle',

    # Emission
    'detect_level',
    'emit_program',
    'emit_observation_constraints',
    'lower_guard',
    'LoweredGuard',
]

__version__ = '1.0.0'
