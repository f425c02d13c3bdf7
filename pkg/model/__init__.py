"""
Guarded-Arc Net Model
=====================
Colored multisets, guards, the guarded-arc Petri net and its structural
validation.
"""

from .diagnostics import Diagnostic
from .errors import (
    CapExceeded,
    CompileError,
    DegenerateInterval,
    NoTrajectories,
    NoWitness,
    PathQueryError,
    PathwaySyntaxError,
    QuerySyntaxError,
    TrajectoryLimitExceeded,
    Underflow,
    UnknownFluent,
    UnknownTarget,
    UnsupportedFeature,
)
from .guards import (
    TRUE,
    And,
    Atom,
    Condition,
    ConditionKind,
    FluentRef,
    Guard,
    Not,
    Or,
    TrueGuard,
    atom,
    conj,
    disj,
    find_model,
    guard_satisfied,
)
from .multiset import (
    DEFAULT_COLOR,
    EMPTY,
    ColoredMultiset,
    Marking,
    ms_add,
    ms_leq,
    ms_scale,
    ms_sub_saturating,
)
from .net import Arc, ArcKind, FiringStyle, GuardedNet, Stimulation, TransitionDef
from .validation import validate_net

__all__ = [
    # Multisets and markings
    'DEFAULT_COLOR',
    'EMPTY',
    'ColoredMultiset',
    'Marking',
    'ms_add',
    'ms_sub_saturating',
    'ms_scale',
    'ms_leq',

    # Guards
    'ConditionKind',
    'FluentRef',
    'Condition',
    'Guard',
    'TrueGuard',
    'TRUE',
    'Atom',
    'Not',
    'And',
    'Or',
    'atom',
    'conj',
    'disj',
    'guard_satisfied',
    'find_model',

    # Net
    'ArcKind',
    'Arc',
    'Stimulation',
    'TransitionDef',
    'FiringStyle',
    'GuardedNet',
    'validate_net',
    'Diagnostic',

    # Errors
    'PathQueryError',
    'Underflow',
    'UnknownFluent',
    'CapExceeded',
    'TrajectoryLimitExceeded',
    'PathwaySyntaxError',
    'QuerySyntaxError',
    'CompileError',
    'UnknownTarget',
    'DegenerateInterval',
    'NoTrajectories',
    'NoWitness',
    'UnsupportedFeature',
]

__version__ = '1.0.0'
