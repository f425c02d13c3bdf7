"""
Pathway Specification Language
==============================
Parser, consistency checker, compiler and renderer for pathway
specifications.
"""

from .ast import (
    RESET_ALL,
    DomainDecl,
    DomainKind,
    Duration,
    Effect,
    Inhibit,
    Initially,
    MayExecute,
    MustExecute,
    PathwaySpec,
    Priority,
    Stimulate,
)
from .compiler import compile_pathway
from .consistency import check_consistency, errors_only
from .parser import PathwayParser, parse_pathway
from .render import render_condition, render_pathway, render_statement

__all__ = [
    # AST
    'PathwaySpec',
    'DomainDecl',
    'DomainKind',
    'Effect',
    'RESET_ALL',
    'MayExecute',
    'MustExecute',
    'Inhibit',
    'Stimulate',
    'Initially',
    'Duration',
    'Priority',

    # Front end
    'PathwayParser',
    'parse_pathway',
    'check_consistency',
    'errors_only',
    'compile_pathway',

    # Rendering
    'render_pathway',
    'render_statement',
    'render_condition',
]

__version__ = '1.0.0'
