"""
Query Language
==============
Query statements over pathway specifications: parsing, rendering,
interventions and evaluation.
"""

from .ast import (
    Aggregate,
    Description,
    Direction,
    Hole,
    Interval,
    Measure,
    Observation,
    Point,
    Quantity,
    QueryStatement,
)
from .engine import (
    QueryResult,
    ResultKind,
    eval_aggregate,
    eval_comparative,
    evaluate,
    explain_condition,
    simulate_spec,
)
from .formulas import filter_trajectories, format_number, interval_holds, point_holds, quantity_value
from .interventions import apply_intervention, build_domains
from .parser import QueryParser, parse_observations, parse_query
from .render import echo_query, render_query

__all__ = [
    # AST
    'QueryStatement',
    'Description',
    'Observation',
    'Quantity',
    'Measure',
    'Aggregate',
    'Direction',
    'Hole',
    'Interval',
    'Point',

    # Front end
    'QueryParser',
    'parse_query',
    'parse_observations',
    'render_query',
    'echo_query',

    # Evaluation
    'apply_intervention',
    'build_domains',
    'simulate_spec',
    'filter_trajectories',
    'quantity_value',
    'interval_holds',
    'point_holds',
    'eval_aggregate',
    'eval_comparative',
    'explain_condition',
    'evaluate',
    'QueryResult',
    'ResultKind',
    'format_number',
]

__version__ = '1.0.0'
