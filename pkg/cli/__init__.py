"""
CLI
===
Command-line front end: simulate, query, export-asp and validate.
"""

from .main import RunConfig, build_parser, render_answer, render_trajectory, run, trajectories_json

__all__ = [
    'RunConfig',
    'build_parser',
    'run',

    # Renderers shared with the HTTP backend
    'render_trajectory',
    'render_answer',
    'trajectories_json',
]

__version__ = '1.0.0'
