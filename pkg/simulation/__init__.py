"""
Net Simulation
==============
Firing semantics of guarded-arc Petri nets and exhaustive trajectory
enumeration.
"""

from .semantics import (
    PendingProduction,
    SimState,
    candidate_firing_sets,
    consumption,
    enabled_set,
    must_fire_set,
    overconsumed,
    priority_filter,
    select_firing_sets,
    step,
    stimulation_factor,
)
from .trajectories import Trajectory, complete_trajectories, enumerate_trajectories

__all__ = [
    # Single-step semantics
    'stimulation_factor',
    'enabled_set',
    'must_fire_set',
    'consumption',
    'overconsumed',
    'priority_filter',
    'candidate_firing_sets',
    'select_firing_sets',
    'step',

    # State
    'SimState',
    'PendingProduction',

    # Trajectories
    'Trajectory',
    'enumerate_trajectories',
    'complete_trajectories',
]

__version__ = '1.0.0'
