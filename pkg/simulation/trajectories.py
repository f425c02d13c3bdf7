"""
Trajectory Enumeration
======================
Exhaustive depth-first exploration of every firing-set choice up to a
horizon k, producing trajectories in a deterministic canonical order.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Tuple

from model.errors import TrajectoryLimitExceeded
from model.guards import FluentRef
from model.multiset import Marking
from model.net import FiringStyle, GuardedNet
from util.settings import get_settings

from .semantics import SimState, select_firing_sets, step

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Trajectory:
    """
    A run s_0, T_0, s_1, ..., T_{k-1}, s_k.

    `terminal` is the firing set chosen in the last state s_k, so actions
    occurring at step k are observable. A trajectory that hit a state with
    no possible firing set is kept with `complete=False` and the states
    reached so far.
    """
    states: Tuple[Marking, ...]
    firings: Tuple[FrozenSet[str], ...]
    terminal: FrozenSet[str] = frozenset()
    complete: bool = True
    halt_reason: Optional[str] = None

    @property
    def k(self) -> int:
        return len(self.states) - 1

    def fired_at(self, i: int) -> FrozenSet[str]:
        """T_i, including the terminal set at i == k"""
        if i < len(self.firings):
            return self.firings[i]
        if i == self.k:
            return self.terminal
        raise IndexError(f"step {i} outside trajectory of length {self.k}")

    def value(self, i: int, ref: FluentRef) -> int:
        return self.states[i][ref.place][ref.color]

    def to_dict(self) -> Dict[str, Any]:
        steps = range(len(self.states))
        return {
            "states": [self.states[i].to_dict() for i in steps],
            "firings": [sorted(self.fired_at(i)) for i in steps],
            "complete": self.complete,
            "halt_reason": self.halt_reason,
        }


def enumerate_trajectories(net: GuardedNet, k: int, style: Optional[FiringStyle] = None,
                           cap: Optional[int] = None, limit: Optional[int] = None) -> List[Trajectory]:
    """
    Enumerate all length-k trajectories of a net from its initial marking.

    Args:
        net: Net to simulate
        k: Horizon (number of steps)
        style: Firing style; defaults to the net's own style
        cap: Max tokens for uncapped places
        limit: Maximum number of trajectories before aborting

    Returns:
        Trajectories in canonical order (per step, firing sets by size then
        declaration order). Halted runs are included with complete=False.

    Raises:
        CapExceeded: if an uncapped place would exceed cap
        TrajectoryLimitExceeded: if more than `limit` trajectories exist
    """
    if k < 0:
        raise ValueError(f"Must use a horizon k >= 0, got {k}")
    settings = get_settings()
    cap = settings.default_max_tokens if cap is None else cap
    if cap < 1:
        raise ValueError(f"Must use max tokens >= 1, got {cap}")
    limit = settings.max_trajs if limit is None else limit
    style = net.firing_style if style is None else style

    results: List[Trajectory] = []
    branching: Dict[int, int] = {}

    def emit(traj: Trajectory) -> None:
        results.append(traj)
        if len(results) > limit:
            raise TrajectoryLimitExceeded(limit)

    def explore(state: SimState, states: List[Marking], firings: List[FrozenSet[str]]) -> None:
        candidates, note = select_firing_sets(net, state.marking, style, state.in_progress())
        branching[state.step] = max(branching.get(state.step, 0), len(candidates))
        if not candidates:
            reason = note.message if note else f"no possible firing set at step {state.step}"
            logger.info("Run halted: %s", reason)
            emit(Trajectory(tuple(states), tuple(firings), frozenset(), False, reason))
            return
        for firing in candidates:
            if state.step == k:
                emit(Trajectory(tuple(states), tuple(firings), firing))
                continue
            nxt = step(net, state, firing, cap)
            explore(nxt, states + [nxt.marking], firings + [firing])

    initial = SimState(0, net.initial_marking)
    explore(initial, [initial.marking], [])

    logger.debug("Branching per step: %s", branching)
    logger.debug("Enumerated %d trajectories (k=%d, style=%s)", len(results), k, style.value)
    return results


def complete_trajectories(trajs: List[Trajectory]) -> List[Trajectory]:
    """Drop halted runs."""
    return [t for t in trajs if t.complete]


def iter_values(trajs: List[Trajectory], i: int, ref: FluentRef) -> Iterator[int]:
    for t in trajs:
        yield t.value(i, ref)
