"""
Observation Constraints
=======================
Encodes query observations as ASP constraints that keep only the answer
sets (trajectories) satisfying them. Each observation n gets its own
`obs_<n>_*` predicates:

    obs_1_occurred(TS+1) :- time(TS;TS+1), trans(a1;a2),
      fires(a1,TS), not fires(a2,TS),
      not fires(a1,TS+1), fires(a2,TS+1).
    obs_1_occurred :- obs_1_occurred(TS), time(TS).
    obs_1_had_occurred(TSS) :- obs_1_occurred(TS), TS<=TSS, time(TSS;TS).
    :- not obs_1_occurred.

Supported: `switches to`, `occurs` (optionally at a step) and
`is decreasing` over an interval.
"""

import logging
from typing import List, Sequence

from model.errors import UnsupportedFeature
from model.guards import FluentRef
from query.ast import Decreasing, Observation, Occurs, SwitchesTo, resolve_step
from query.render import render_observation

from .asp import color_term, term

logger = logging.getLogger(__name__)


def _had_occurred(n: int) -> List[str]:
    return [
        f"obs_{n}_occurred :- obs_{n}_occurred(TS), time(TS).",
        f"obs_{n}_had_occurred(TSS) :- obs_{n}_occurred(TS), TS<=TSS, time(TSS;TS).",
        f":- not obs_{n}_occurred.",
    ]


def _switches(n: int, obs: Observation, k: int) -> List[str]:
    first, second = term(obs.formula.first), term(obs.formula.second)
    at = f", TS+1={resolve_step(obs.point.step, k)}" if obs.point is not None else ""
    return [
        f"obs_{n}_occurred(TS+1) :- time(TS;TS+1), trans({first};{second}),",
        f"  fires({first},TS), not fires({second},TS),",
        f"  not fires({first},TS+1), fires({second},TS+1){at}.",
    ] + _had_occurred(n)


def _occurs(n: int, obs: Observation, k: int) -> List[str]:
    action = term(obs.formula.action)
    at = f", TS={resolve_step(obs.point.step, k)}" if obs.point is not None else ""
    return [f"obs_{n}_occurred(TS) :- fires({action},TS), trans({action}), time(TS){at}."] + _had_occurred(n)


def _holds(ref: FluentRef, q: str, ts: str, colored: bool) -> str:
    if colored:
        return f"holds({term(ref.place)},{q},{color_term(ref.color)},{ts})"
    return f"holds({term(ref.place)},{q},{ts})"


def _decreasing(n: int, obs: Observation, k: int, colored: bool) -> List[str]:
    ref = obs.formula.ref
    i, j = obs.span(k)
    domain = f"place({term(ref.place)})" + (f", col({color_term(ref.color)})" if colored else "")
    return [
        f"obs_{n}_violated(TS) :- {domain},",
        f"  {_holds(ref, 'Q1', 'TS', colored)}, {_holds(ref, 'Q2', 'TS+1', colored)},",
        f"  num(Q1;Q2), Q2 > Q1, time(TS;TS+1), TS>={i}, TS+1<={j}.",
        f"obs_{n}_violated :- obs_{n}_violated(TS), time(TS).",
        "",
        f"obs_{n}_occurred(TS2) :- not obs_{n}_violated,",
        f"  {_holds(ref, 'Q1', 'TS1', colored)}, {_holds(ref, 'Q2', 'TS2', colored)}, "
        f"time(TS1;TS2), num(Q1;Q2),",
        f"  Q2<Q1, TS1={i}, TS2={j}.",
        f"obs_{n}_occurred :- obs_{n}_occurred(TS), time(TS).",
        "",
        f"obs_{n}_had_occurred(TSS) :- obs_{n}_occurred(TS), TS<=TSS, time(TSS;TS).",
        f":- not obs_{n}_occurred.",
    ]


def emit_observation_constraints(observations: Sequence[Observation], k: int, colored: bool = False) -> str:
    """
    Constraint blocks for observations, numbered from 1 in list order.

    Args:
        observations: Parsed observations
        k: Horizon; resolves the symbol k and unanchored intervals [0, k]
        colored: Emit 4-ary holds atoms, matching a colored program

    Returns:
        Blocks separated by blank lines; empty text for no observations

    Raises:
        UnsupportedFeature: for observation forms with no encoding
    """
    blocks = []
    for n, obs in enumerate(observations, start=1):
        formula = obs.formula
        if isinstance(formula, SwitchesTo):
            lines = _switches(n, obs, k)
        elif isinstance(formula, Occurs):
            lines = _occurs(n, obs, k)
        elif isinstance(formula, Decreasing):
            lines = _decreasing(n, obs, k, colored)
        else:
            raise UnsupportedFeature(f"Observation '{render_observation(obs)}' has no ASP encoding")
        blocks.append("\n".join(lines))
    logger.debug("Encoded %d observation(s)", len(blocks))
    return "\n\n".join(blocks) + "\n" if blocks else ""
