"""Properties of the step semantics over 500 seeded random nets."""

import numpy as np

from model.multiset import EMPTY, ms_add, ms_leq
from model.net import ArcKind, FiringStyle
from simulation.semantics import (
    SimState,
    candidate_firing_sets,
    consumption,
    enabled_set,
    overconsumed,
    step,
)
from simulation.trajectories import enumerate_trajectories

from random_nets import random_net

N_NETS = 500


def nets(seed, **options):
    rng = np.random.default_rng(seed)
    for _ in range(N_NETS):
        yield random_net(rng, **options)


def test_candidates_are_enabled_and_feasible():
    for net in nets(1):
        marking = net.initial_marking
        enabled = enabled_set(net, marking)
        for style in FiringStyle:
            for firing in candidate_firing_sets(net, marking, style):
                assert firing <= enabled
                assert not overconsumed(net, marking, firing)


def test_max_sets_are_any_sets_and_maximal():
    for net in nets(2):
        marking = net.initial_marking
        enabled = enabled_set(net, marking)
        any_sets = set(candidate_firing_sets(net, marking, FiringStyle.ANY))
        for firing in candidate_firing_sets(net, marking, FiringStyle.MAX):
            assert firing in any_sets
            for t in enabled - firing:
                assert overconsumed(net, marking, firing | {t})


def test_serial_sets_have_at_most_one_transition():
    for net in nets(3):
        for firing in candidate_firing_sets(net, net.initial_marking, FiringStyle.SERIAL):
            assert len(firing) <= 1


def test_empty_set_allowed_without_obligations():
    for net in nets(4, must_fire=False, resets=False):
        assert frozenset() in candidate_firing_sets(net, net.initial_marking, FiringStyle.ANY)


def test_step_balances_tokens():
    for net in nets(5, binary_caps=False):
        marking = net.initial_marking
        for firing in candidate_firing_sets(net, marking, FiringStyle.ANY):
            after = step(net, SimState(0, marking), firing, max_tokens=10_000).marking
            demand = consumption(net, marking, firing)
            for place in net.places:
                produced = EMPTY
                for tid in firing:
                    for arc in net.arcs_of(tid, ArcKind.OUTPUT):
                        if arc.place == place:
                            produced = ms_add(produced, arc.weight)
                assert ms_add(after[place], demand[place]) == ms_add(marking[place], produced)


def test_binary_caps_hold_on_every_state():
    for net in nets(6, binary_caps=True):
        for traj in enumerate_trajectories(net, 2, cap=500, limit=100_000):
            for marking in traj.states:
                for (place, color), cap in net.caps.items():
                    assert marking[place][color] <= cap


def test_durative_runs_are_well_formed():
    for net in nets(7, durations=True, max_transitions=3):
        trajs = enumerate_trajectories(net, 3, cap=500, limit=100_000)
        assert trajs
        for traj in trajs:
            assert len(traj.firings) == traj.k
            if traj.complete:
                assert traj.k == 3
        keys = [tuple(traj.states) + tuple(traj.firings) + (traj.terminal,) for traj in trajs]
        assert len(keys) == len(set(keys))


def test_priorities_fire_only_the_best_level():
    for net in nets(8, priorities=True):
        marking = net.initial_marking
        for firing in candidate_firing_sets(net, marking, FiringStyle.ANY):
            levels = {net.transition(t).priority for t in firing}
            assert len(levels) <= 1


def test_requested_marking_is_covered():
    for net in nets(9, resets=False):
        marking = net.initial_marking
        for firing in candidate_firing_sets(net, marking, FiringStyle.MAX):
            for place, need in consumption(net, marking, firing).items():
                assert ms_leq(need, marking[place])
