from fractions import Fraction

import pytest

from model.errors import DegenerateInterval
from model.guards import Condition, ConditionKind, FluentRef
from model.multiset import ColoredMultiset, Marking
from query.ast import (
    Accumulating,
    AfterCascade,
    Aggregate,
    Decreasing,
    DoesNotOccur,
    Interval,
    Measure,
    Observation,
    Occurs,
    Point,
    QuantitativeFormula,
    Quantity,
    Relation,
    SwitchesTo,
    WhenCascade,
)
from query.formulas import (
    aggregate,
    candidate_conditions,
    cascade_points,
    filter_trajectories,
    interval_holds,
    observation_holds,
    order_conditions,
    point_holds,
    quantity_value,
    quantity_values,
    weakest_conditions,
)
from simulation.trajectories import Trajectory

A = FluentRef("a")


def run(values, firings, terminal=()):
    states = tuple(Marking({"a": ColoredMultiset.single(v)}) for v in values)
    return Trajectory(states, tuple(frozenset(f) for f in firings), frozenset(terminal))


@pytest.fixture
def rising():
    """a: 0 2 4 4; t1 fires at steps 0 and 1, t2 at the last step."""
    return run([0, 2, 4, 4], [{"t1"}, {"t1"}, set()], {"t2"})


class TestQuantities:
    def test_value(self, rising):
        assert quantity_value(rising, Quantity(Measure.VALUE, A), 2) == 4

    def test_rates_and_totals(self, rising):
        assert quantity_value(rising, Quantity(Measure.RATE_OF_PRODUCTION, A), 0, 3) == Fraction(4, 3)
        assert quantity_value(rising, Quantity(Measure.TOTAL_PRODUCTION, A), 1, 3) == 2
        assert quantity_value(rising, Quantity(Measure.RATE_OF_FIRING, "t1"), 0, 3) == Fraction(2, 3)

    def test_firing_rate_excludes_interval_end(self, rising):
        assert quantity_value(rising, Quantity(Measure.RATE_OF_FIRING, "t2"), 0, 3) == 0

    @pytest.mark.parametrize("i, j", [(2, 2), (3, 1)])
    def test_degenerate_interval(self, rising, i, j):
        with pytest.raises(DegenerateInterval):
            quantity_value(rising, Quantity(Measure.TOTAL_PRODUCTION, A), i, j)

    def test_per_trajectory_values(self, rising):
        flat = run([1, 1, 1, 1], [set(), set(), set()])
        quantity = Quantity(Measure.VALUE, A)
        assert quantity_values([rising, flat], quantity, Observation(Occurs("t1"))) == [4, 1]
        assert quantity_values([rising, flat], quantity, Observation(Occurs("t1"), point=Point(1))) == [2, 1]
        rate = Quantity(Measure.RATE_OF_PRODUCTION, A)
        assert quantity_values([rising, flat], rate, Observation(Occurs("t1"), interval=Interval(0, 2))) == [2, 0]

    def test_aggregates(self):
        values = [Fraction(1), Fraction(2), Fraction(1, 2)]
        assert aggregate(values, Aggregate.AVG) == Fraction(7, 6)
        assert aggregate(values, Aggregate.MIN) == Fraction(1, 2)
        assert aggregate(values, Aggregate.MAX) == 2
        with pytest.raises(ValueError):
            aggregate([], Aggregate.AVG)


class TestPointFormulas:
    def test_terminal_firing_is_observable(self, rising):
        assert point_holds(rising, Occurs("t2"), 3)
        assert not point_holds(rising, Occurs("t2"), 2)

    def test_value_relations(self, rising):
        quantity = Quantity(Measure.VALUE, A)
        assert point_holds(rising, QuantitativeFormula(quantity, Fraction(2), Relation.EQ), 1)
        assert point_holds(rising, QuantitativeFormula(quantity, Fraction(3), Relation.HIGHER), 2)
        assert point_holds(rising, QuantitativeFormula(quantity, Fraction(1), Relation.LOWER), 0)

    def test_switch(self):
        traj = run([0, 0, 0], [{"t1"}, {"t2"}], {"t1", "t2"})
        assert not point_holds(traj, SwitchesTo("t1", "t2"), 0)
        assert point_holds(traj, SwitchesTo("t1", "t2"), 1)
        assert not point_holds(traj, SwitchesTo("t1", "t2"), 2)


class TestIntervalFormulas:
    def test_accumulating(self, rising):
        assert interval_holds(rising, Accumulating(A), 0, 3)
        assert not interval_holds(rising, Accumulating(A), 2, 3)
        assert not interval_holds(rising, Decreasing(A), 0, 3)

    def test_decreasing_needs_strict_drop(self):
        falling = run([5, 3, 3, 1], [set(), set(), set()])
        assert interval_holds(falling, Decreasing(A), 0, 3)
        assert not interval_holds(falling, Decreasing(A), 1, 2)
        bumpy = run([5, 6, 1], [set(), set()])
        assert not interval_holds(bumpy, Decreasing(A), 0, 2)


class TestObservations:
    def test_unanchored(self, rising):
        assert observation_holds(rising, Observation(Occurs("t1")))
        assert observation_holds(rising, Observation(DoesNotOccur("t3")))
        assert not observation_holds(rising, Observation(DoesNotOccur("t1")))

    def test_anchored(self, rising):
        assert not observation_holds(rising, Observation(Occurs("t1"), point=Point(2)))
        assert observation_holds(rising, Observation(Occurs("t2"), point=Point("k")))
        assert observation_holds(rising, Observation(Accumulating(A), interval=Interval(0, 2)))

    def test_filter(self, rising):
        flat = run([1, 1, 1, 1], [set(), set(), set()])
        assert filter_trajectories([rising, flat], [Observation(Occurs("t1"))]) == [rising]
        assert filter_trajectories([rising, flat], []) == [rising, flat]


class TestCascades:
    def test_when(self, rising):
        value_two = QuantitativeFormula(Quantity(Measure.VALUE, A), Fraction(2))
        assert cascade_points(rising, WhenCascade(Occurs("t1"), (value_two,))) == [1]

    def test_after_is_strictly_earlier(self, rising):
        assert cascade_points(rising, AfterCascade(Occurs("t2"), ((Occurs("t1"),),))) == [3]
        assert cascade_points(rising, AfterCascade(Occurs("t1"), ((Occurs("t1"),),))) == [1]
        chain = ((Occurs("t1"),), (Occurs("t1"),))
        assert cascade_points(rising, AfterCascade(Occurs("t2"), chain)) == [3]
        assert cascade_points(rising, AfterCascade(Occurs("t1"), chain)) == []


class TestExplanationCandidates:
    def test_candidates_and_order(self):
        marking = Marking({"a": ColoredMultiset.single(2), "b": ColoredMultiset.single(0)})
        refs = [FluentRef("b"), A]
        found = candidate_conditions(marking, refs)
        assert order_conditions(found, refs) == [
            Condition(ConditionKind.EQ, FluentRef("b"), 0),
            Condition(ConditionKind.LT, FluentRef("b"), 1),
            Condition(ConditionKind.GT, A, 0),
            Condition(ConditionKind.GT, A, 1),
            Condition(ConditionKind.EQ, A, 2),
            Condition(ConditionKind.LT, A, 3),
        ]

    def test_weakest_bounds_survive(self):
        b = FluentRef("b")
        found = {
            Condition(ConditionKind.GT, A, 0), Condition(ConditionKind.GT, A, 1), Condition(ConditionKind.GT, A, 2),
            Condition(ConditionKind.LT, b, 4), Condition(ConditionKind.LT, b, 6), Condition(ConditionKind.EQ, b, 3),
        }
        assert weakest_conditions(found) == {
            Condition(ConditionKind.GT, A, 0), Condition(ConditionKind.LT, b, 6), Condition(ConditionKind.EQ, b, 3),
        }
