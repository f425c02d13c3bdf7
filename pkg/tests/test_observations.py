import pytest

from model.errors import UnsupportedFeature
from model.guards import FluentRef
from export.observations import emit_observation_constraints
from query.ast import Accumulating, Decreasing, Interval, Observation, Occurs, Point, SwitchesTo
from query.parser import parse_observations


def test_switch():
    text = emit_observation_constraints([Observation(SwitchesTo("gly", "box"))], k=4)
    assert text.splitlines() == [
        "obs_1_occurred(TS+1) :- time(TS;TS+1), trans(gly;box),",
        "  fires(gly,TS), not fires(box,TS),",
        "  not fires(gly,TS+1), fires(box,TS+1).",
        "obs_1_occurred :- obs_1_occurred(TS), time(TS).",
        "obs_1_had_occurred(TSS) :- obs_1_occurred(TS), TS<=TSS, time(TSS;TS).",
        ":- not obs_1_occurred.",
    ]


def test_anchored_points_resolve_the_horizon():
    text = emit_observation_constraints([Observation(Occurs("t1"), point=Point("k")),
                                         Observation(SwitchesTo("a", "b"), point=Point(2))], k=6)
    assert "obs_1_occurred(TS) :- fires(t1,TS), trans(t1), time(TS), TS=6." in text
    assert "not fires(a,TS+1), fires(b,TS+1), TS+1=2." in text
    assert text.count(":- not obs_") == 2
    assert "\n\nobs_2_" in text


def test_decreasing_defaults_to_whole_run():
    text = emit_observation_constraints([Observation(Decreasing(FluentRef("nadh")))], k=5)
    assert "holds(nadh,Q1,TS), holds(nadh,Q2,TS+1)," in text
    assert "Q2<Q1, TS1=0, TS2=5." in text


def test_decreasing_colored():
    obs = Observation(Decreasing(FluentRef("h", "mm")), interval=Interval(1, 3))
    text = emit_observation_constraints([obs], k=5, colored=True)
    assert "obs_1_violated(TS) :- place(mm), col(h)," in text
    assert "holds(mm,Q1,h,TS), holds(mm,Q2,h,TS+1)," in text
    assert "TS>=1, TS+1<=3." in text


def test_parsed_observations():
    found = parse_observations("'gly' switches to 'box', 'box' occurs at time step 3")
    text = emit_observation_constraints(found, k=4)
    assert "obs_2_occurred(TS) :- fires(box,TS), trans(box), time(TS), TS=3." in text


def test_nothing_to_encode():
    assert emit_observation_constraints([], k=3) == ""


def test_unsupported():
    with pytest.raises(UnsupportedFeature):
        emit_observation_constraints([Observation(Accumulating(FluentRef("a")))], k=3)
