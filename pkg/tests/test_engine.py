from fractions import Fraction

import pytest

from model.errors import (
    DegenerateInterval,
    NoTrajectories,
    NoWitness,
    TrajectoryLimitExceeded,
    UnknownTarget,
)
from model.guards import Condition, ConditionKind, FluentRef
from pathway.parser import parse_pathway
from query.ast import Direction
from query.engine import ResultKind, evaluate, simulate_spec
from query.interventions import build_domains
from query.parser import parse_query
from query.render import echo_query

from conftest import fixture_path, load_query, load_spec


def ask(pathway, query, k, cap=60, **kwargs):
    stmt = load_query(query) if query.endswith(".qry") else parse_query(query)
    return evaluate(load_spec(pathway), stmt, k=k, cap=cap, **kwargs)


class TestValueQueries:
    def test_reachable_values_with_reset(self):
        result = ask("glycolysis.pw", "glycolysis_reset.qry", k=10)
        assert result.kind is ResultKind.VALUES
        assert result.value == tuple(Fraction(n) for n in range(0, 17, 2))
        assert result.modified_count == 512
        assert result.holes == {"n": result.value}

    def test_all_values_in_canonical_order(self):
        result = ask("glycolysis.pw", "values of 'bpg13' are v at time step k;", k=10)
        assert result.kind is ResultKind.VALUES
        assert result.value == (Fraction(14), Fraction(16))

    def test_existential_and_universal(self):
        assert ask("glycolysis.pw", "value of 'bpg13' is 16 at time step k;", k=10).value is True
        assert ask("glycolysis.pw", "value of 'bpg13' is 16 at time step k in all trajectories;", k=10).value is False
        assert ask("glycolysis.pw", "value of 'bpg13' is higher than 13 at time step k in all trajectories;",
                   k=10).value is True


class TestAggregates:
    @pytest.mark.parametrize("pathway, query, expected", [
        ("atp_inhibition.pw", "atp_pyruvate.qry", 20),
        ("atp_inhibition_reduced.pw", "atp_pyruvate.qry", 14),
        ("atp_inhibition.pw", "atp_no_work.qry", 6),
    ])
    def test_atp_feedback(self, pathway, query, expected):
        result = ask(pathway, query, k=10)
        assert result.kind is ResultKind.NUMBER
        assert result.value == expected

    @pytest.mark.parametrize("query, expected", [("atp_pyruvate.qry", 10), ("nadh_no_oxidation.qry", 6)])
    def test_nadh_oxidation(self, query, expected):
        assert ask("nadh_oxidation.pw", query, k=5).value == expected

    @pytest.mark.parametrize("disabled, steps", [(False, {0, 1, 2, 3, 4}), (True, {0, 1, 2})])
    def test_glycolysis_stalls_without_oxidation(self, disabled, steps):
        spec = load_spec("nadh_oxidation.pw")
        if disabled:
            _, spec = build_domains(spec, load_query("nadh_no_oxidation.qry"))
        trajs = simulate_spec(spec, 5, cap=60)
        assert len(trajs) == 1
        assert {i for i in range(5) if "gly1" in trajs[0].fired_at(i)} == steps
        assert trajs[0].value(5, FluentRef("pyr")) == 2 * len(steps)

    @pytest.mark.parametrize("duration, expected", [(1, 27), (2, 24), (4, 18)])
    def test_membrane_fluidity(self, duration, expected):
        text = fixture_path("etc_fluidity.pw").read_text(encoding="utf-8")
        text += f"\ntq executes in {duration} time units\ntcytc executes in {duration} time units\n"
        result = evaluate(parse_pathway(text), parse_query("average value of 'h' atloc 'is' is n at time step k;"),
                          k=10, cap=30)
        assert result.modified_count == 1
        assert result.value == expected

    def test_test_drug_blocks_metabolism(self):
        assert ask("gefitinib.pw", "gefitinib_test_drug.qry", k=5).value == 20

    @pytest.mark.parametrize("query, expected", [("morphine_poor.qry", 5), ("morphine_effective.qry", 10)])
    def test_morphine_alleles(self, query, expected):
        assert ask("morphine.pw", query, k=5).value == expected

    def test_filtered_to_nothing(self):
        with pytest.raises(NoTrajectories):
            ask("glycolysis.pw", "average value of 'bpg13' is n; due to observations: 't3' does not occur;", k=3)


class TestComparative:
    def test_rate_with_reset_and_supply(self):
        stmt = load_query("isomerase_dhap_removal.qry")
        result = evaluate(load_spec("isomerase.pw"), stmt, k=5, cap=20)
        assert result.kind is ResultKind.DIRECTION
        assert result.value is Direction.LT
        assert (result.nominal_count, result.modified_count) == (2, 16)
        assert (result.nominal_value, result.modified_value) == (Fraction(1), Fraction(3, 5))
        assert "is '<' (0.6<1)" in echo_query(stmt, result, 5)
        payload = result.to_dict()
        assert payload["holes"] == {"d": "<"}
        assert payload["trajectory_counts"] == {"nominal": 2, "modified": 16}
        assert (payload["nominal_value"], payload["modified_value"]) == ("1", "0.6")

    @pytest.mark.parametrize("direction, holds", [("'<'", True), ("'='", False)])
    def test_given_direction_is_checked(self, direction, holds):
        text = fixture_path("isomerase_dhap_removal.qry").read_text(encoding="utf-8").replace("is d", f"is {direction}")
        result = evaluate(load_spec("isomerase.pw"), parse_query(text), k=5, cap=20)
        assert result.kind is ResultKind.BOOLEAN
        assert result.value is holds

    @pytest.mark.parametrize("query, nominal, modified", [
        ("etc_t4_disabled.qry", 16, 14),
        ("etc_delay.qry", 16, 10),
    ])
    def test_electron_transport(self, query, nominal, modified):
        result = ask("electron_transport.pw", query, k=5, cap=20)
        assert (result.nominal_value, result.modified_value) == (nominal, modified)
        assert result.value is Direction.LT

    def test_carrier_capacity(self):
        result = ask("etc_capacity.pw", "etc_capacity_t4_disabled.qry", k=10, cap=20)
        assert (result.nominal_count, result.modified_count) == (1, 1)
        assert (result.nominal_value, result.modified_value) == (15, 2)
        assert result.value is Direction.LT

    def test_phenytoin_speeds_metabolism(self):
        result = ask("gefitinib.pw", "gefitinib_phenytoin.qry", k=5)
        assert (result.nominal_value, result.modified_value) == (15, 10)
        assert result.value is Direction.LT


class TestExplanation:
    def test_fuel_switch(self):
        result = ask("fuel_switch.pw", "fuel_switch.qry", k=5, cap=20)
        sug, fac, acoa = FluentRef("sug"), FluentRef("fac"), FluentRef("acoa")
        assert result.kind is ResultKind.CONDITIONS
        assert result.value == (
            Condition(ConditionKind.EQ, sug, 0),
            Condition(ConditionKind.LT, sug, 1),
            Condition(ConditionKind.GT, fac, 0),
            Condition(ConditionKind.GT, acoa, 0),
        )
        assert result.modified_count > 0

    def test_no_witness(self):
        with pytest.raises(NoWitness):
            ask("glycolysis.pw", "'t6' switches to 't3' when p;", k=3)


class TestErrors:
    def test_unknown_fluent(self):
        with pytest.raises(UnknownTarget):
            ask("glycolysis.pw", "value of 'zzz' is n;", k=2)

    def test_unknown_action_in_observation(self):
        with pytest.raises(UnknownTarget):
            ask("glycolysis.pw", "'t3' occurs; due to observations: 't9' occurs;", k=2)

    def test_degenerate_interval(self):
        with pytest.raises(DegenerateInterval):
            ask("glycolysis.pw", "rate of production of 'bpg13' is n when observed between time step 3 "
                                 "and time step 3;", k=4)

    def test_limit(self):
        with pytest.raises(TrajectoryLimitExceeded):
            ask("glycolysis.pw", "glycolysis_reset.qry", k=10, limit=10)

    def test_limit_from_environment(self, monkeypatch):
        monkeypatch.setenv("PATHQUERY_MAX_TRAJS", "10")
        with pytest.raises(TrajectoryLimitExceeded):
            ask("glycolysis.pw", "glycolysis_reset.qry", k=10)


def test_simulate_spec_drops_nothing_for_glycolysis():
    trajs = simulate_spec(load_spec("glycolysis.pw"), 10, 60)
    assert [t.value(10, FluentRef("bpg13")) for t in trajs] == [14, 16]
