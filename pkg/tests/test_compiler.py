import pytest

from model.errors import CompileError
from model.guards import Atom, Condition, ConditionKind, FluentRef, Not, Or
from model.multiset import DEFAULT_COLOR, ColoredMultiset
from model.net import ArcKind, FiringStyle
from pathway.compiler import compile_pathway
from pathway.parser import parse_pathway

from conftest import load_spec


def compile_text(text):
    return compile_pathway(parse_pathway(text))


class TestSimpleFluents:
    def test_places_and_transitions(self, glycolysis_net):
        assert glycolysis_net.places == ("f16bp", "dhap", "g3p", "bpg13")
        assert glycolysis_net.transition_ids == ("t3", "t4", "t5a", "t5b", "t6")
        assert glycolysis_net.colors == (DEFAULT_COLOR,)
        assert not glycolysis_net.is_colored
        assert glycolysis_net.firing_style is FiringStyle.MAX

    def test_arcs(self, glycolysis_net):
        arcs = [(a.kind, a.place, a.weight.total()) for a in glycolysis_net.arcs_of("t4")]
        assert arcs == [(ArcKind.INPUT, "f16bp", 1), (ArcKind.OUTPUT, "dhap", 1), (ArcKind.OUTPUT, "g3p", 1)]
        assert [a.weight.total() for a in glycolysis_net.arcs_of("t6", ArcKind.OUTPUT)] == [2]

    def test_initial_marking(self):
        net = compile_pathway(load_spec("atp_inhibition.pw"))
        assert net.initial_marking.count("glu") == 20
        assert net.initial_marking.count("pyr") == 0


class TestLocationalFluents:
    def test_places_and_colors(self, etc_net):
        assert etc_net.places == ("mm", "is", "q", "cytc")
        assert etc_net.colors == ("nadh", "h", "e", "o2", "nadp", "fadh2", "fad", "h2o")
        assert etc_net.is_colored

    def test_arcs_group_by_place(self, etc_net):
        arcs = [(a.kind, a.place, a.weight) for a in etc_net.arcs_of("t1")]
        assert arcs == [
            (ArcKind.INPUT, "mm", ColoredMultiset({"nadh": 2, "h": 2})),
            (ArcKind.OUTPUT, "q", ColoredMultiset({"e": 2})),
            (ArcKind.OUTPUT, "is", ColoredMultiset({"h": 2})),
            (ArcKind.OUTPUT, "mm", ColoredMultiset({"nadp": 2})),
        ]

    def test_mixing_rejected(self):
        with pytest.raises(CompileError):
            compile_text("t1 may execute causing a change value by -1, b atloc m change value by +1")


class TestGuards:
    def test_inhibit_negates(self):
        net = compile_pathway(load_spec("fuel_switch.pw"))
        sug = Atom(Condition(ConditionKind.GE, FluentRef("sug"), 1))
        assert net.transition("box").guard == Not(sug)
        assert net.firing_style is FiringStyle.ANY

    def test_alternative_statements_disjoin(self):
        net = compile_pathway(load_spec("morphine.pw"))
        guard = net.transition("cyp2d6_action").guard
        assert isinstance(guard, Or)
        assert [c.rhs for c in guard.conditions()] == [1, 2, 9]
        # one input and one output arc per statement, each carrying its own guard
        assert len(net.arcs_of("cyp2d6_action")) == 6
        assert {str(a.guard) for a in net.arcs_of("cyp2d6_action")} == {
            "cyp2d6_allele = 1", "cyp2d6_allele = 2", "cyp2d6_allele = 9"}

    def test_stimulation(self):
        net = compile_pathway(load_spec("gefitinib.pw"))
        t1 = net.transition("t1")
        assert t1.stimulation.factor == 2
        assert str(t1.stimulation.guard) == "phenytoin >= 1"
        assert str(t1.guard) == "not (test_drug >= 1)"

    def test_same_place_both_ways(self):
        net = compile_pathway(load_spec("gefitinib.pw"))
        kinds = [(a.kind, a.place) for a in net.arcs_of("t1")]
        assert kinds == [(ArcKind.INPUT, "gefitinib"), (ArcKind.INPUT, "cyp3a4"), (ArcKind.OUTPUT, "cyp3a4")]


class TestModifiers:
    def test_must_fire_duration_priority(self):
        net = compile_text("""
            t1 normally must execute causing a change value by -1 if a has value 1 or higher
            duration of t1 is 3
            priority of t1 is 2
            initially a has value 2
        """)
        t1 = net.transition("t1")
        assert len(t1.must_fire_guards) == 1
        assert (t1.duration, t1.priority, t1.reentrant) == (3, 2, True)
        assert net.non_reentrant().transition("t1").reentrant is False

    def test_reset_effect(self):
        net = compile_text("t1 may execute causing a change value by *")
        (arc,) = net.arcs_of("t1")
        assert (arc.kind, arc.place, arc.weight) == (ArcKind.RESET, "a", None)

    def test_binary_caps(self):
        net = compile_text("domain of a is binary\nt1 may execute causing a change value by +1")
        assert net.cap("a", DEFAULT_COLOR) == 1

    def test_unknown_action(self):
        with pytest.raises(CompileError):
            compile_pathway(load_spec("inconsistent.pw"))

    def test_two_stimulations(self):
        with pytest.raises(CompileError):
            compile_text("""
                t1 may execute causing a change value by +1
                normally stimulate t1 by factor 2
                normally stimulate t1 by factor 3
            """)

    def test_zero_duration(self):
        with pytest.raises(CompileError):
            compile_text("t1 may execute causing a change value by +1\nduration of t1 is 0")
