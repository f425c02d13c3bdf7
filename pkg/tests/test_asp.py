import re
from collections import Counter

import pytest

from model.errors import UnsupportedFeature
from model.net import FiringStyle
from export.asp import EncodingLevel, ResetStyle, detect_level, emit_program, term
from pathway.compiler import compile_pathway
from pathway.parser import parse_pathway
from query.interventions import build_domains

from conftest import GOLDEN, load_query, load_spec


def statements(text):
    """Whitespace-insensitive multiset of the program's statements."""
    text = re.sub(r"%[^\n]*", "", text)
    text = re.sub(r"\s+", " ", text)
    text = re.sub(r"\s*([^\w\s])\s*", r"\1", text)
    return Counter(s for s in re.split(r"\.(?=[^\d.]|$)", text) if s.strip())


def golden(name):
    return (GOLDEN / name).read_text(encoding="utf-8")


def net_of(text):
    return compile_pathway(parse_pathway(text))


@pytest.fixture
def isomerase_domains():
    return build_domains(load_spec("isomerase.pw"), load_query("isomerase_dhap_removal.qry"))


class TestGoldens:
    def test_basic_pooled(self, glycolysis_net):
        program = emit_program(glycolysis_net, EncodingLevel.MAXFIRE, 5, 60)
        assert statements(program) == statements(golden("glycolysis_maxfire.lp"))

    def test_timed_nominal(self, isomerase_domains):
        nominal, _ = isomerase_domains
        program = emit_program(compile_pathway(nominal), EncodingLevel.RESET, 1, 1)
        assert statements(program) == statements(golden("isomerase.lp"))

    def test_timed_with_reset(self, isomerase_domains):
        _, modified = isomerase_domains
        program = emit_program(compile_pathway(modified), EncodingLevel.RESET, 1, 1)
        assert statements(program) == statements(golden("isomerase_dhap_removal.lp"))

    def test_deterministic(self, isomerase_domains):
        net = compile_pathway(isomerase_domains[1])
        assert emit_program(net, None, 3, 9) == emit_program(net, None, 3, 9)


class TestLevels:
    @pytest.mark.parametrize("text, level", [
        ("t1 may execute causing a change value by +1\nfiring style *", EncodingLevel.BASIC),
        ("t1 may execute causing a change value by +1", EncodingLevel.MAXFIRE),
        ("t1 may execute causing a change value by *", EncodingLevel.RESET),
        ("t1 may execute causing a change value by +1\ninhibit t1 if b has value 2 or higher",
         EncodingLevel.INHIBIT),
        ("t1 may execute causing a change value by +1 if b has value higher than 0", EncodingLevel.READ),
        ("t1 may execute causing a atloc m change value by +1", EncodingLevel.COLORED),
        ("t1 may execute causing a change value by +1\nt2 may execute causing a change value by +1\n"
         "priority of t2 is 2", EncodingLevel.PRIORITY),
        ("t1 may execute causing a change value by +1\nduration of t1 is 3", EncodingLevel.DURATIVE),
    ])
    def test_detect(self, text, level):
        assert detect_level(net_of(text)) is level

    def test_fixture_levels(self, glycolysis_net, etc_net):
        assert detect_level(glycolysis_net) is EncodingLevel.MAXFIRE
        assert detect_level(etc_net) is EncodingLevel.COLORED
        assert detect_level(compile_pathway(load_spec("fuel_switch.pw"))) is EncodingLevel.INHIBIT

    @pytest.mark.parametrize("text, level", [("3", EncodingLevel.INHIBIT), ("colored", EncodingLevel.COLORED),
                                             (" Durative ", EncodingLevel.DURATIVE)])
    def test_parse(self, text, level):
        assert EncodingLevel.parse(text) is level

    @pytest.mark.parametrize("text", ["8", "fast", ""])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            EncodingLevel.parse(text)

    def test_default_level_is_detected(self, glycolysis_net):
        assert emit_program(glycolysis_net, None, 5, 60) == emit_program(glycolysis_net, EncodingLevel.MAXFIRE, 5, 60)


class TestUnsupported:
    @pytest.mark.parametrize("name", ["gefitinib.pw", "morphine.pw"])
    def test_fixture_features(self, name):
        with pytest.raises(UnsupportedFeature):
            emit_program(compile_pathway(load_spec(name)))

    @pytest.mark.parametrize("text", [
        "domain of a is binary\nt1 may execute causing a change value by +1",
        "t1 normally must execute causing a change value by +1",
        "t1 may execute causing a change value by +1 if b has value 2 or lower",
        "t1 may execute causing a change value by +1 if b has higher value than a",
    ])
    def test_features(self, text):
        with pytest.raises(UnsupportedFeature):
            emit_program(net_of(text))

    def test_level_below_needed(self, glycolysis_net):
        with pytest.raises(UnsupportedFeature):
            emit_program(glycolysis_net, EncodingLevel.BASIC)

    def test_standard_reset_not_colored(self, etc_net):
        with pytest.raises(UnsupportedFeature):
            emit_program(etc_net, reset_style=ResetStyle.STANDARD)

    @pytest.mark.parametrize("k, cap", [(-1, 5), (5, 0)])
    def test_bad_bounds(self, glycolysis_net, k, cap):
        with pytest.raises(ValueError):
            emit_program(glycolysis_net, None, k, cap)


class TestLayouts:
    def test_pooled_serial_pair(self, glycolysis_net):
        program = emit_program(glycolysis_net.with_style(FiringStyle.SERIAL), None, 5, 60)
        assert "more_than_one_fires :- fires(T1,TS), fires(T2, TS), T1 != T2, time(TS)." in program
        assert "could_not_have" not in program

    def test_pooled_any_has_no_pair(self, glycolysis_net):
        program = emit_program(glycolysis_net.with_style(FiringStyle.ANY), None, 5, 60)
        assert "could_not_have" not in program
        assert "more_than_one_fires" not in program

    def test_uncolored_net_uses_tok(self, glycolysis_net):
        program = emit_program(glycolysis_net, EncodingLevel.COLORED, 2, 10)
        assert "col(tok)." in program.splitlines()
        assert "holds(bpg13,0,tok,0)." in program.splitlines()
        assert "tparc(t6,bpg13,2,tok,TS) :- time(TS)." in program.splitlines()

    def test_colored_arcs(self, etc_net):
        lines = emit_program(etc_net, None, 5, 20).splitlines()
        assert "ptarc(mm,t1,2,nadh,TS) :- time(TS)." in lines
        assert "tparc(t1,q,2,e,TS) :- time(TS)." in lines
        assert "holds(mm,0,o2,0)." in lines
        assert "col(h2o)." in lines
        assert "place(is)." in lines

    def test_guard_inhibitor(self):
        lines = emit_program(compile_pathway(load_spec("fuel_switch.pw")), None, 4, 20).splitlines()
        assert "iptarc(sug,box,1,TS) :- time(TS)." in lines

    def test_weighted_colored_inhibitors(self):
        lines = emit_program(compile_pathway(load_spec("etc_capacity.pw")), None, 10, 20).splitlines()
        for place, tid in [("q", "t1"), ("q", "t2"), ("cytc", "t3")]:
            assert f"iptarc({place},{tid},2,e,TS) :- time(TS)." in lines
        assert "tptarc(is,t6,3,h,TS) :- time(TS)." in lines

    def test_disabled_transition(self):
        spec = load_spec("electron_transport.pw")
        _, modified = build_domains(spec, load_query("etc_t4_disabled.qry"))
        lines = emit_program(compile_pathway(modified), None, 5, 20).splitlines()
        assert "notenabled(t4,TS) :- time(TS)." in lines

    def test_priority_and_duration(self):
        net = net_of("""
            t1 may execute causing a change value by -1, b change value by +1
            t2 may execute causing a change value by -1, c change value by +1
            priority of t2 is 2
            duration of t1 is 3
            initially a has value 2
        """)
        lines = emit_program(net, None, 4, 10).splitlines()
        assert "transpr(t2,2)." in lines
        assert "tparc(t1,b,1,tok,TS,3) :- time(TS)." in lines
        assert any(line.startswith("prenabled(T,TS)") for line in lines)

    def test_non_reentrant_rule(self):
        net = net_of("t1 may execute causing a change value by +1\nduration of t1 is 2").non_reentrant()
        assert "tparc(T,P,N,C,TS0,D)" in emit_program(net, None, 4, 10)

    def test_standard_reset(self, isomerase_domains):
        program = emit_program(compile_pathway(isomerase_domains[1]), None, 1, 1, ResetStyle.STANDARD)
        assert "rptarc(dhap,reset_dhap_1)." in program.splitlines()
        assert "not reset(P,TS)" in program
        assert ":- enabled(reset_dhap_1,TS)" not in program

    def test_horizon_constants(self, isomerase_domains):
        program = emit_program(compile_pathway(isomerase_domains[1]), None, 7, 30)
        assert program.startswith("#const nts=7.\ntime(0..nts).\n\n#const ntok=30.\nnum(0..ntok).")


@pytest.mark.parametrize("name, expected", [("h2o", "h2o"), ("Atp", '"Atp"'), ("5a", '"5a"')])
def test_term(name, expected):
    assert term(name) == expected
