import pytest

from model.errors import PathwaySyntaxError
from model.guards import Condition, ConditionKind, FluentRef
from model.net import FiringStyle
from pathway.ast import (
    RESET_ALL,
    DomainDecl,
    DomainKind,
    Duration,
    Effect,
    Inhibit,
    Initially,
    MayExecute,
    MustExecute,
    Priority,
    Stimulate,
)
from pathway.parser import parse_pathway

from conftest import fixture_path, load_spec

A = FluentRef("a")
B = FluentRef("b")


def only(text):
    spec = parse_pathway(text)
    assert len(spec.statements) == 1
    return spec.statements[0]


class TestFixtures:
    def test_glycolysis(self):
        spec = load_spec("glycolysis.pw")
        assert [d.ref.fluent for d in spec.domains] == ["f16bp", "dhap", "g3p", "bpg13"]
        assert spec.actions() == ["t3", "t4", "t5a", "t5b", "t6"]
        assert spec.firing_style is FiringStyle.MAX
        t4 = spec.executes("t4")[0]
        assert t4.effects == (Effect(FluentRef("f16bp"), -1), Effect(FluentRef("dhap"), 1),
                              Effect(FluentRef("g3p"), 1))
        assert spec.initial_value(FluentRef("bpg13")) == 0

    def test_locational(self):
        spec = load_spec("electron_transport.pw")
        assert DomainDecl(FluentRef("h", "is")) in spec.domains
        t4 = spec.executes("t4")[0]
        assert t4.effects[0] == Effect(FluentRef("o2", "mm"), -1)
        assert t4.effects[-1] == Effect(FluentRef("h", "is"), 2)

    def test_every_fixture_parses(self):
        for path in sorted(fixture_path("").glob("*.pw")):
            if path.name == "malformed.pw":
                continue
            parse_pathway(path.read_text(encoding="utf-8"))


class TestStatements:
    def test_may_execute_with_conditions(self):
        s = only("t1 may execute causing a change value by -2, b change value by +2 if a has value 3 or higher")
        assert s == MayExecute("t1", (Effect(A, -2), Effect(B, 2)), (Condition(ConditionKind.GE, A, 3),))

    def test_may_fire_alias(self):
        assert isinstance(only("t1 may fire causing a change value by 1"), MayExecute)

    def test_must_execute(self):
        s = only("t1 normally must execute causing a change value by * if b has value 0")
        assert s == MustExecute("t1", (Effect(A, RESET_ALL),), (Condition(ConditionKind.EQ, B, 0),))
        assert s.effects[0].is_reset

    def test_inhibit_without_conditions(self):
        assert only("inhibit t1") == Inhibit("t1")

    def test_stimulate(self):
        s = only("normally stimulate t1 by factor 2 if a has value 1 or higher")
        assert s == Stimulate("t1", 2, (Condition(ConditionKind.GE, A, 1),))

    @pytest.mark.parametrize("text", ["t1 executes in 3 time units", "duration of t1 is 3"])
    def test_duration_forms(self, text):
        assert only(text) == Duration("t1", 3)

    def test_priority(self):
        assert only("priority of t1 is 2") == Priority("t1", 2)

    def test_initially_list(self):
        spec = parse_pathway("initially a has value 3, b atloc mm has value 1")
        assert spec.statements == (Initially(A, 3), Initially(FluentRef("b", "mm"), 1))

    def test_domains(self):
        spec = parse_pathway("domain of a is binary, b is integer")
        assert spec.domains == (DomainDecl(A, DomainKind.BINARY), DomainDecl(B, DomainKind.INTEGER))

    @pytest.mark.parametrize("text, style", [
        ("firing style max", FiringStyle.MAX),
        ("firing style *", FiringStyle.ANY),
        ("firing style 1", FiringStyle.SERIAL),
    ])
    def test_firing_style(self, text, style):
        assert parse_pathway(text).firing_styles == (style,)

    def test_default_style_is_max(self):
        assert parse_pathway("").firing_style is FiringStyle.MAX


class TestConditions:
    @pytest.mark.parametrize("text, kind, rhs", [
        ("a has value 2 or higher", ConditionKind.GE, 2),
        ("a has value 2 or lower", ConditionKind.LE, 2),
        ("a has value 2", ConditionKind.EQ, 2),
        ("a has value lower than 2", ConditionKind.LT, 2),
        ("a has value higher than 2", ConditionKind.GT, 2),
        ("a has value equal to 2", ConditionKind.EQ, 2),
        ("a has value higher than b", ConditionKind.GT, B),
        ("a has value lower than b", ConditionKind.LT, B),
        ("a has higher value than b", ConditionKind.GT, B),
        ("a has lower value than b", ConditionKind.LT, B),
    ])
    def test_forms(self, text, kind, rhs):
        assert only(f"inhibit t1 if {text}").conditions == (Condition(kind, A, rhs),)


class TestLexical:
    def test_comments_and_layout(self):
        spec = parse_pathway("% header\n\nt1 may execute causing a change value by 1 % trailing\n"
                             "% between\ninhibit t1 if a has value 5 or higher\r\ninitially a has value 0")
        assert [type(s).__name__ for s in spec.statements] == ["MayExecute", "Inhibit", "Initially"]

    def test_continuation_lines(self):
        spec = parse_pathway("t1 may execute causing\n"
                             "    a change value by -1,\n"
                             "    b change value by +1\n"
                             "    if a has value 1 or higher,\n"
                             "       b has value 3 or lower\n"
                             "initially\n"
                             "    a has value 2,\n"
                             "    b has value 0\n")
        t1, *initially = spec.statements
        assert t1.effects == (Effect(A, -1), Effect(B, 1))
        assert t1.conditions == (Condition(ConditionKind.GE, A, 1), Condition(ConditionKind.LE, B, 3))
        assert initially == [Initially(A, 2), Initially(B, 0)]

    @pytest.mark.parametrize("text", [
        "t1 may execute causing a change value by 1 inhibit t1",
        "priority of t1 is 2 duration of t1 is 3",
        "initially a has value 0 firing style max",
        "t1 may execute causing a change value by 1\nb change value by 2",
    ])
    def test_one_statement_per_line(self, text):
        with pytest.raises(PathwaySyntaxError):
            parse_pathway(text)

    @pytest.mark.parametrize("quoted", ["'is'", '"is"', "`is'"])
    def test_quoted_names(self, quoted):
        s = only(f"t1 may execute causing h atloc {quoted} change value by 2")
        assert s.effects[0].ref == FluentRef("h", "is")

    def test_keyword_needs_quotes(self):
        with pytest.raises(PathwaySyntaxError):
            parse_pathway("t1 may execute causing h atloc is change value by 2")


class TestErrors:
    def test_malformed_fixture(self):
        with pytest.raises(PathwaySyntaxError) as info:
            parse_pathway(fixture_path("malformed.pw").read_text(encoding="utf-8"))
        assert info.value.line == 2
        assert info.value.column > 1
        assert "line 2" in str(info.value)

    def test_position_on_later_line(self):
        with pytest.raises(PathwaySyntaxError) as info:
            parse_pathway("t1 may execute causing a change value by 1\ninhibit\n")
        assert info.value.line >= 2

    def test_unknown_statement(self):
        with pytest.raises(PathwaySyntaxError):
            parse_pathway("t1 sometimes executes")
