import pytest
from hypothesis import given

from pio import syntax as S
from pio.parser import (
    ParseError, parse_combinator, parse_program, parse_type, parse_value,
    print_combinator, print_program, print_type, print_value,
)
from pio.syntax import ONE, Mu, Prod, Sum, Var
from strategies import closed_combinators, open_types, typed_value


@given(open_types())
def test_type_round_trip(t):
    assert parse_type(print_type(t)) == t


@given(typed_value())
def test_value_round_trip(tv):
    _, v = tv
    assert parse_value(print_value(v)) == v


@given(closed_combinators())
def test_combinator_round_trip(c):
    assert parse_combinator(print_combinator(c)) == c


def test_type_precedence_and_associativity():
    assert parse_type("1 + 1 * 1") == Sum(ONE, Prod(ONE, ONE))
    assert parse_type("1 + 1 + 1") == Sum(ONE, Sum(ONE, ONE))
    assert parse_type("mu x. 1 + x") == Mu("x", Sum(ONE, Var("x")))


def test_combinator_precedence():
    c = parse_combinator("distrib ; swap+ (+) id")
    assert c == S.Comp(S.Distrib(), S.SumC(S.SwapPlus(), S.Id()))
    assert parse_combinator("trace(swap+)") == S.Trace(S.SwapPlus())
    assert parse_combinator("inv(factor)") == S.Inv(S.Factor())


def test_values():
    assert parse_value("(inl (), inr ())") == S.Pair(S.InL(S.UNIT), S.InR(S.UNIT))
    assert parse_value("fold inl ()") == S.Fold(S.InL(S.UNIT))


@pytest.mark.parametrize("text", ["1 +", "(1 * 1", "mu . 1", "1 ++ 1"])
def test_bad_types_report_position(text):
    with pytest.raises(ParseError) as info:
        parse_type(text)
    assert info.value.line == 1 and info.value.column >= 1


def test_bad_combinator_reports_column():
    with pytest.raises(ParseError) as info:
        parse_combinator("id ; ; id")
    assert info.value.column == 6


PROGRAM = """\
-- two declarations and an entry point
flip : 1 + 1 <-> 1 + 1 = swap+
twice : 1 + 1 <-> 1 + 1 =
    flip ; flip
main = twice
"""


def test_program_parse_and_reprint():
    prog = parse_program(PROGRAM)
    assert prog.names == ["flip", "twice"]
    assert prog.main().name == "twice"
    assert prog.get("twice").line == 3
    assert prog.resolved("twice") == S.Comp(S.SwapPlus(), S.SwapPlus())
    again = parse_program(print_program(prog))
    assert [d.body for d in again.declarations] == [d.body for d in prog.declarations]
    assert again.entry == "twice"


def test_program_errors_carry_line_numbers():
    with pytest.raises(ParseError) as info:
        parse_program("ok : 1 <-> 1 = id\nbad : 1 <-> = id\n")
    assert info.value.line == 2


def test_unknown_reference_is_rejected():
    with pytest.raises(ParseError):
        parse_program("f : 1 <-> 1 = g\n")


def test_duplicate_declaration_is_rejected():
    with pytest.raises(ParseError):
        parse_program("f : 1 <-> 1 = id\nf : 1 <-> 1 = id\n")
