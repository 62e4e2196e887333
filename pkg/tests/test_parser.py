from fractions import Fraction

import pytest
from hypothesis import given, settings

from qschrod.opalg import Dx, St, Sx, T, X, const, format_operator, identity, m, z
from qschrod.parser import ParseError, UnknownSymbol, parse_expr
from qschrod.tables import CASES, realize

from strategies import operators


def test_leibniz_normal_form():
    assert parse_expr("dx*x") == X() * Dx() + identity()


def test_symbolic_division_rejected():
    with pytest.raises(ParseError) as info:
        parse_expr("(1 - Sx[-1])/z")
    assert isinstance(info.value, SyntaxError)
    assert info.value.pos == 12  # the offending '/'


def test_explicit_reciprocal_accepted():
    assert parse_expr("(1/z)*(1 - Sx[-1])") == (identity() - Sx(-1)).scale(1 / z)


def test_space_boost():
    assert parse_expr("-t*(1/z)*(1 - Sx[-1]) - m*x*Sx[1]") == realize("K", "space")


def test_rational_division_and_powers():
    assert parse_expr("x^2/4") == (X() * X()).scale(Fraction(1, 4))
    assert parse_expr("St[-1/2]") == St(Fraction(-1, 2))


def test_site_tags():
    assert parse_expr("x@1*dx@2 - dx@2*x@1").is_zero()
    assert parse_expr("(z*m)@3") == const(z * m)


def test_whitespace_is_ignored():
    assert parse_expr("  t * St[ 4 ] ") == T() * St(4)


@pytest.mark.parametrize("text,pos", [("x + q", 4), ("x +", 3), ("Sx[z]", 3), ("(x", 2), ("x ^ y", 4)])
def test_error_positions(text, pos):
    with pytest.raises(ParseError) as info:
        parse_expr(text)
    assert info.value.pos == pos


def test_unknown_symbol():
    with pytest.raises(UnknownSymbol):
        parse_expr("2*y")


@pytest.mark.parametrize("case", list(CASES))
def test_realizations_round_trip(case):
    for g in CASES[case].generators:
        op = realize(g, case)
        assert parse_expr(format_operator(op)) == op


@settings(max_examples=1000)
@given(operators(sites=(0, 1, 2)))
def check_round_trip(op):
    assert parse_expr(format_operator(op)) == op
