from fractions import Fraction

import pytest

from reeb import ParseError, as_rational, format_rational, parse_rational


def test_as_rational_passthrough_and_ints():
    assert as_rational(Fraction(3, 4)) == Fraction(3, 4)
    assert as_rational(7) == Fraction(7)
    assert as_rational(-2) == Fraction(-2)


def test_as_rational_strings():
    assert as_rational("3/4") == Fraction(3, 4)
    assert as_rational("-1.25") == Fraction(-5, 4)
    assert as_rational(" 2 ") == Fraction(2)


def test_as_rational_rejects_floats_and_bools():
    with pytest.raises(ParseError):
        as_rational(0.5)
    with pytest.raises(ParseError):
        as_rational(True)
    with pytest.raises(ParseError):
        as_rational(None)


def test_parse_rational_errors():
    with pytest.raises(ParseError):
        parse_rational("")
    with pytest.raises(ParseError):
        parse_rational("   ")
    with pytest.raises(ParseError):
        parse_rational("7/0")
    with pytest.raises(ParseError):
        parse_rational("x/2")


def test_format_rational():
    assert format_rational(Fraction(5)) == "5"
    assert format_rational(Fraction(-3, 4)) == "-3/4"
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(0)) == "0"


def test_roundtrip():
    for tok in ("0", "17/12", "-5/3", "4"):
        assert format_rational(parse_rational(tok)) == tok
