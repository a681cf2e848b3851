import pytest
from hypothesis import given

from schwarz.exact import ExactComplex
from schwarz.parse import ParseError, parse_poly
from schwarz.poly import Poly

from conftest import exact, real_bipolys
from hypothesis import strategies as st


def test_unit_circle_form():
    p = parse_poly("z*w-1", "ZW")
    assert p.terms == {(1, 1): ExactComplex.gaussian(1), (0, 0): ExactComplex.gaussian(-1)}


def test_expansion_and_rationals():
    p = parse_poly("(x+1/2)^2 - i*y", "XY")
    assert str(p) == "x^2 + x - i*y + 1/4"


@pytest.mark.parametrize(
    "text, fragment, position",
    [
        ("x^2+", "unexpected end", 4),
        ("x*q", "unknown variable", 2),
        ("x^-1", "nonnegative", 1),
        ("x^(1/2)", "", None),
        ("2x", "", None),
    ],
)
def test_errors(text, fragment, position):
    with pytest.raises(ParseError) as info:
        parse_poly(text, "XY")
    assert fragment in str(info.value)
    if position is not None:
        assert info.value.position == position


@st.composite
def complex_bipolys(draw):
    p = draw(real_bipolys())
    c = draw(exact)
    return p + p.scale(c) if not c.is_zero() else p


@given(complex_bipolys())
def test_print_parse_round_trip(p):
    assert parse_poly(str(p), "XY") == p


@given(real_bipolys(gens=("z", "w")))
def test_round_trip_other_pair(p):
    assert parse_poly(str(p), "ZW") == p


def test_zero_prints():
    assert str(Poly({}, ("x", "y"))) == "0"
    assert parse_poly("x - x", "XY").is_zero()
