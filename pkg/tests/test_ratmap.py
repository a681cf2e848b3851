import warnings
from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpc, mpfr
from hypothesis import given
from hypothesis import strategies as st

from schwarz.curve import ReducibleCurveWarning, RealCurve, preset_curve, same_up_to_scalar
from schwarz.errors import DegenerateImageError, EvaluationError, ParameterError
from schwarz.exact import ExactComplex, I, ONE
from schwarz.numeric import INFINITY, precision, to_big
from schwarz.parse import ParseError, parse_poly
from schwarz.poly import UniPoly
from schwarz.ratmap import compose, eval_map, image_curve, make_map, maps_into, parse_map

from conftest import gaussian_int

CIRCLE = RealCurve.parse("x^2+y^2-1")
LINE = RealCurve.parse("y")


def uni(text):
    return parse_poly(text, "ZW").to_uni("z")


def test_make_map_examples():
    f = make_map(uni("z^2-1"), uni("z-1"))
    assert f.num == uni("z+1") and f.den == uni("1")
    c = make_map(uni("z"), uni("2*z"))
    assert c.is_constant and c.num == uni("1/2")
    b = make_map(uni("z-1/2"), uni("-z/2+1"))
    assert b.den == uni("z-2") and b.num == uni("-2*z+1")
    with pytest.raises(ParameterError):
        make_map(uni("z"), uni("0"))


def test_parse_map_rejects_exp():
    with pytest.raises(ParseError):
        parse_map("exp(z)")


def test_eval_map_examples():
    assert eval_map(parse_map("z^2"), ExactComplex.gaussian(1, 1)) == ExactComplex.gaussian(0, 2)
    assert eval_map(parse_map("1/z"), ExactComplex.gaussian(0)) is INFINITY
    assert eval_map(parse_map("(z-i)/(z+i)"), ExactComplex.gaussian(1)) == -I
    assert eval_map(parse_map("1/z"), mpc(0)) is INFINITY
    with precision(128):
        assert abs(eval_map(parse_map("(z-i)/(z+i)"), mpc(1)) + 1j) < 1e-35


def test_compose_examples():
    assert compose(parse_map("z^2"), parse_map("z+1")) == parse_map("(z+1)^2")
    assert compose(parse_map("1/z"), parse_map("1/z")) == parse_map("z")
    assert compose(parse_map("(z-1/2)/(1-z/2)"), parse_map("(z+1/2)/(1+z/2)")) == parse_map("z")
    with pytest.raises(ParameterError):
        compose(parse_map("z"), parse_map("3"))


@st.composite
def maps(draw, max_degree=3):
    n = draw(st.integers(0, max_degree))
    d = draw(st.integers(0 if n else 1, max_degree))
    num = UniPoly(draw(st.lists(gaussian_int, min_size=n + 1, max_size=n + 1)), "z")
    den = UniPoly(draw(st.lists(gaussian_int, min_size=d + 1, max_size=d + 1)), "z")
    if num.is_zero() or den.is_zero():
        num, den = uni("z+1"), uni("z-2")
    f = make_map(num, den)
    return f if not f.is_constant else parse_map("z^2+i")


@given(maps(2), maps(2), maps(2))
def test_compose_associative(f, g, h):
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@given(maps(), maps())
def test_compose_agrees_with_evaluation(f, g):
    z = ExactComplex(Fraction(3, 7), Fraction(-2, 5))
    inner = eval_map(g, z)
    if inner is INFINITY:
        return
    outer = eval_map(f, inner)
    assert eval_map(compose(f, g), z) == outer


def _on_image(P, pts, tol):
    for x, y in pts:
        scale = sum(abs(to_big(c)) * abs(x) ** i * abs(y) ** j for (i, j), c in P.terms.items())
        if abs(P.evalf((x, y))) > tol * max(scale, 1):
            return False
    return True


def _image_samples(f, C, count):
    out = []
    with precision(128):
        for k in range(count):
            t = mpfr(k) / count * 2 * gmpy2.const_pi() if C.param else None
            x, y = C.param(t) if C.param else (mpfr(k) / 7 - 3, mpfr(0))
            v = eval_map(f, mpc(x, y))
            if v is not INFINITY:
                out.append((v.real, v.imag))
    return out


@pytest.mark.parametrize(
    "f, C, expected",
    [("z^2", preset_curve("circle"), "x^2+y^2-1"),
     ("z+1", preset_curve("circle"), "(x-1)^2+y^2-1"),
     ("(z-i)/(z+i)", preset_curve("line"), "x^2+y^2-1"),
     ("z+1/z", preset_curve("circle"), "y")],
)
def test_image_curve_examples(f, C, expected):
    img = image_curve(parse_map(f), C)
    assert same_up_to_scalar(img.P, parse_poly(expected, "XY"))
    with precision(128):
        assert _on_image(img.P, _image_samples(parse_map(f), C, 100), 1e-10)


def test_image_curve_rejects_constant_map():
    with pytest.raises(ParameterError):
        image_curve(parse_map("5"), CIRCLE)


def test_maps_into_examples():
    assert maps_into(parse_map("z^2"), CIRCLE, CIRCLE)
    assert not maps_into(parse_map("z+2"), CIRCLE, CIRCLE)
    assert maps_into(parse_map("z+1/z"), CIRCLE, LINE)
    assert maps_into(parse_map("(z-i)/(z+i)"), LINE, CIRCLE)
    assert not maps_into(parse_map("z^2"), CIRCLE, LINE)


SOURCES = [preset_curve("circle", ExactComplex(Fraction(1, 2), 1), 2), preset_curve("line", 0, ExactComplex(1, 2)),
           preset_curve("ellipse", 2, 1)]
TARGETS = [CIRCLE, LINE, preset_curve("ellipse", 2, 1), preset_curve("circle", 1, 1)]


@given(maps(2), st.sampled_from(SOURCES))
def test_maps_into_image_curve(f, C):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ReducibleCurveWarning)
        try:
            img = image_curve(f, C)
        except DegenerateImageError:
            return
        assert maps_into(f, C, img)
        assert img.degree <= 2 * f.degree * C.degree


@given(maps(2), st.sampled_from(SOURCES), st.sampled_from(TARGETS))
def test_sampling_soundness(f, A, B):
    verdict = maps_into(f, A, B)
    pts = []
    with precision(128):
        for k in range(500):
            t = mpfr(k) / 500 * 2 * gmpy2.const_pi() if A.label.startswith(("circle", "ellipse")) \
                else mpfr(k - 250) / 50
            v = eval_map(f, mpc(*A.param(t)))
            if v is not INFINITY:
                pts.append((v.real, v.imag))
        if verdict:
            assert _on_image(B.P, pts, 1e-9)
        else:
            assert not _on_image(B.P, pts, 1e-3)


def test_eval_map_indeterminate_is_reported():
    from schwarz.ratmap import RationalMap

    bad = RationalMap(uni("z"), uni("z"))  # bypasses normalization on purpose
    with pytest.raises(EvaluationError):
        eval_map(bad, ExactComplex.gaussian(0))
