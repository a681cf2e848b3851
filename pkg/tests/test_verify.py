from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpc, mpfr

from schwarz.curve import RealCurve, SchwarzForm, complexify, preset_curve
from schwarz.errors import ClearanceError, EvaluationError, ParameterError
from schwarz.exact import ExactComplex
from schwarz.numeric import precision
from schwarz.parse import ParseError, parse_poly
from schwarz.ratmap import maps_into, parse_map
from schwarz.verify import (
    ContinuationPath,
    MapExpr,
    continue_schwarz,
    eval_expr,
    sampling_radius,
    verify_involution,
    verify_reflection_identity,
)

CIRCLE = RealCurve.parse("x^2+y^2-1")
LINE = RealCurve.parse("y")


def S(text):
    return SchwarzForm(parse_poly(text, "ZW"))


def test_eval_expr_examples(bits128):
    assert eval_expr(MapExpr.parse("exp(z)"), 0) == 1
    assert abs(eval_expr(MapExpr.parse("exp(z)"), mpc(0, gmpy2.const_pi())) + 1) < mpfr(2) ** -120
    assert eval_expr(MapExpr.parse("(z^2+1)/(2*z)"), 1) == 1


def test_eval_expr_errors(bits128):
    with pytest.raises(EvaluationError):
        eval_expr(MapExpr.parse("1/z"), 0)
    with pytest.raises(EvaluationError):
        eval_expr(MapExpr.parse("z^-2"), 0)
    with pytest.raises(EvaluationError):
        eval_expr(MapExpr.parse("exp(z)"), mpfr(10) ** 30)
    with pytest.raises(ParseError):
        MapExpr.parse("exp(x)")


def test_map_expr_rational_subclass():
    e = MapExpr.parse("z+1/z")
    assert e.is_rational and e.to_rational_map() == parse_map("(z^2+1)/z")
    assert not MapExpr.parse("exp(z)").is_rational
    with pytest.raises(ParameterError):
        MapExpr.parse("exp(z)").to_rational_map()


@pytest.mark.parametrize(
    "form, start, end, expected",
    [("z*w-1", 1, 2, Fraction(1, 2)), ("z*w-z-w", 2, 3, Fraction(3, 2)), ("z-w", 1, 5 + 1j, 5 + 1j)],
)
def test_continuation_examples(form, start, end, expected):
    with precision(128):
        w = continue_schwarz(S(form), ContinuationPath(start, end))
        assert abs(w - complex(expected)) < 1e-35


def test_continuation_zero_length_returns_conjugate(bits128):
    base = gmpy2.exp(mpc(0, mpfr("0.7")))
    w = continue_schwarz(S("z*w-1"), ContinuationPath(base, base))
    assert abs(w - base.conjugate()) < 1e-35


def test_continuation_follows_the_branch_around_a_point(bits128):
    # off the curve the branch through (1, 1) is still 1/z
    w = continue_schwarz(S("z*w-1"), ContinuationPath(1, mpc(0.5, 1.5), steps=8))
    assert abs(w - 1 / mpc(0.5, 1.5)) < 1e-35


def test_clearance_violation():
    with pytest.raises(ClearanceError):
        continue_schwarz(S("z*w-1"), ContinuationPath(1, -1))
    with pytest.raises(ParameterError):
        continue_schwarz(S("z*w-1"), ContinuationPath(1, 2, steps=0))


def test_ellipse_branch_tracking(bits128):
    Sf = complexify(preset_curve("ellipse", 2, 1))
    z = mpc(mpfr("2.05"), mpfr("0.03"))
    w = continue_schwarz(Sf, ContinuationPath(2, z))
    assert abs(Sf.Q.evalf((z, w))) < 1e-30
    assert abs(w - z.conjugate()) < 0.2


def test_sampling_radius_is_local():
    r = sampling_radius(preset_curve("ellipse", 2, 1), 2, [mpc(3 ** 0.5), mpc(-3 ** 0.5)])
    assert abs(r - 0.05 * (2 - 3 ** 0.5)) < 1e-12


@pytest.mark.parametrize(
    "curve, base, tol",
    [(CIRCLE, 1, 1e-10), (preset_curve("circle", 1, 1), 2, 1e-10), (preset_curve("ellipse", 2, 1), 2, 1e-9),
     (LINE, 3, 1e-10)],
)
def test_involution_examples(curve, base, tol):
    r = verify_involution(curve, base, samples=50, tol=tol)
    assert r.passed and r.samples == 50 and r.failures == []
    assert r.max_residual <= tol


def test_involution_accepts_schwarz_form():
    assert verify_involution(S("z*w-1"), ExactComplex(Fraction(3, 5), Fraction(4, 5)), samples=10).passed


def test_involution_rejects_bad_base():
    with pytest.raises(ParameterError):
        verify_involution(CIRCLE, 2, samples=4)
    with pytest.raises(ParameterError):
        verify_involution(RealCurve.parse("y^2-x^3"), 0, samples=4)


def test_reflection_examples():
    assert verify_reflection_identity("exp(z+1/z)", CIRCLE, LINE, 1, samples=40, tol=1e-9).passed
    assert verify_reflection_identity("exp(-i*z-i/z)", CIRCLE, CIRCLE, 1, samples=40, tol=1e-9).passed
    assert verify_reflection_identity("z+1/z", CIRCLE, LINE, 1j, samples=40, tol=1e-10).passed


def test_reflection_wrong_target():
    with pytest.raises(ParameterError):
        verify_reflection_identity("z^2", CIRCLE, preset_curve("circle", 1, 1), 1, samples=4)
    with precision(128):
        base = gmpy2.exp(mpc(0, gmpy2.const_pi() / 6))
    r = verify_reflection_identity("z^2", CIRCLE, preset_curve("circle", 1, 1), base, samples=40)
    assert not r.passed and r.max_residual > 1e-3 and r.failures


@pytest.mark.parametrize(
    "f, A, B, base",
    [("z^2", CIRCLE, CIRCLE, ExactComplex(Fraction(3, 5), Fraction(4, 5))),
     ("(z-i)/(z+i)", LINE, CIRCLE, 2),
     ("(z-1/2)/(1-z/2)", CIRCLE, CIRCLE, -1),
     ("z+1/z", CIRCLE, LINE, ExactComplex(Fraction(-5, 13), Fraction(12, 13)))],
)
def test_exact_and_numeric_layers_agree(f, A, B, base):
    assert maps_into(parse_map(f), A, B)
    assert verify_reflection_identity(f, A, B, base, samples=100, tol=1e-9).passed


def test_more_steps_do_not_hurt():
    C = preset_curve("ellipse", 2, 1)
    r64 = verify_involution(C, 2, samples=20, steps=64)
    r128 = verify_involution(C, 2, samples=20, steps=128)
    # both sit at the rounding floor; allow that floor on top of the factor 2
    assert r128.max_residual <= 2 * r64.max_residual + 1e-30


def test_report_json():
    r = verify_involution(CIRCLE, 1, samples=4)
    j = r.to_json()
    assert set(j) == {"samples", "max_residual", "tolerance", "passed", "failures"}
    assert len(r.to_json(dump_samples=True)["sample_points"]) == 4
