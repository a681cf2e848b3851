import math
import random
import warnings
from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpc, mpfr
from hypothesis import given
from hypothesis import strategies as st

from schwarz.curve import ReducibleCurveWarning, RealCurve, SchwarzForm, complexify, preset_curve
from schwarz.errors import PrecisionError
from schwarz.exact import ExactComplex
from schwarz.numeric import INFINITY, precision, to_big
from schwarz.parse import parse_poly
from schwarz.puiseux import (
    AsymptoticTag,
    PuiseuxBranch,
    branch_points,
    branches_at_infinity,
    classify,
    condition_a_holds,
)

from conftest import real_bipolys, small_frac

ELLIPSE = "3*w^2-10*z*w+3*z^2+16"


def S(text):
    return SchwarzForm(parse_poly(text, "ZW"))


def test_branch_points_examples(bits128):
    (bp,) = branch_points(S("z*w-1"))
    assert abs(bp) < 1e-30
    assert branch_points(S("w-z")) == []
    pts = sorted(branch_points(S(ELLIPSE)), key=lambda p: float(p.real))
    assert len(pts) == 2
    assert abs(pts[0] + gmpy2.sqrt(3)) < 1e-30 and abs(pts[1] - gmpy2.sqrt(3)) < 1e-30


def test_unit_circle_branch():
    (b,) = branches_at_infinity(S("z*w-1"))
    assert b.m == 1 and b.exact
    assert b.leading_exponent == -1
    assert abs(b.leading_coefficient - 1) < 1e-30


def test_shifted_circle_geometric_series():
    (b,) = branches_at_infinity(S("z*w-z-w"), order=8)
    assert [e for e, _ in b.terms] == [Fraction(-k) for k in range(8)]
    assert all(abs(c - 1) < 1e-30 for _, c in b.terms)
    assert not b.exact


def test_ellipse_branches(bits128):
    bs = branches_at_infinity(S(ELLIPSE))
    assert [b.m for b in bs] == [1, 1]
    assert all(b.leading_exponent == 1 for b in bs)
    # sorted by coefficient after equal exponents: 1/3 then 3
    assert abs(bs[0].leading_coefficient - mpfr(1) / 3) < 1e-30
    assert abs(bs[1].leading_coefficient - 3) < 1e-30


def test_rose_branch_limit(bits128):
    holds, b = condition_a_holds(complexify(preset_curve("rose", 1, 2, 1)))
    assert holds
    assert b.leading_exponent == 0
    assert abs(abs(classify(b).limit) - gmpy2.sqrt(mpfr(1) / 2)) < 1e-30


def test_cusp_ramification():
    bs = branches_at_infinity(complexify(RealCurve.parse("y^2-x^3")))
    assert sum(b.m for b in bs) == 3
    assert any(b.m > 1 for b in bs)


def test_line_condition_a_false():
    holds, witness = condition_a_holds(S("z-w"))
    assert not holds and witness is None
    (b,) = branches_at_infinity(S("z-w"))
    assert b.leading_exponent == 1 and b.exact


def test_classify_examples():
    (u,) = branches_at_infinity(S("z*w-1"))
    (c,) = branches_at_infinity(S("z*w-z-w"))
    big = branches_at_infinity(S(ELLIPSE))[1]
    assert classify(u).tag is AsymptoticTag.DECAY_TO_ZERO and classify(u).limit == 0
    assert classify(c).tag is AsymptoticTag.BOUNDED_FINITE_LIMIT and abs(classify(c).limit - 1) < 1e-30
    assert classify(big).tag is AsymptoticTag.LINEAR_GROWTH and classify(big).limit is INFINITY


@pytest.mark.parametrize(
    "exponent, tag",
    [(Fraction(-1, 2), AsymptoticTag.DECAY_TO_ZERO), (Fraction(0), AsymptoticTag.BOUNDED_FINITE_LIMIT),
     (Fraction(1), AsymptoticTag.LINEAR_GROWTH), (Fraction(2), AsymptoticTag.POLE_AT_INFINITY),
     (Fraction(3, 2), AsymptoticTag.OTHER), (Fraction(1, 3), AsymptoticTag.OTHER)],
)
def test_classify_table(exponent, tag):
    b = PuiseuxBranch(exponent.denominator, ((exponent, mpc(2)),), 8)
    assert classify(b).tag is tag


def test_classify_ignores_order():
    bs = branches_at_infinity(complexify(preset_curve("rose", 1, 2, 1)))
    before = [classify(b).tag for b in bs]
    shuffled = list(enumerate(bs))
    random.Random(3).shuffle(shuffled)
    assert all(classify(b).tag is before[i] for i, b in shuffled)


def test_json_record():
    (b,) = branches_at_infinity(S("z*w-z-w"), order=2)
    assert b.to_json() == {"m": 1, "terms": [[0, 1, 1.0, 0.0], [-1, 1, 1.0, 0.0]],
                           "class": "BOUNDED_FINITE_LIMIT", "limit": [1.0, 0.0]}


def test_order_must_be_positive():
    with pytest.raises(ValueError):
        branches_at_infinity(S("z*w-1"), order=0)


positive = st.builds(Fraction, st.integers(1, 30), st.integers(1, 5))


@given(st.builds(ExactComplex, small_frac, small_frac), positive)
def test_circle_branch_matches_closed_form(z0, r):
    (b,) = branches_at_infinity(complexify(preset_curve("circle", z0, r)), order=6)
    with precision(128):
        z0b = to_big(z0)
        rb = mpfr(r.numerator) / r.denominator
        # conj(z0) + r^2 / (z - z0) = conj(z0) + sum_k r^2 z0^k z^-(k+1)
        assert abs(b.coefficient(0) - z0b.conjugate()) < 1e-10
        for k in range(5):
            assert abs(b.coefficient(-(k + 1)) - rb * rb * z0b ** k) < 1e-10 * max(1, abs(rb * rb * z0b ** k))


@given(real_bipolys(max_degree=5, max_terms=7))
def test_branch_count_equals_w_degree(p):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ReducibleCurveWarning)
        Sf = complexify(RealCurve(p))
    try:
        bs = branches_at_infinity(Sf, order=4)
    except PrecisionError:
        pytest.skip("expansion needs more than three precision doublings")
    assert sum(b.m for b in bs) == Sf.n
    for b in bs:
        exps = [e for e, _ in b.terms]
        assert exps == sorted(exps, reverse=True) and len(set(exps)) == len(exps)
        assert all(e.denominator <= b.m and b.m % e.denominator == 0 for e in exps)


def _residual_slope(Q, branch, radii):
    xs, ys = [], []
    for R in radii:
        z = mpc(R, 0) * gmpy2.exp(mpc(0, mpfr("0.3")))
        w = branch(z)
        xs.append(math.log(R))
        ys.append(float(gmpy2.log(abs(Q.evalf((z, w))))))
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)


@pytest.mark.parametrize("curve", ["x^2+y^2-2*x", "x^2/4+y^2-1", "(x^2+y^2)^2-2*(x^2+y^2)-(x^2-y^2)", "y^2-x^3"])
def test_residual_decay(curve):
    # |Q(z, S_N(z))| should fall like |Q_w| * |z|**(first omitted exponent)
    N = 4
    Sf = complexify(RealCurve.parse(curve))
    with precision(384):
        long = branches_at_infinity(Sf, order=N + 1, precision_bits=384)
        short = branches_at_infinity(Sf, order=N, precision_bits=384)
        Qw = Sf.Q.derivative("w")
        radii = [10 ** (2 + 0.4 * k) for k in range(11)]
        for b_long, b in zip(long, short):
            if b.exact or len(b_long.terms) <= N:
                continue
            next_exp = b_long.terms[N][0]
            measured = _residual_slope(Sf.Q, b, radii)
            xs = [math.log(R) for R in radii]
            qw = [float(gmpy2.log(abs(Qw.evalf((mpc(R, 0) * gmpy2.exp(mpc(0, mpfr("0.3"))), b(mpc(R, 0) * gmpy2.exp(mpc(0, mpfr("0.3")))))))))
                  for R in radii]
            qw_slope = (qw[-1] - qw[0]) / (xs[-1] - xs[0])
            assert abs(measured - (qw_slope + float(next_exp))) < 0.2
