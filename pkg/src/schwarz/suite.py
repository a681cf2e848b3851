"""Scripted worked examples with their expected outcomes.

Each check returns ``(passed, detail)``.  ``run_suite`` collects them into
rows for the ``paper-suite`` command.
"""

from __future__ import annotations

import time
import warnings
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

from .algebra import gcd, resultant, root_bound, squarefree_part
from .blaschke import PSLabel, dagger, factor_unimodular, is_circle_preserving, ps_bound_check, unimodular_locus
from .curve import (
    RealCurve,
    SchwarzForm,
    complexify,
    preset_curve,
    realify,
    same_up_to_scalar,
    singular_points,
)
from .exact import ExactComplex, I
from .numeric import DEFAULT_PRECISION, precision, roots_numeric
from .parse import parse_poly
from .puiseux import AsymptoticTag, branch_points, branches_at_infinity, classify, condition_a_holds
from .ratmap import compose, eval_map, image_curve, maps_into, parse_map
from .verify import ContinuationPath, continue_schwarz, verify_involution, verify_reflection_identity

__all__ = ["CHECKS", "run_suite", "rose_closed_form"]


def _zw(text):
    return parse_poly(text, "ZW")


def _uni(text):
    return parse_poly(text, "ZW").to_uni("z")


def _close(a, b, tol):
    return abs(mpc(a) - mpc(b)) <= tol


def rose_closed_form(z, a=2, b=1):
    """``z (a + sqrt(a^2 - b^2 + 2 b z^2)) / (2 z^2 - b)`` on the positive real ray."""
    z = mpc(z)
    return z * (a + gmpy2.sqrt(a * a - b * b + 2 * b * z * z)) / (2 * z * z - b)


# -- exact algebra ------------------------------------------------------------


def check_parse():
    p = _zw("z*w-1")
    ok = p.terms == {(1, 1): ExactComplex.gaussian(1), (0, 0): ExactComplex.gaussian(-1)}
    return ok, str(p)


def check_resultant():
    gens = ("z", "w", "v")
    a = parse_poly("z*w-1", "ZW").with_gens(gens)
    b = _var("w", gens) ** 2 - _var("v", gens)
    r = resultant(a, b, "w")
    expected = _var("v", gens) * _var("z", gens) ** 2 - 1
    return same_up_to_scalar(r, expected), str(r)


def _var(name, gens):
    from .poly import Poly

    return Poly.var(name, gens)


def check_gcd():
    g = gcd(_uni("z^3-z"), _uni("z^2-1"))
    return g == _uni("z^2-1"), str(g)


def check_squarefree():
    s = squarefree_part(_zw("w^2*(w-z)"), "w")
    return same_up_to_scalar(s, _zw("w*(w-z)")), str(s)


def check_root_bound():
    b1 = root_bound(_uni("z^2-1"))
    b2 = root_bound(_uni("z^2+2*z+1"))
    ok = b1 * b1 >= 2 and float(b1) <= 2 ** 0.5 * (1 + 2 ** -53) and b2 == 4
    return ok, f"{float(b1):.17g}, {b2}"


def check_roots_numeric():
    roots = roots_numeric(_uni("(z-2)^2*(z+3)"))
    got = sorted((round(float(r.real), 12), k) for r, k in roots)
    return got == [(-3.0, 1), (2.0, 2)], str(got)


# -- curves ---------------------------------------------------------------------


def check_complexify_circle():
    Q = complexify(RealCurve.parse("x^2+y^2-1")).Q
    return str(Q) == "z*w - 1", str(Q)


def check_complexify_line():
    Q = complexify(RealCurve.parse("y")).Q
    return same_up_to_scalar(Q, _zw("z-w")), str(Q)


def check_complexify_shifted_circle():
    Q = complexify(RealCurve.parse("x^2+y^2-2*x")).Q
    return same_up_to_scalar(Q, _zw("z*w-z-w")), str(Q)


def check_realify():
    P = realify(SchwarzForm(_zw("z*w-z-w"))).P
    return same_up_to_scalar(P, parse_poly("x^2+y^2-2*x")), str(P)


def check_singular_cusp():
    pts = singular_points(RealCurve.parse("y^2-x^3"))
    ok = len(pts) == 1 and abs(pts[0].x) < 1e-30 and abs(pts[0].y) < 1e-30
    return ok, str([(complex(p.x), complex(p.y)) for p in pts])


def check_rose_polynomial():
    C = preset_curve("rose", 1, 2, 1)
    expected = parse_poly("(x^2+y^2)^2-2*(x^2+y^2)-(x^2-y^2)")
    if not same_up_to_scalar(C.P, expected):
        return False, str(C.P)
    with precision(DEFAULT_PRECISION):
        worst = max(abs(C.P.evalf(tuple(C.param(mpfr(k) / 20 * 2 * gmpy2.const_pi())))) for k in range(20))
    return worst <= 1e-12, f"max polar residual {float(worst):.3g}"


# -- Puiseux --------------------------------------------------------------------


def check_branch_points_ellipse():
    bps = branch_points(SchwarzForm(_zw("3*w^2-10*z*w+3*z^2+16")))
    s3 = 3 ** 0.5
    got = sorted(complex(b).real for b in bps)
    ok = len(bps) == 2 and all(abs(complex(b).imag) < 1e-12 for b in bps) and \
        abs(got[0] + s3) < 1e-12 and abs(got[1] - s3) < 1e-12
    return ok, str([complex(b) for b in bps])


def check_branch_unit_circle():
    (b,) = branches_at_infinity(SchwarzForm(_zw("z*w-1")))
    ok = b.m == 1 and b.leading_exponent == -1 and _close(b.leading_coefficient, 1, 1e-30)
    return ok, f"m={b.m}, exponent {b.leading_exponent}"


def check_branch_shifted_circle():
    (b,) = branches_at_infinity(SchwarzForm(_zw("z*w-z-w")))
    ok = b.m == 1 and all(_close(b.coefficient(-k), 1, 1e-30) for k in range(0, 6))
    return ok, f"first terms {[complex(c) for _, c in b.terms[:3]]}"


def check_branch_ellipse():
    bs = branches_at_infinity(SchwarzForm(_zw("3*w^2-10*z*w+3*z^2+16")))
    leads = sorted(float(b.leading_coefficient.real) for b in bs)
    ok = len(bs) == 2 and all(b.m == 1 and b.leading_exponent == 1 for b in bs) and \
        abs(leads[0] - 1 / 3) < 1e-10 and abs(leads[1] - 3) < 1e-10
    return ok, f"leading coefficients {leads}"


def check_rose_limit():
    holds, b = condition_a_holds(complexify(preset_curve("rose", 1, 2, 1)))
    if not holds:
        return False, "no finite-limit branch"
    with precision(DEFAULT_PRECISION):
        ref = abs(rose_closed_form(mpfr(10) ** 6))
        lim = abs(classify(b).limit)
        diff = abs(lim - ref)
    return diff <= 1e-6, f"|limit| = {float(lim):.12f}, closed form at 1e6 = {float(ref):.12f}, diff {float(diff):.3g}"


def check_classify_trichotomy():
    (u,) = branches_at_infinity(SchwarzForm(_zw("z*w-1")))
    (s,) = branches_at_infinity(SchwarzForm(_zw("z*w-z-w")))
    e = max(branches_at_infinity(SchwarzForm(_zw("3*w^2-10*z*w+3*z^2+16"))),
            key=lambda b: abs(b.leading_coefficient))
    cu, cs, ce = classify(u), classify(s), classify(e)
    ok = (cu.tag is AsymptoticTag.DECAY_TO_ZERO and _close(cu.limit, 0, 1e-30)
          and cs.tag is AsymptoticTag.BOUNDED_FINITE_LIMIT and _close(cs.limit, 1, 1e-30)
          and ce.tag is AsymptoticTag.LINEAR_GROWTH)
    return ok, f"{cu.tag.value}, {cs.tag.value}, {ce.tag.value}"


def check_condition_a():
    circle_ok, b = condition_a_holds(complexify(RealCurve.parse("x^2+y^2-1")))
    line_ok, _ = condition_a_holds(complexify(RealCurve.parse("y")))
    (lb,) = branches_at_infinity(complexify(RealCurve.parse("y")))
    ok = circle_ok and _close(classify(b).limit, 0, 1e-30) and not line_ok and lb.leading_exponent == 1
    return ok, f"circle {circle_ok}, line {line_ok}"


# -- rational maps --------------------------------------------------------------


def check_make_map():
    f = parse_map("(z-1/2)/(1-z/2)")
    g = parse_map("(-2*z+1)/(z-2)")
    return f == g, str(f)


def check_eval_map():
    v = eval_map(parse_map("(z-i)/(z+i)"), ExactComplex.gaussian(1))
    return v == -I, str(v)


def check_compose():
    h = compose(parse_map("(z-1/2)/(1-z/2)"), parse_map("(z+1/2)/(1+z/2)"))
    return h == parse_map("z"), str(h)


def check_image_curves():
    circ = RealCurve.parse("x^2+y^2-1")
    cases = [
        ("z^2", circ, "x^2+y^2-1"),
        ("(z-i)/(z+i)", RealCurve.parse("y"), "x^2+y^2-1"),
        ("z+1/z", circ, "y"),
    ]
    out = []
    for f, C, want in cases:
        got = image_curve(parse_map(f), C).P
        out.append(same_up_to_scalar(got, parse_poly(want)))
    return all(out), str(out)


def check_maps_into():
    circ = RealCurve.parse("x^2+y^2-1")
    line = RealCurve.parse("y")
    got = (maps_into(parse_map("z^2"), circ, circ), maps_into(parse_map("z+1/z"), circ, line))
    return got == (True, True), str(got)


# -- Blaschke -------------------------------------------------------------------


def check_dagger():
    f = parse_map("(z-1/2)/(1-z/2)")
    return dagger(f) == parse_map("(1-z/2)/(z-1/2)"), str(dagger(f))


def check_circle_preserving():
    return is_circle_preserving(parse_map("(z-1/2)/(1-z/2)")), ""


def check_factor():
    fac = factor_unimodular(parse_map("(z-1/2)*(z-1/3)/((1-z/2)*(1-z/3))"))
    zeros = sorted(float(a.real) for a, _ in fac.zeros)
    ok = (len(zeros) == 2 and abs(zeros[0] - 1 / 3) < 1e-20 and abs(zeros[1] - 1 / 2) < 1e-20
          and not fac.inverse_factors and abs(abs(fac.unimodular_constant) - 1) < 1e-20
          and fac.residual <= 1e-10)
    return ok, f"zeros {zeros}, residual {fac.residual:.3g}"


def check_unimodular_locus():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        P = unimodular_locus(parse_map("z^2")).P
    return same_up_to_scalar(P, parse_poly("(x^2+y^2)^2-1")), str(P)


def check_ps_bound():
    shared = ps_bound_check(parse_map("z"), parse_map("z^2"))
    counted = ps_bound_check(parse_map("z"), parse_map("z+1"))
    ok = shared.label is PSLabel.SHARED_BLASCHKE_STRUCTURE and counted.count == 2 and counted.bound == 4
    return ok, f"{shared.label.value}; count {counted.count} <= {counted.bound}"


# -- numeric verification -------------------------------------------------------


def check_continuation():
    cases = [("z*w-1", 1, 2, Fraction(1, 2)), ("z*w-z-w", 2, 3, Fraction(3, 2)), ("z-w", 1, 5 + 1j, 5 + 1j)]
    ok = True
    for q, a, b, want in cases:
        with precision(DEFAULT_PRECISION):
            got = continue_schwarz(SchwarzForm(_zw(q)), ContinuationPath(a, b))
            ok = ok and _close(got, complex(want), 1e-30)
    return ok, ""


def check_involution():
    cases = [(RealCurve.parse("x^2+y^2-1"), 1, 1e-10), (RealCurve.parse("x^2+y^2-2*x"), 2, 1e-10),
             (preset_curve("ellipse", 2, 1), 2, 1e-9)]
    res = [verify_involution(C, b, samples=50, tol=t) for C, b, t in cases]
    return all(r.passed for r in res), str([r.max_residual for r in res])


def check_reflection():
    circ = RealCurve.parse("x^2+y^2-1")
    line = RealCurve.parse("y")
    with precision(DEFAULT_PRECISION):
        base6 = gmpy2.exp(mpc(0, gmpy2.const_pi() / 6))
    good = [
        verify_reflection_identity("exp(z+1/z)", circ, line, 1, samples=50, tol=1e-9),
        verify_reflection_identity("exp(-i*z-i/z)", circ, circ, 1, samples=50, tol=1e-9),
        verify_reflection_identity("z+1/z", circ, line, 1j, samples=50, tol=1e-10),
    ]
    bad = verify_reflection_identity("z^2", circ, RealCurve.parse("x^2+y^2-2*x"), base6, samples=50)
    ok = all(r.passed for r in good) and bad.max_residual > 1e-3
    return ok, f"good {[r.max_residual for r in good]}, wrong target {bad.max_residual:.3g}"


CHECKS = [
    ("parse z*w-1", check_parse),
    ("resultant Res_w(zw-1, w^2-v)", check_resultant),
    ("gcd(z^3-z, z^2-1)", check_gcd),
    ("squarefree part of w^2(w-z)", check_squarefree),
    ("root bounds", check_root_bound),
    ("roots of (z-2)^2(z+3)", check_roots_numeric),
    ("complexify unit circle", check_complexify_circle),
    ("complexify real axis", check_complexify_line),
    ("complexify circle(1,1)", check_complexify_shifted_circle),
    ("realify zw-z-w", check_realify),
    ("singular point of cusp", check_singular_cusp),
    ("rose(1,2,1) polynomial", check_rose_polynomial),
    ("ellipse branch points", check_branch_points_ellipse),
    ("unit circle branch", check_branch_unit_circle),
    ("circle(1,1) branch", check_branch_shifted_circle),
    ("ellipse branches", check_branch_ellipse),
    ("rose limit vs closed form at 1e6", check_rose_limit),
    ("trichotomy classes", check_classify_trichotomy),
    ("condition (a)", check_condition_a),
    ("Blaschke factor normal form", check_make_map),
    ("eval (z-i)/(z+i) at 1", check_eval_map),
    ("compose inverse pair", check_compose),
    ("image curves", check_image_curves),
    ("maps_into", check_maps_into),
    ("dagger", check_dagger),
    ("circle-preserving factor", check_circle_preserving),
    ("factor two Blaschke factors", check_factor),
    ("unimodular locus of z^2", check_unimodular_locus),
    ("common points of unimodular loci", check_ps_bound),
    ("continuation examples", check_continuation),
    ("involution", check_involution),
    ("reflection identity", check_reflection),
]


def run_suite(names=None) -> list[dict]:
    rows = []
    for name, fn in CHECKS:
        if names and name not in names:
            continue
        t = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # report, do not abort the table
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        rows.append({"name": name, "passed": bool(passed), "detail": detail,
                     "seconds": round(time.perf_counter() - t, 3)})
    return rows
