from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from schwarz.algebra import (
    euclid_resultant,
    gcd,
    poly_gcd,
    primitive_part,
    resultant,
    root_bound,
    squarefree_decomposition,
    squarefree_full,
    squarefree_part,
    sylvester_resultant,
)
from schwarz.curve import same_up_to_scalar
from schwarz.exact import ExactComplex
from schwarz.numeric import roots_numeric
from schwarz.parse import parse_poly
from schwarz.poly import Poly, UniPoly

from conftest import real_bipolys, unipolys

SYM = {name: sympy.Symbol(name) for name in "xyzwuv"}


def to_sympy(p):
    expr = 0
    for e, c in p.terms.items():
        t = sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)
        for g, k in zip(p.gens, e):
            t *= SYM[g] ** k
        expr += t
    return sympy.expand(expr)


def sylvester_det(a, b, x):
    """Determinant of the Sylvester matrix, built directly from coefficients."""
    ca = sympy.Poly(a, x).all_coeffs()
    cb = sympy.Poly(b, x).all_coeffs()
    m, n = len(ca) - 1, len(cb) - 1
    rows = [[0] * k + ca + [0] * (n - 1 - k) for k in range(n)]
    rows += [[0] * k + cb + [0] * (m - 1 - k) for k in range(m)]
    return sympy.expand(sympy.Matrix(rows).det(method="berkowitz"))


def uni(text):
    return parse_poly(text, "ZW").to_uni("z")


def test_resultant_example():
    gens = ("z", "w", "v")
    a = parse_poly("z*w-1", "ZW").with_gens(gens)
    b = Poly.var("w", gens) ** 2 - Poly.var("v", gens)
    r = resultant(a, b, "w")
    assert same_up_to_scalar(r, Poly.var("v", gens) * Poly.var("z", gens) ** 2 - 1)
    assert r.degree("w") == 0


@given(real_bipolys(gens=("z", "w"), max_degree=3), real_bipolys(gens=("z", "w"), max_degree=3))
def test_resultant_matches_sympy(a, b):
    if a.degree("w") < 1 or b.degree("w") < 1:
        return
    ours = to_sympy(resultant(a, b, "w"))
    assert sympy.expand(ours - sylvester_det(to_sympy(a), to_sympy(b), SYM["w"])) == 0


@given(unipolys(1, 3), unipolys(1, 3), unipolys(1, 3))
def test_resultant_multiplicative(a, b, c):
    ab = a * b
    left = sylvester_resultant(ab.coeffs, c.coeffs)
    assert left == sylvester_resultant(a.coeffs, c.coeffs) * sylvester_resultant(b.coeffs, c.coeffs)


@given(unipolys(1, 5), unipolys(1, 5))
def test_euclid_agrees_with_bareiss(a, b):
    assert euclid_resultant(a, b) == sylvester_resultant(a.coeffs, b.coeffs)


@given(unipolys(1, 4), unipolys(1, 4))
def test_resultant_vanishes_iff_common_factor(a, b):
    shared = gcd(a, b).degree > 0
    assert (sylvester_resultant(a.coeffs, b.coeffs).is_zero()) == shared


def test_resultant_rejects_zero_degree():
    a = parse_poly("z*w-1", "ZW")
    with pytest.raises(ValueError):
        resultant(a, parse_poly("z", "ZW"), "w")
    assert resultant(a, parse_poly("z", "ZW"), "w", allow_constant=True) == parse_poly("z", "ZW")


def test_gcd_examples():
    assert gcd(uni("z^3-z"), uni("z^2-1")) == uni("z^2-1")
    assert gcd(uni("z^2+1"), uni("z+2")) == uni("1")
    assert gcd(uni("(z-1)*(z-i)"), uni("(z-i)*(z+3)")) == uni("z-i")


@given(unipolys(0, 4), unipolys(0, 4), unipolys(1, 3))
def test_gcd_is_greatest_common_divisor(a, b, c):
    # the cofactors must have a nonzero Sylvester resultant, which is independent of gcd
    if a.is_zero() or b.is_zero():
        return
    g = gcd(a * c, b * c)
    assert g.lc == ExactComplex.gaussian(1)
    ca, cb = (a * c).divmod(g), (b * c).divmod(g)
    assert ca[1].is_zero() and cb[1].is_zero()
    assert g.divmod(c.monic())[1].is_zero()
    if ca[0].degree > 0 and cb[0].degree > 0:
        assert not sylvester_resultant(ca[0].coeffs, cb[0].coeffs).is_zero()


def test_squarefree_part_example():
    s = squarefree_part(parse_poly("w^2*(w-z)", "ZW"), "w")
    assert same_up_to_scalar(s, parse_poly("w*(w-z)", "ZW"))


def test_squarefree_decomposition():
    parts = squarefree_decomposition(uni("(z-2)^2*(z+3)"))
    assert sorted((str(f), k) for f, k in parts) == [("z + 3", 1), ("z - 2", 2)]


@given(real_bipolys(max_degree=3), real_bipolys(max_degree=2))
def test_squarefree_full_removes_squares(a, b):
    p = a * a * b
    s = squarefree_full(p)
    assert p.exquo(s) is not None
    assert squarefree_full(s) == s


def test_poly_gcd_bivariate():
    a = parse_poly("(x^2+y^2-1)*(x-y)", "XY")
    b = parse_poly("(x^2+y^2-1)*(x+2)", "XY")
    assert same_up_to_scalar(poly_gcd(a, b), parse_poly("x^2+y^2-1", "XY"))
    assert poly_gcd(parse_poly("x", "XY"), parse_poly("y+1", "XY")).is_constant()


def test_primitive_part():
    p = parse_poly("(x^2+1)*(x*y-1)", "XY")
    assert same_up_to_scalar(primitive_part(p, "y"), parse_poly("x*y-1", "XY"))


def test_root_bound_examples():
    b = root_bound(uni("z^2-1"))
    assert b * b >= 2
    assert float(b) <= 2 ** 0.5 * (1 + 2 ** -53)
    assert root_bound(uni("z^2+2*z+1")) == 4


@given(st.lists(st.integers(-20, 20), min_size=2, max_size=9))
def test_root_bound_dominates_numpy_roots(cs):
    if cs[-1] == 0:
        cs[-1] = 1
    p = UniPoly([ExactComplex.gaussian(c) for c in cs], "z")
    if p.degree < 1:
        return
    bound = root_bound(p)
    for r in np.roots(cs[::-1]):
        assert abs(r) <= float(bound) * (1 + 1e-9)


def test_roots_numeric_multiplicities():
    roots = sorted(roots_numeric(uni("(z-2)^2*(z+3)")), key=lambda rk: float(rk[0].real))
    assert [k for _, k in roots] == [1, 2]
    assert abs(roots[0][0] + 3) < 1e-30
    assert abs(roots[1][0] - 2) < 1e-30


@given(unipolys(1, 6))
def test_roots_numeric_residual_and_count(p):
    roots = roots_numeric(p)
    assert sum(k for _, k in roots) == p.degree
    ref = np.roots([complex(c.re, c.im) for c in reversed(p.coeffs)])
    for r in ref:
        assert min(abs(complex(x) - r) for x, _ in roots) < 1e-4 * max(1, abs(r))


def test_conj_poly():
    p = parse_poly("i*x + (2-3*i)*y", "XY")
    assert p.conj() == parse_poly("-i*x + (2+3*i)*y", "XY")
