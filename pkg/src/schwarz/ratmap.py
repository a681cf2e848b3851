"""Rational maps ``f = num / den`` over the Gaussian rationals.

Includes the elimination that computes the real curve containing ``f(C)`` and
the exact test that ``f`` sends one real curve into another.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpfr

from .algebra import euclid_resultant, gcd, poly_gcd, primitive_part, resultant, resultant_vanishes, squarefree_full
from .curve import RealCurve, complexify, realify, singular_points
from .errors import DegenerateImageError, EvaluationError, ParameterError
from .exact import ONE, ZERO, ExactComplex
from .numeric import DEFAULT_PRECISION, INFINITY, BigComplex, numeric_roots, precision, to_big
from .parse import ParseError, is_rational_node, parse_expr, to_rational
from .poly import Poly, UniPoly

__all__ = [
    "RationalMap",
    "make_map",
    "parse_map",
    "eval_map",
    "compose",
    "conj_map",
    "image_curve",
    "maps_into",
    "SAMPLE_COUNT",
]

SAMPLE_COUNT = 25


@dataclass(frozen=True)
class RationalMap:
    """Normalized ``num / den``: coprime, ``den`` monic (``1`` when constant)."""

    num: UniPoly
    den: UniPoly

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree, 0)

    @property
    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def __call__(self, z):
        return eval_map(self, z)

    def to_json(self) -> dict:
        return {"num": str(self.num), "den": str(self.den)}

    def __str__(self):
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"


def make_map(num: UniPoly, den: UniPoly) -> RationalMap:
    """Cancel the gcd and make the denominator monic."""
    if den.is_zero():
        raise ParameterError("rational map with zero denominator")
    num = UniPoly(num.coeffs, "z")
    den = UniPoly(den.coeffs, "z")
    if num.is_zero():
        return RationalMap(num, UniPoly.const(ONE))
    g = gcd(num, den)
    if g.degree > 0:
        num, den = num.exquo(g), den.exquo(g)
    lc = den.lc
    return RationalMap(num.scale(lc.inverse()), den.monic())


def parse_map(text: str) -> RationalMap:
    """Parse ``"num / den"`` (any rational expression in ``z``)."""
    node = parse_expr(text)
    if not is_rational_node(node):
        raise ParseError("map is not rational (exp is only allowed in numeric checks)")
    num, den = to_rational(node, "z")
    return make_map(num, den)


def conj_map(f: RationalMap) -> RationalMap:
    """Coefficient-wise conjugate ``f*(z) = conj(f(conj z))``."""
    return RationalMap(f.num.conj(), f.den.conj())


def eval_map(f: RationalMap, z, precision_bits: int = DEFAULT_PRECISION):
    """``num(z)/den(z)``, or :data:`INFINITY` at a pole.

    Exact inputs give exact outputs.  Numeric poles are detected when
    ``|den(z)|`` is below ``2**(-precision/2)`` times its weighted norm.
    """
    if isinstance(z, (int, Fraction, ExactComplex)):
        d = f.den(z)
        n = f.num(z)
        if d.is_zero():
            if n.is_zero():
                raise EvaluationError("0/0 in a reduced rational map")
            return INFINITY
        return n / d
    with precision(precision_bits):
        z = to_big(z) if not isinstance(z, BigComplex) else z
        tol = mpfr(2) ** (-precision_bits / 2)
        az = abs(z)

        def weighted(p: UniPoly):
            acc = mpfr(0)
            for c in reversed(p.coeffs):
                acc = acc * az + abs(to_big(c))
            return acc

        n, d = f.num.evalf(z), f.den.evalf(z)
        n_small = abs(n) <= tol * weighted(f.num)
        if abs(d) <= tol * weighted(f.den):
            if n_small:
                raise EvaluationError("indeterminate 0/0; increase precision")
            return INFINITY
        return n / d


def _homogenize(num: UniPoly, den: UniPoly, d: int) -> list[UniPoly]:
    """``[num**k * den**(d-k) for k in 0..d]``."""
    out = []
    for k in range(d + 1):
        out.append(num ** k * den ** (d - k))
    return out


def compose(f: RationalMap, g: RationalMap) -> RationalMap:
    """``f o g`` in normal form."""
    if g.is_constant:
        raise ParameterError("inner map of a composition must be nonconstant")
    d = f.degree
    basis = _homogenize(g.num, g.den, d)
    num = UniPoly([], "z")
    den = UniPoly([], "z")
    for k, b in enumerate(basis):
        num = num + b.scale(f.num.coeff(k))
        den = den + b.scale(f.den.coeff(k))
    h = make_map(num, den)
    if h.degree != f.degree * g.degree:
        raise ArithmeticError("composition degree is not multiplicative")
    return h


# ---------------------------------------------------------------------------
# images of curves


def _embed(u: UniPoly, var: str, gens: tuple) -> Poly:
    return UniPoly(u.coeffs, var).to_poly(gens, var)


def image_curve(f: RationalMap, C: RealCurve) -> RealCurve:
    """The real curve containing ``f(C)``, by eliminating ``z, w``.

    ``Res_w(Q(z, w), v q*(w) - p*(w))`` then ``Res_z(., u q(z) - p(z))``; pure-u
    and pure-v content and non-Hermitian factors are stripped.
    """
    if f.is_constant:
        raise ParameterError("image_curve needs a nonconstant map")
    Q = complexify(C).Q
    fs = conj_map(f)
    g1 = ("z", "w", "v")
    Qe = Q.with_gens(g1)
    Ev = Poly.var("v", g1) * _embed(fs.den, "w", g1) - _embed(fs.num, "w", g1)
    R1 = resultant(Qe, Ev, "w").with_gens(("z", "v"))
    g2 = ("z", "u", "v")
    Eu = Poly.var("u", g2) * _embed(f.den, "z", g2) - _embed(f.num, "z", g2)
    R2 = resultant(R1.with_gens(g2), Eu, "z", allow_constant=True).with_gens(("u", "v"))
    if R2.is_zero() or R2.is_constant():
        raise DegenerateImageError("elimination collapsed; f is constant on the curve",
                                   _degenerate_point(f, C))
    R = primitive_part(primitive_part(R2, "u"), "v") if len(R2.free_gens()) == 2 else R2
    R = squarefree_full(R)
    mirror = R.conj().swap()
    R = poly_gcd(R, mirror)
    if R.is_constant():
        raise DegenerateImageError("image has no Hermitian component", _degenerate_point(f, C))
    return realify(R.rename(("z", "w")).normal_form())


def _degenerate_point(f: RationalMap, C: RealCurve):
    try:
        pts = [p for p in singular_points(C) if p.real]
    except Exception:
        return None
    if not pts:
        return None
    with precision(DEFAULT_PRECISION):
        return eval_map(f, pts[0].x + 1j * pts[0].y)


def _sample_nodes(count: int) -> list[ExactComplex]:
    # fixed, off-axis rational points
    return [ExactComplex(Fraction(k + 2, 7), Fraction(3 * k - 5, 11)) for k in range(count)]


def _pullback(QB: Poly, f: RationalMap) -> Poly:
    """Numerator of ``Q_B(f(z), f*(w))`` cleared of denominators, in ``(z, w)``."""
    gens = ("z", "w")
    fs = conj_map(f)
    du, dv = QB.degree("z"), QB.degree("w")
    bz = [_embed(b, "z", gens) for b in _homogenize(f.num, f.den, du)]
    bw = [_embed(b, "w", gens) for b in _homogenize(fs.num, fs.den, dv)]
    N = Poly({}, gens)
    for (i, j), c in QB.terms.items():
        N = N + (bz[i] * bw[j]).scale(c)
    return N


def maps_into(f: RationalMap, A: RealCurve, B: RealCurve,
              precision_bits: int = DEFAULT_PRECISION) -> bool:
    """Exact test that ``f`` maps the curve ``A`` into ``B``.

    True iff ``Res_w(Q_A, N) == 0`` for the pulled-back numerator ``N`` and
    ``N`` vanishes on ``Q_A`` above 25 rational sample points ``z``.
    """
    if f.is_constant:
        raise ParameterError("maps_into needs a nonconstant map")
    QA = complexify(A).Q
    QB = complexify(B).Q
    N = _pullback(QB, f)
    if N.is_zero():
        return True
    if N.degree("w") < 1 or not resultant_vanishes(QA, N, "w"):
        return False
    return _samples_vanish(QA, N, precision_bits)


def _samples_vanish(QA: Poly, N: Poly, bits: int) -> bool:
    coeffs = QA.coeffs_in("w")
    n = QA.degree("w")
    used = 0
    for z0 in _sample_nodes(4 * SAMPLE_COUNT):
        if used == SAMPLE_COUNT:
            break
        cz = [coeffs[k].subs({"z": z0}).constant_value() if k in coeffs else ZERO for k in range(n + 1)]
        if cz[-1].is_zero():
            continue
        used += 1
        if n == 1:
            w0 = -cz[0] / cz[1]
            if not N.eval_exact((z0, w0)).is_zero():
                return False
            continue
        with precision(bits):
            zf = to_big(z0)
            tol = mpfr(2) ** -64
            for w0, _ in numeric_roots([to_big(c) for c in cz], bits):
                scale = sum(abs(to_big(c)) * abs(zf) ** i * abs(w0) ** j for (i, j), c in N.terms.items())
                if abs(N.evalf((zf, w0))) > tol * scale:
                    return False
    return True
