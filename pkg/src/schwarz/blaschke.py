"""Rational maps that preserve the unit circle, as quotients of Blaschke products.

``f`` sends the circle into itself iff ``f * f_dagger == 1`` with
``f_dagger(z) = conj(f(1/conj z))``; such ``f`` factor as
``lam * B1 / B2`` with finite Blaschke products ``B1``, ``B2``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

from .algebra import poly_gcd, resultant
from .curve import RealCurve, realify
from .errors import DegenerateCurveError, ParameterError, PrecisionError
from .exact import ExactComplex
from .numeric import DEFAULT_PRECISION, INFINITY, BigComplex, numeric_roots, precision, roots_numeric, to_big
from .poly import Poly
from .ratmap import RationalMap, eval_map, make_map

__all__ = [
    "BlaschkeFactorization",
    "PSResult",
    "PSLabel",
    "dagger",
    "is_circle_preserving",
    "factor_unimodular",
    "blaschke_factor",
    "unimodular_locus",
    "ps_bound_check",
    "CIRCLE_POINTS",
    "RESIDUAL_SAMPLES",
]

RESIDUAL_SAMPLES = 1000

# rational points of the unit circle, tried in order when solving for lambda
CIRCLE_POINTS = tuple(
    ExactComplex(Fraction(a, c), Fraction(b, c))
    for a, b, c in [(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1),
                    (3, 4, 5), (3, -4, 5), (-3, 4, 5), (-3, -4, 5),
                    (5, 12, 13), (5, -12, 13), (-5, 12, 13), (-5, -12, 13)]
)


def dagger(f: RationalMap) -> RationalMap:
    """``z -> conj(f(1/conj z))``: conjugate coefficients, reverse at the map degree."""
    d = f.degree
    return make_map(f.num.conj().reversed(d), f.den.conj().reversed(d))


def is_circle_preserving(f: RationalMap) -> bool:
    """Exact test of ``f * dagger(f) == 1``, i.e. ``|f| = 1`` on the unit circle."""
    d = f.degree
    p, q = f.num, f.den
    return p * p.conj().reversed(d) == q * q.conj().reversed(d)


def blaschke_factor(a, z):
    """``(z - a) / (1 - conj(a) z)``."""
    return (z - a) / (1 - a.conjugate() * z)


@dataclass(frozen=True)
class BlaschkeFactorization:
    unimodular_constant: BigComplex
    zeros: tuple  # ((a, mult), ...) with |a| < 1, zeros of B1
    inverse_factors: tuple  # ((b, mult), ...) with |b| < 1, zeros of B2
    residual: float

    def __call__(self, z):
        val = self.unimodular_constant
        for a, k in self.zeros:
            val = val * blaschke_factor(a, z) ** k
        for b, k in self.inverse_factors:
            val = val / blaschke_factor(b, z) ** k
        return val

    def to_json(self) -> dict:
        lam = self.unimodular_constant
        return {
            "lambda": [float(lam.real), float(lam.imag)],
            "zeros": [[float(a.real), float(a.imag), k] for a, k in self.zeros],
            "inverse_factors": [[float(b.real), float(b.imag), k] for b, k in self.inverse_factors],
            "residual": self.residual,
        }


def _roots(p, bits):
    return roots_numeric(p, bits) if p.degree >= 1 else []


def _match(points, targets, tol) -> bool:
    """Every ``(x, k)`` in ``points`` has a partner in ``targets`` with the same k."""
    pool = list(targets)
    for x, k in points:
        hit = next((i for i, (y, j) in enumerate(pool)
                    if j == k and abs(x - y) <= tol * max(1, abs(y))), None)
        if hit is None:
            return False
        pool.pop(hit)
    return True


def factor_unimodular(f: RationalMap, precision_bits: int = DEFAULT_PRECISION) -> BlaschkeFactorization:
    """Numeric factorization ``f = lam * B1 / B2`` of a circle-preserving map."""
    if f.is_constant:
        raise ParameterError("factor_unimodular needs a nonconstant map")
    if not is_circle_preserving(f):
        raise ParameterError(f"{f} does not preserve the unit circle")
    bits = precision_bits
    with precision(bits):
        tol = mpfr(2) ** (-bits / 4)
        zeros = _roots(f.num, bits)
        poles = _roots(f.den, bits)
        gap = f.num.degree - f.den.degree  # > 0: pole at infinity, pairs with a zero at 0
        inside_z = [(a, k) for a, k in zeros if abs(a) < 1 - tol]
        inside_p = [(b, k) for b, k in poles if abs(b) < 1 - tol]
        outside_z = [(a, k) for a, k in zeros if abs(a) > 1 + tol]
        outside_p = [(b, k) for b, k in poles if abs(b) > 1 + tol]
        if len(inside_z) + len(outside_z) != len(zeros) or len(inside_p) + len(outside_p) != len(poles):
            raise PrecisionError("a zero or pole lies on the unit circle within tolerance")
        # a <-> 1/conj(a); 0 <-> infinity via the degree gap
        mirror_z = [(1 / a.conjugate(), k) for a, k in outside_z]
        mirror_p = [(1 / b.conjugate(), k) for b, k in outside_p]
        if not _match(mirror_z, inside_p, tol) or not _match(mirror_p, inside_z, tol):
            raise PrecisionError("zero/pole pairing a <-> 1/conj(a) failed; increase precision")
        zero_at_0 = sum(k for a, k in inside_z if abs(a) <= tol)
        pole_at_0 = sum(k for b, k in inside_p if abs(b) <= tol)
        if zero_at_0 != max(gap, 0) or pole_at_0 != max(-gap, 0):
            raise PrecisionError("zero/pole at the origin does not match the degree gap")

        def B(z):
            val = mpc(1)
            for a, k in inside_z:
                val = val * blaschke_factor(a, z) ** k
            for b, k in inside_p:
                val = val / blaschke_factor(b, z) ** k
            return val

        lam = None
        for zeta in CIRCLE_POINTS:
            fz = eval_map(f, zeta)
            if fz is INFINITY or fz.is_zero():
                continue
            lam = to_big(fz) / B(to_big(zeta))
            break
        if lam is None:
            raise PrecisionError("no circle point where f is finite and nonzero")
        if abs(abs(lam) - 1) > tol:
            raise PrecisionError(f"|lambda| = {float(abs(lam))} is not 1 within tolerance")
        residual = mpfr(0)
        for k in range(RESIDUAL_SAMPLES):
            z = gmpy2.exp(mpc(0, 2 * gmpy2.const_pi() * k / RESIDUAL_SAMPLES))
            fz = f.num.evalf(z) / f.den.evalf(z)
            residual = max(residual, abs(fz - lam * B(z)))
        return BlaschkeFactorization(lam, tuple(inside_z), tuple(inside_p), float(residual))


def unimodular_locus(f: RationalMap) -> RealCurve:
    """The real curve ``|f(z)| = 1``: realify ``p(z) p*(w) - q(z) q*(w)``."""
    gens = ("z", "w")
    p, q = f.num, f.den
    pz = p.to_poly(gens, "z")
    qz = q.to_poly(gens, "z")
    pw = _in_w(p.conj(), gens)
    qw = _in_w(q.conj(), gens)
    D = pz * pw - qz * qw
    if D.is_zero():
        raise DegenerateCurveError(f"{f} is a unimodular constant; |f| = 1 everywhere")
    if D.is_constant():
        raise DegenerateCurveError(f"|{f}| is never 1")
    return realify(D.normal_form())


def _in_w(u, gens):
    return Poly({(0, k): c for k, c in enumerate(u.coeffs)}, gens)


class PSLabel(str, enum.Enum):
    SHARED_BLASCHKE_STRUCTURE = "SHARED_BLASCHKE_STRUCTURE"
    COUNT = "COUNT"


@dataclass(frozen=True)
class PSResult:
    label: PSLabel
    count: int | None = None
    bound: int = 0
    points: tuple = field(default=(), compare=False)

    @property
    def within_bound(self) -> bool:
        return self.label is PSLabel.SHARED_BLASCHKE_STRUCTURE or self.count <= self.bound

    def to_json(self) -> dict:
        if self.label is PSLabel.SHARED_BLASCHKE_STRUCTURE:
            return {"result": self.label.value, "bound": self.bound}
        return {"result": "count", "count": self.count, "bound": self.bound,
                "points": [[float(x.real), float(y.real)] for x, y in self.points]}


def ps_bound_check(p1: RationalMap, p2: RationalMap,
                   precision_bits: int = DEFAULT_PRECISION) -> PSResult:
    """Common points of ``|p1| = 1`` and ``|p2| = 1``, against ``(n1 + n2)**2``."""
    if p1.is_constant or p2.is_constant:
        raise ParameterError("ps_bound_check needs nonconstant maps")
    bound = (p1.degree + p2.degree) ** 2
    P1 = unimodular_locus(p1).P
    P2 = unimodular_locus(p2).P
    if not poly_gcd(P1, P2).is_constant():
        return PSResult(PSLabel.SHARED_BLASCHKE_STRUCTURE, None, bound)
    pts = _real_intersections(P1, P2, precision_bits)
    return PSResult(PSLabel.COUNT, len(pts), bound, tuple(pts))


def _real_intersections(P1: Poly, P2: Poly, bits: int) -> list:
    """Real common zeros of two coprime real curves by elimination of y."""
    if P1.degree("y") < 1 and P2.degree("y") < 1:
        return []  # unions of vertical lines with no common x
    if P1.degree("y") < 1:
        P1, P2 = P2, P1
    R = resultant(P1, P2, "y", allow_constant=True)
    if R.is_zero():
        raise PrecisionError("curves share a component")
    u = R.to_uni("x")
    if u.degree < 1:
        return []
    with precision(bits):
        tol = mpfr(2) ** (-bits / 4)
        found = []
        yc1 = P1.coeffs_in("y")
        yc2 = P2.coeffs_in("y")
        for x0, _ in roots_numeric(u, bits):
            if abs(x0.imag) > tol * max(1, abs(x0)):
                continue
            x0 = mpc(x0.real, 0)
            cands = []
            for yc in (yc1, yc2):
                cs = [yc[k].evalf((x0,)) if k in yc else mpc(0) for k in range(max(yc) + 1)]
                if any(abs(c) > 0 for c in cs[1:]):
                    cands = [y for y, _ in numeric_roots(cs, bits)]
                    break
            for y0 in cands:
                if abs(y0.imag) > tol * max(1, abs(y0)):
                    continue
                y0 = mpc(y0.real, 0)
                pt = (x0, y0)
                ok = True
                for P in (P1, P2):
                    scale = sum(abs(to_big(c)) * abs(x0) ** i * abs(y0) ** j for (i, j), c in P.terms.items())
                    if abs(P.evalf(pt)) > tol * scale:
                        ok = False
                if ok and not any(abs(x0 - a) <= tol * max(1, abs(a)) and abs(y0 - b) <= tol * max(1, abs(b))
                                  for a, b in found):
                    found.append(pt)
        found.sort(key=lambda p: (p[0].real, p[1].real))
        return found
