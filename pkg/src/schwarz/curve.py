"""Real plane curves P(x, y) = 0 and their Schwarz defining forms Q(z, w).

On the real locus ``w = conj(z)``, so a branch ``w = S(z)`` of ``Q(z, w) = 0``
is a Schwarz function of the curve.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple

from gmpy2 import cos, mpc, mpfr, sin

from .algebra import gcd, primitive_part, resultant, squarefree_full
from .errors import DegenerateCurveError, NonIsolatedError, ParameterError, SymmetryError
from .exact import ONE, ExactComplex, I, as_exact
from .numeric import DEFAULT_PRECISION, BigComplex, numeric_roots, precision, roots_numeric, to_big
from .parse import parse_poly
from .poly import VARPAIRS, Poly

__all__ = [
    "RealCurve",
    "SchwarzForm",
    "SingularPoint",
    "ReducibleCurveWarning",
    "complexify",
    "realify",
    "hermitian_unit",
    "singular_points",
    "preset_curve",
    "circle",
    "line",
    "ellipse",
    "rose",
    "same_up_to_scalar",
]

XY = VARPAIRS["XY"]
ZW = VARPAIRS["ZW"]


class ReducibleCurveWarning(UserWarning):
    """The defining polynomial visibly splits (repeated factor or content)."""


@dataclass(frozen=True)
class RealCurve:
    """Zero set of a nonconstant real polynomial ``P(x, y)``.

    ``param`` is an optional classical parametrization ``t -> (x, y)`` used to
    sample real points; it does not take part in equality.
    """

    P: Poly
    label: str = field(default="", compare=False)
    param: Callable | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.P.gens != XY:
            raise ParameterError(f"a real curve needs a polynomial in x, y, got {self.P.gens}")
        if self.P.is_constant():
            raise DegenerateCurveError("defining polynomial is constant")
        if not all(c.is_real() for c in self.P.terms.values()):
            raise ParameterError("a real curve needs real coefficients")

    @classmethod
    def parse(cls, text: str) -> "RealCurve":
        return cls(parse_poly(text, "XY"))

    @property
    def degree(self) -> int:
        return self.P.degree()

    def normalized(self) -> "RealCurve":
        return RealCurve(self.P.normal_form(), self.label, self.param)

    def to_json(self) -> dict:
        return {"P": str(self.P), "degree": self.degree}

    def __str__(self):
        return str(self.P)


@dataclass(frozen=True)
class SchwarzForm:
    """``Q(z, w)`` whose branches in ``w`` are the Schwarz functions."""

    Q: Poly

    def __post_init__(self):
        if self.Q.gens != ZW:
            raise ParameterError(f"a Schwarz form needs a polynomial in z, w, got {self.Q.gens}")
        if self.Q.degree("w") < 1:
            raise DegenerateCurveError("Schwarz form has no w-dependence")

    @classmethod
    def parse(cls, text: str) -> "SchwarzForm":
        return cls(parse_poly(text, "ZW").normal_form())

    @property
    def n(self) -> int:
        return self.Q.degree("w")

    def __str__(self):
        return str(self.Q)


class SingularPoint(NamedTuple):
    x: BigComplex
    y: BigComplex
    real: bool


def same_up_to_scalar(a: Poly, b: Poly) -> bool:
    """Exact test that ``a = c * b`` for a nonzero constant ``c``."""
    if a.gens != b.gens or a.terms.keys() != b.terms.keys():
        return False
    if not a.terms:
        return True
    e0 = next(iter(a.terms))
    ratio = a.terms[e0] / b.terms[e0]
    return all(a.terms[e] == ratio * b.terms[e] for e in a.terms)


def hermitian_unit(Q: Poly) -> ExactComplex | None:
    """The constant ``lam`` with ``conj(swap(Q)) == lam * Q``, or None."""
    if Q.is_zero():
        return ONE
    mirror = Q.conj().swap()
    if mirror.terms.keys() != Q.terms.keys():
        return None
    e0 = next(iter(Q.terms))
    lam = mirror.terms[e0] / Q.terms[e0]
    if any(mirror.terms[e] != lam * Q.terms[e] for e in Q.terms):
        return None
    return lam


def _warn_if_reducible(P: Poly, reduced: Poly, what: str):
    if reduced.degree() < P.degree():
        warnings.warn(f"{what}: repeated factor removed", ReducibleCurveWarning, stacklevel=3)
        return
    for v in P.free_gens():
        if len(P.free_gens()) > 1 and not primitive_part(P, v).degree() == P.degree():
            warnings.warn(f"{what}: polynomial has a factor free of {v}", ReducibleCurveWarning,
                          stacklevel=3)
            return


def complexify(C: RealCurve) -> SchwarzForm:
    """Substitute ``x = (z+w)/2``, ``y = (z-w)/(2i)``; squarefree normal form."""
    z, w = Poly.var("z", ZW), Poly.var("w", ZW)
    half = ExactComplex(Fraction(1, 2))
    x_img = (z + w).scale(half)
    y_img = (z - w).scale(-I * half)
    Q = C.P.substitute({"x": x_img, "y": y_img}, ZW)
    if Q.is_constant():
        raise DegenerateCurveError(f"complexification of {C.P} is constant")
    reduced = squarefree_full(Q)
    _warn_if_reducible(Q, reduced, "complexify")
    if reduced.degree("w") < 1:
        raise DegenerateCurveError(f"complexification of {C.P} does not involve w")
    return SchwarzForm(reduced.normal_form())


def realify(S: SchwarzForm | Poly) -> RealCurve:
    """Substitute ``z = x + iy``, ``w = x - iy``; inverse of :func:`complexify`."""
    Q = S.Q if isinstance(S, SchwarzForm) else S
    if Q.gens != ZW:
        raise ParameterError(f"expected a polynomial in z, w, got {Q.gens}")
    if hermitian_unit(Q) is None:
        raise SymmetryError(f"{Q} is not Hermitian-symmetric, so it is not the form of a real curve")
    x, y = Poly.var("x", XY), Poly.var("y", XY)
    R = Q.substitute({"z": x + y.scale(I), "w": x - y.scale(I)}, XY)
    if R.is_zero():
        raise SymmetryError(f"{Q} vanishes identically on the real plane")
    R = R.scale(R.leading()[1].inverse())
    if not all(c.is_real() for c in R.terms.values()):
        raise SymmetryError(f"{Q} does not reduce to a real polynomial")
    return RealCurve(R.normal_form())


# ---------------------------------------------------------------------------
# singular points


def _univariate_singular(P: Poly) -> list[SingularPoint]:
    u = P.to_uni()
    if not gcd(u, u.derivative()).is_constant():
        raise NonIsolatedError(f"{P} has a repeated factor; its singular locus is a curve")
    return []


def singular_points(C: RealCurve, precision_bits: int = DEFAULT_PRECISION) -> list[SingularPoint]:
    """Isolated complex solutions of ``P = P_x = P_y = 0``, flagged real or not."""
    P = C.P
    if P.degree("x") < 1 or P.degree("y") < 1:
        return _univariate_singular(P)
    Px, Py = P.derivative("x"), P.derivative("y")
    R1 = resultant(P, Px, "y", allow_constant=True)
    R2 = resultant(P, Py, "y", allow_constant=True)
    if R2.is_zero():
        raise NonIsolatedError(f"{P} shares a factor with its y-derivative")
    u2 = R2.to_uni("x")
    G = u2 if R1.is_zero() else gcd(R1.to_uni("x"), u2)
    if G.degree < 1:
        return []
    bits = precision_bits
    tol_exp = -bits / 4
    found: list[tuple[BigComplex, BigComplex]] = []
    with precision(bits):
        tol = mpfr(2) ** tol_exp
        ycoeffs = P.coeffs_in("y")
        for x0, _ in roots_numeric(G, bits):
            cs = [ycoeffs[k].evalf((x0,)) if k in ycoeffs else mpc(0)
                  for k in range(max(ycoeffs) + 1)]
            for y0, _ in numeric_roots(cs, bits):
                pt = (x0, y0)
                scale = sum(abs(to_big(c)) for c in P.terms.values()) * max(1, abs(x0), abs(y0)) ** P.degree()
                if all(abs(F.evalf(pt)) <= tol * scale for F in (P, Px, Py)):
                    found.append(pt)
        out = []
        for x0, y0 in found:
            if any(abs(x0 - a) <= tol * max(1, abs(a)) and abs(y0 - b) <= tol * max(1, abs(b))
                   for a, b, _ in out):
                continue
            real = (abs(x0.imag) <= tol * max(1, abs(x0))
                    and abs(y0.imag) <= tol * max(1, abs(y0)))
            out.append(SingularPoint(x0, y0, real))
        out.sort(key=lambda p: (p.x.real, p.x.imag, p.y.real, p.y.imag))
        return out


# ---------------------------------------------------------------------------
# presets


def _frac(v, name: str) -> Fraction:
    try:
        return Fraction(v)
    except (TypeError, ValueError):
        raise ParameterError(f"{name} must be rational, got {v!r}") from None


def circle(z0=0, r=1) -> RealCurve:
    z0 = as_exact(z0)
    r = _frac(r, "r")
    if r <= 0:
        raise ParameterError("circle radius must be positive")
    x, y = Poly.var("x", XY), Poly.var("y", XY)
    a, b = z0.re, z0.im
    P = (x - a) ** 2 + (y - b) ** 2 - r * r
    rr = mpfr(r.numerator) / r.denominator

    def param(t):
        return (mpfr(a.numerator) / a.denominator + rr * cos(t),
                mpfr(b.numerator) / b.denominator + rr * sin(t))

    return RealCurve(P.normal_form(), f"circle({z0}, {r})", param)


def line(z1=0, z2=1) -> RealCurve:
    z1, z2 = as_exact(z1), as_exact(z2)
    if z1 == z2:
        raise ParameterError("a line needs two distinct points")
    x, y = Poly.var("x", XY), Poly.var("y", XY)
    d = z1 - z2
    # Im((z - z2) * conj(z1 - z2)) = 0
    P = (y - z2.im).scale(d.re) - (x - z2.re).scale(d.im)

    def param(t):
        return (mpfr(z2.re.numerator) / z2.re.denominator + t * mpfr(d.re.numerator) / d.re.denominator,
                mpfr(z2.im.numerator) / z2.im.denominator + t * mpfr(d.im.numerator) / d.im.denominator)

    return RealCurve(P.normal_form(), f"line({z1}, {z2})", param)


def ellipse(a=2, b=1) -> RealCurve:
    a, b = _frac(a, "a"), _frac(b, "b")
    if a <= 0 or b <= 0:
        raise ParameterError("ellipse semi-axes must be positive")
    x, y = Poly.var("x", XY), Poly.var("y", XY)
    P = (x ** 2).scale(b * b) + (y ** 2).scale(a * a) - a * a * b * b
    fa = mpfr(a.numerator) / a.denominator
    fb = mpfr(b.numerator) / b.denominator
    return RealCurve(P.normal_form(), f"ellipse({a}, {b})", lambda t: (fa * cos(t), fb * sin(t)))


def _re_power(k: int) -> Poly:
    """``Re((x + iy)**k)`` built by the recursion on real and imaginary parts."""
    x, y = Poly.var("x", XY), Poly.var("y", XY)
    re, im = Poly.const(ONE, XY), Poly.const(0, XY)
    for _ in range(k):
        re, im = x * re - y * im, x * im + y * re
    return re


def rose(m=1, a=2, b=1) -> RealCurve:
    """``r**(2m) = a + b cos(2m theta)`` as ``rho**(2m) - a rho**m - b Re((x+iy)**(2m))``
    with ``rho = x^2 + y^2``."""
    if isinstance(m, Fraction) and m.denominator == 1:
        m = int(m)
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ParameterError("rose index m must be a positive integer")
    a, b = _frac(a, "a"), _frac(b, "b")
    if not (0 < abs(b) < a):
        raise ParameterError("rose parameters need 0 < |b| < a")
    x, y = Poly.var("x", XY), Poly.var("y", XY)
    rho = x ** 2 + y ** 2
    P = rho ** (2 * m) - (rho ** m).scale(a) - _re_power(2 * m).scale(b)
    fa = mpfr(a.numerator) / a.denominator
    fb = mpfr(b.numerator) / b.denominator

    def param(t):
        r = (fa + fb * cos(2 * m * t)) ** (mpfr(1) / (2 * m))
        return (r * cos(t), r * sin(t))

    return RealCurve(P.normal_form(), f"rose({m}, {a}, {b})", param)


_PRESETS = {"circle": circle, "line": line, "ellipse": ellipse, "rose": rose}


def preset_curve(kind: str, *args, **kwargs) -> RealCurve:
    try:
        make = _PRESETS[kind]
    except KeyError:
        raise ParameterError(f"unknown preset {kind!r}; choose from {', '.join(_PRESETS)}") from None
    try:
        return make(*args, **kwargs)
    except TypeError as exc:
        raise ParameterError(f"bad parameters for {kind}: {exc}") from None
