"""Branch points and Newton-Puiseux expansions of Schwarz branches at infinity.

With ``z = 1/t`` the branches ``w(t)`` of ``Q(1/t, w) = 0`` are expanded at
``t = 0`` by the Newton polygon method.  Exponents are exact Fractions; the
coefficients are BigComplex roots of the edge polynomials.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import gmpy2
from gmpy2 import mpc, mpfr

from .algebra import resultant
from .curve import SchwarzForm
from .errors import DegenerateCurveError, PrecisionError
from .numeric import (
    DEFAULT_PRECISION,
    INFINITY,
    BigComplex,
    cluster_roots,
    numeric_roots,
    precision,
    roots_numeric,
    to_big,
)

__all__ = [
    "PuiseuxBranch",
    "AsymptoticTag",
    "AsymptoticClass",
    "branch_points",
    "branches_at_infinity",
    "classify",
    "condition_a_holds",
    "DEFAULT_ORDER",
]

DEFAULT_ORDER = 8
MAX_DOUBLINGS = 3


@dataclass(frozen=True)
class PuiseuxBranch:
    """``w = sum c_k z**e_k`` near ``z = infinity`` with ``e_k`` in ``(1/m) Z``.

    ``terms`` holds ``(exponent, coefficient)`` with strictly decreasing
    exponents.  An empty ``terms`` is the branch ``w = 0``.
    """

    m: int
    terms: tuple
    truncation_order: int
    exact: bool = False  # the series terminates; ``terms`` is the whole branch

    @property
    def leading_exponent(self) -> Fraction | None:
        return self.terms[0][0] if self.terms else None

    @property
    def leading_coefficient(self) -> BigComplex:
        return self.terms[0][1] if self.terms else mpc(0)

    def coefficient(self, exponent) -> BigComplex:
        exponent = Fraction(exponent)
        for e, c in self.terms:
            if e == exponent:
                return c
        return mpc(0)

    def __call__(self, z) -> BigComplex:
        """Truncated sum using the principal branch of ``z**(1/m)``."""
        z = mpc(z)
        logz = gmpy2.log(z)
        total = mpc(0)
        for e, c in self.terms:
            total += c * gmpy2.exp(logz * e.numerator / e.denominator)
        return total

    def to_json(self) -> dict:
        cls = classify(self)
        lim = cls.limit
        return {
            "m": self.m,
            "terms": [[e.numerator, e.denominator, float(c.real), float(c.imag)] for e, c in self.terms],
            "class": cls.tag.value,
            "limit": "inf" if lim is INFINITY else [float(lim.real), float(lim.imag)],
        }


class AsymptoticTag(str, enum.Enum):
    LINEAR_GROWTH = "LINEAR_GROWTH"
    BOUNDED_FINITE_LIMIT = "BOUNDED_FINITE_LIMIT"
    DECAY_TO_ZERO = "DECAY_TO_ZERO"
    POLE_AT_INFINITY = "POLE_AT_INFINITY"
    OTHER = "OTHER"


@dataclass(frozen=True)
class AsymptoticClass:
    tag: AsymptoticTag
    limit: object  # BigComplex or INFINITY


def classify(branch: PuiseuxBranch) -> AsymptoticClass:
    e = branch.leading_exponent
    if e is None or e < 0:
        return AsymptoticClass(AsymptoticTag.DECAY_TO_ZERO, mpc(0))
    if e == 0:
        return AsymptoticClass(AsymptoticTag.BOUNDED_FINITE_LIMIT, branch.leading_coefficient)
    if e == 1:
        return AsymptoticClass(AsymptoticTag.LINEAR_GROWTH, INFINITY)
    if e.denominator == 1:
        return AsymptoticClass(AsymptoticTag.POLE_AT_INFINITY, INFINITY)
    return AsymptoticClass(AsymptoticTag.OTHER, INFINITY)


# ---------------------------------------------------------------------------
# branch points


@functools.lru_cache(maxsize=64)
def _branch_points_cached(Q, bits: int) -> tuple:
    Qw = Q.derivative("w")
    disc = resultant(Q, Qw, "w", allow_constant=True)
    if disc.is_zero():
        raise DegenerateCurveError(f"{Q} is not squarefree in w; the discriminant vanishes")
    lead = Q.coeffs_in("w")[Q.degree("w")]
    found = []
    with precision(bits):
        for p in (disc, lead):
            u = p.with_gens(("z",)).to_uni("z")
            if u.degree >= 1:
                found.extend(r for r, _ in roots_numeric(u, bits))
        merged = cluster_roots(found, mpfr(2) ** (-bits / 4))
        return tuple(c for c, _ in merged)


def branch_points(S: SchwarzForm, precision_bits: int = DEFAULT_PRECISION) -> list[BigComplex]:
    """Roots of the w-discriminant together with roots of the w-leading coefficient."""
    Q = S.Q if isinstance(S, SchwarzForm) else S
    return list(_branch_points_cached(Q, precision_bits))


# ---------------------------------------------------------------------------
# Newton polygon machinery


def _lower_hull(points: list[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    """Vertices of the lower convex hull, left to right; ``points`` sorted by j."""
    hull: list[tuple[int, Fraction]] = []
    for p in points:
        while len(hull) >= 2:
            (j1, a1), (j2, a2) = hull[-2], hull[-1]
            # drop the middle vertex unless it lies strictly below the chord
            if (a2 - a1) * (p[0] - j1) >= (p[1] - a1) * (j2 - j1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _column_minima(H: dict) -> dict[int, Fraction]:
    low: dict[int, Fraction] = {}
    for a, j in H:
        if j not in low or a < low[j]:
            low[j] = a
    return low


def _prune(H: dict, bits: int) -> dict:
    if not H:
        return H
    top = max(abs(c) for c in H.values())
    cut = top * mpfr(2) ** (-bits / 2)
    return {k: c for k, c in H.items() if abs(c) > cut}


def _substitute(H: dict, gamma: Fraction, c, k: int) -> dict:
    """``t**(-mu) H(t, t**gamma (c + w1))`` with the known-zero terms removed."""
    mu = min(a + j * gamma for a, j in H)
    out: dict = {}
    for (a, j), h in H.items():
        shift = a + j * gamma - mu
        cp = [mpc(1)]
        for _ in range(j):
            cp.append(cp[-1] * c)
        for l in range(j + 1):
            key = (shift, l)
            val = h * comb(j, l) * cp[j - l]
            out[key] = out.get(key, 0) + val
    # c is a root of multiplicity k of the edge polynomial: the t**0 w1**l
    # coefficients with l < k vanish exactly
    for l in range(k):
        out.pop((Fraction(0), l), None)
    return out


def _edges(H: dict, jmax: int | None):
    """``(gamma, j1, j2, edge terms)`` for each lower-hull edge (restricted to j <= jmax)."""
    low = _column_minima(H)
    pts = sorted((j, a) for j, a in low.items() if jmax is None or j <= jmax)
    hull = _lower_hull(pts)
    for (j1, a1), (j2, a2) in zip(hull, hull[1:]):
        gamma = Fraction(a1 - a2, 1) / (j2 - j1)
        mu = a1 + j1 * gamma
        on = {j: H[(a, j)] for (a, j) in H if j1 <= j <= j2 and a + j * gamma == mu}
        yield gamma, j1, j2, on


def _edge_roots(on: dict, j1: int, j2: int, e: int, bits: int):
    """Roots ``u = c**e`` of the edge polynomial with multiplicities."""
    deg = (j2 - j1) // e
    coeffs = [mpc(0)] * (deg + 1)
    for j, h in on.items():
        if (j - j1) % e:
            if abs(h) > 0:
                raise PrecisionError("edge polynomial is not a polynomial in c**e")
            continue
        coeffs[(j - j1) // e] = h
    return numeric_roots(coeffs, bits)


@dataclass
class _Node:
    H: dict
    terms: list  # (t-exponent cumulative, coefficient)
    M: int
    k: int
    shift: Fraction  # cumulative t-exponent so far


def _expand(Q, order: int, bits: int) -> list[PuiseuxBranch]:
    H0 = {(Fraction(-i), j): to_big(c) for (i, j), c in Q.terms.items()}
    root = _Node(H0, [], 1, Q.degree("w"), Fraction(0))
    out: list[PuiseuxBranch] = []
    stack = _children(root, bits, top=True)
    max_steps = order + 8 * Q.degree("w") + 16
    while stack:
        node = stack.pop()
        while True:
            if len(node.terms) > max_steps:
                raise PrecisionError("Newton polygon recursion did not separate the branches")
            if not node.H:
                out.append(_finish(node, order, exact=True))
                break
            if node.k == 1 and len(node.terms) >= order:
                out.append(_finish(node, order, exact=False))
                break
            kids = _children(node, bits)
            if len(kids) == 1 and kids[0].k == node.k:
                node = kids[0]
                continue
            stack.extend(kids)
            break
    return out


def _children(node: _Node, bits: int, top: bool = False) -> list[_Node]:
    """Split ``node`` by the Newton polygon of its remaining equation."""
    low = _column_minima(node.H)
    jmin = min(low)
    kids = []
    if jmin > 1:
        raise PrecisionError("repeated exact branch; the form is not squarefree in w")
    if jmin == 1:
        # w1 = 0 solves the remaining equation: the series stops here
        kids.append(_Node({}, list(node.terms), node.M, 1, node.shift))
    total = jmin
    for gamma, j1, j2, on in _edges(node.H, None if top else node.k):
        if not top and gamma <= 0:
            raise PrecisionError("non-positive slope below the current term")
        e = (gamma * node.M).denominator
        for u, mult in _edge_roots(on, j1, j2, e, bits):
            c = u ** (mpfr(1) / e) if e > 1 else u
            sub = _prune(_substitute(node.H, gamma, c, mult), bits)
            kids.append(_Node(sub, node.terms + [(node.shift + gamma, c)], node.M * e, mult,
                              node.shift + gamma))
            total += e * mult
    if total != node.k:
        raise PrecisionError("branch multiplicities do not add up; increase precision")
    return kids


def _finish(node: _Node, order: int, exact: bool) -> PuiseuxBranch:
    terms = tuple((-a, c) for a, c in node.terms[:order])
    exact = exact and len(node.terms) <= order
    return PuiseuxBranch(node.M, terms, order, exact)


def _sort_key(b: PuiseuxBranch):
    key = []
    for e, c in b.terms:
        key.append((-e, round(float(c.real), 10), round(float(c.imag), 10)))
    return (b.leading_exponent is None, key)


def branches_at_infinity(S: SchwarzForm, order: int = DEFAULT_ORDER,
                         precision_bits: int = DEFAULT_PRECISION) -> list[PuiseuxBranch]:
    """Puiseux branches of ``w(z)`` at ``z = infinity`` to ``order`` terms.

    On failure the whole expansion is retried with doubled precision, at
    most three times.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    Q = S.Q if isinstance(S, SchwarzForm) else S
    if Q.degree("w") < 1:
        raise DegenerateCurveError("form has no w-dependence")
    bits = precision_bits
    last = None
    for _ in range(MAX_DOUBLINGS + 1):
        try:
            with precision(bits):
                branches = _expand(Q, order, bits)
                if sum(b.m for b in branches) != Q.degree("w"):
                    raise PrecisionError("branch count does not match the w-degree")
                branches.sort(key=_sort_key)
                return branches
        except PrecisionError as exc:
            last = exc
            bits *= 2
    raise PrecisionError(f"Puiseux expansion failed up to {bits // 2} bits: {last}")


def condition_a_holds(S: SchwarzForm, order: int = DEFAULT_ORDER,
                      precision_bits: int = DEFAULT_PRECISION):
    """``(True, branch)`` for the first branch with a finite limit at infinity."""
    for b in branches_at_infinity(S, order, precision_bits):
        e = b.leading_exponent
        if e is None or e <= 0:
            return True, b
    return False, None
