"""Arbitrary-precision complex numerics on top of gmpy2.

``BigComplex`` is ``gmpy2.mpc``.  Precision is set with :func:`precision`,
which installs a thread-local gmpy2 context, so concurrent callers using
different precisions do not interfere.
"""

from __future__ import annotations

import cmath
import math
from contextlib import contextmanager
from fractions import Fraction
from typing import Sequence

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .errors import PrecisionError
from .exact import ExactComplex
from .poly import UniPoly

__all__ = [
    "BigComplex",
    "MIN_PRECISION",
    "DEFAULT_PRECISION",
    "RootFindingError",
    "precision",
    "to_big",
    "big",
    "roots_numeric",
    "numeric_roots",
    "cluster_roots",
    "horner",
    "INFINITY",
    "is_infinite",
]

BigComplex = type(mpc(0))
MIN_PRECISION = 64
DEFAULT_PRECISION = 128


class RootFindingError(PrecisionError):
    """Simultaneous iteration did not converge; retry at higher precision."""


class _Infinity:
    """The point at infinity of the Riemann sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    __str__ = lambda self: "inf"


INFINITY = _Infinity()


def is_infinite(v) -> bool:
    return v is INFINITY


@contextmanager
def precision(bits: int):
    if bits < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} bits, got {bits}")
    current = gmpy2.get_context().precision
    # never silently downgrade an enclosing higher-precision computation
    with gmpy2.context(gmpy2.get_context(), precision=max(bits, current)):
        yield


def to_big(c) -> BigComplex:
    """Round an exact or Python scalar to the current precision."""
    if isinstance(c, ExactComplex):
        a, b, d = c.parts
        if d == 1:
            return mpc(mpfr(a), mpfr(b))
        return mpc(gmpy2.mpq(a, d), gmpy2.mpq(b, d))
    if isinstance(c, BigComplex):
        return c
    if isinstance(c, Fraction):
        return mpc(gmpy2.mpq(c.numerator, c.denominator), 0)
    return mpc(c)


def big(re, im=0) -> BigComplex:
    """Build a BigComplex from decimal strings, Fractions or numbers."""
    def part(x):
        if isinstance(x, Fraction):
            return gmpy2.mpq(x.numerator, x.denominator)
        if isinstance(x, str) and "/" in x:
            f = Fraction(x)
            return gmpy2.mpq(f.numerator, f.denominator)
        return mpfr(x)
    return mpc(part(re), part(im))


def horner(coeffs: Sequence, x):
    """Value and derivative of ``sum coeffs[k] x**k``."""
    p = coeffs[-1] * 1
    dp = 0
    for c in reversed(coeffs[:-1]):
        dp = dp * x + p
        p = p * x + c
    return p, dp


def _weighted_norm(coeffs, r) -> mpfr:
    ar = abs(r)
    acc = mpfr(0)
    for c in reversed(coeffs):
        acc = acc * ar + abs(c)
    return acc


def _numeric_bound(coeffs) -> float:
    n = len(coeffs) - 1
    an = abs(complex(coeffs[-1]))
    best = 0.0
    for i in range(n):
        ai = abs(complex(coeffs[i]))
        if ai:
            best = max(best, (n * ai / an) ** (1.0 / (n - i)))
    return best


def _seeds(n: int, radius: float) -> list[complex]:
    # points strictly inside the root-bound disk, rotated off the axes
    r = 0.7 * radius if radius > 0 else 1.0
    return [r * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)]


def _aberth_double(coeffs: Sequence[complex], seeds: list[complex], iters: int = 500) -> list[complex] | None:
    c = np.asarray(coeffs, dtype=np.complex128)
    if not np.all(np.isfinite(c)):
        return None
    n = len(c) - 1
    z = np.asarray(seeds, dtype=np.complex128)
    dc = c[1:] * np.arange(1, n + 1)
    cr = c[::-1]
    dcr = dc[::-1]
    for _ in range(iters):
        p = np.polyval(cr, z)
        dp = np.polyval(dcr, z)
        with np.errstate(all="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            s = (1.0 / diff).sum(axis=1) - 1.0
            w = ratio / (1.0 - ratio * s)
        if not np.all(np.isfinite(w)):
            return None
        z = z - w
        if np.all(np.abs(w) <= 1e-14 * np.maximum(1.0, np.abs(z))):
            break
    return [complex(v) for v in z]


def _aberth_big(coeffs: list, z: list, bits: int, max_iter: int) -> list:
    n = len(z)
    eps = mpfr(2) ** (-bits)
    dcoeffs = [coeffs[k] * k for k in range(1, len(coeffs))]
    for _ in range(max_iter):
        done = True
        for i in range(n):
            zi = z[i]
            p = coeffs[-1]
            for c in reversed(coeffs[:-1]):
                p = p * zi + c
            if p == 0:
                continue
            if abs(p) <= 4 * eps * _weighted_norm(coeffs, zi):
                continue
            dp = dcoeffs[-1]
            for c in reversed(dcoeffs[:-1]):
                dp = dp * zi + c
            s = mpc(0)
            for j in range(n):
                if j != i:
                    d = zi - z[j]
                    if d != 0:
                        s += 1 / d
            if dp == 0:
                w = p / (-p * s) if s != 0 else mpc(eps)
            else:
                ratio = p / dp
                w = ratio / (1 - ratio * s)
            z[i] = zi - w
            if abs(w) > eps * max(1, abs(z[i])):
                done = False
        if done:
            return z
    raise RootFindingError(f"Aberth iteration did not converge in {max_iter} sweeps")


def _simultaneous_roots(coeffs: list, bits: int, bound: float) -> list:
    """All roots (with repetition) of a numeric polynomial at ``bits`` precision."""
    n = len(coeffs) - 1
    if n == 0:
        return []
    if n == 1:
        return [-coeffs[0] / coeffs[1]]
    lead = coeffs[-1]
    monic = [c / lead for c in coeffs]
    seeds = _seeds(n, bound)
    # double-precision warm start on a rescaled copy, then polish at full precision
    scale = 2.0 ** math.ceil(math.log2(bound)) if bound > 0 else 1.0
    try:
        scaled = [complex(c) * scale ** (k - n) for k, c in enumerate(monic)]
    except OverflowError:
        scaled = None
    start = None
    if scaled is not None:
        warm = _aberth_double(scaled, [s / scale for s in seeds])
        if warm is not None:
            start = [mpc(complex(v * scale)) for v in warm]
    if start is None:
        start = [mpc(s) for s in seeds]
    return _aberth_big(monic, start, bits, max_iter=60 + 4 * bits)


def cluster_roots(roots: Sequence, radius) -> list[tuple[BigComplex, int]]:
    """Single-linkage clusters within ``radius * max(1, |r|)``; centers are means.

    Output is sorted by (re, im) of the centers.
    """
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            tol = radius * max(1, abs(roots[i]), abs(roots[j]))
            if abs(roots[i] - roots[j]) <= tol:
                parent[find(i)] = find(j)
    groups: dict[int, list] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(roots[i])
    out = []
    for members in groups.values():
        center = sum(members, mpc(0)) / len(members)
        out.append((center, len(members)))
    out.sort(key=lambda t: (t[0].real, t[0].imag))
    return out


def numeric_roots(coeffs: Sequence, bits: int = DEFAULT_PRECISION) -> list[tuple[BigComplex, int]]:
    """Roots with multiplicity of a polynomial with BigComplex coefficients.

    A k-fold root is only located to about ``eps**(1/k)``, so candidates are
    first grouped at a loose, degree-dependent radius.  Each group of size k
    is refined by Newton's method on the ``(k-1)``-th derivative, where the
    root is simple, and accepted when the lower derivatives also vanish
    there; otherwise it falls back to clusters at radius ``2**(-bits/4)``.
    """
    with precision(bits):
        cs = [to_big(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if len(cs) < 2:
            return []
        zeros = 0
        while cs[0] == 0:
            cs.pop(0)
            zeros += 1
        raw = _simultaneous_roots(cs, bits, _numeric_bound(cs)) if len(cs) > 1 else []
        n = len(cs) - 1
        tight = mpfr(2) ** (-bits / 4)
        loose = max(tight, mpfr(2) ** (-bits / (2 * max(n, 2))))
        refined = []
        for (mean, members), k in _cluster_members(raw, loose):
            x = _refine(cs, mean, k, bits, loose)
            if k == 1 or _is_multiple_root(cs, x, k, bits):
                refined.append((x, k))
            else:
                refined.extend((_refine(cs, c, j, bits, tight), j)
                               for c, j in cluster_roots(members, tight))
        if zeros:
            refined.append((mpc(0), zeros))
        refined.sort(key=lambda t: (t[0].real, t[0].imag))
        return refined


def _cluster_members(roots, radius):
    """Like :func:`cluster_roots` but also returns the members: ``((mean, members), k)``."""
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) <= radius * max(1, abs(roots[i]), abs(roots[j])):
                parent[find(i)] = find(j)
    groups: dict[int, list] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(roots[i])
    return [((sum(m, mpc(0)) / len(m), m), len(m)) for m in groups.values()]


def _is_multiple_root(coeffs, x, k, bits) -> bool:
    """``p^(j)(x) / j!`` is negligible for ``j < k`` relative to the weighted norm."""
    tol = mpfr(2) ** (-bits / 2)
    ax = abs(x)
    d = list(coeffs)
    for j in range(k):
        val, _ = horner(d, x)
        norm = mpfr(0)
        for c in reversed(d):
            norm = norm * ax + abs(c)
        if abs(val) > tol * norm:
            return False
        d = [d[i] * i / (j + 1) for i in range(1, len(d))]
    return True


def _refine(coeffs, x, k, bits, radius):
    d = list(coeffs)
    for _ in range(k - 1):
        d = [d[j] * j for j in range(1, len(d))]
    if len(d) < 2:
        return x
    eps = mpfr(2) ** (-bits)
    x0 = x
    for _ in range(8):
        p, dp = horner(d, x)
        if dp == 0:
            break
        step = p / dp
        x = x - step
        if abs(step) <= eps * max(1, abs(x)):
            break
    if abs(x - x0) > radius * max(1, abs(x0)):
        return x0
    return x


def roots_numeric(p: UniPoly, precision_bits: int = DEFAULT_PRECISION) -> list[tuple[BigComplex, int]]:
    """Roots of an exact polynomial with multiplicities.

    Multiplicities are read off the exact squarefree decomposition; roots of
    each squarefree factor come from Aberth iteration seeded inside the
    root-bound disk.  Roots closer than ``2**(-precision/4)`` are then merged.
    Every root is checked to satisfy ``|p(r)| <= 2**(-precision/2) * ||p||_r``
    where ``||p||_r = sum |a_k| |r|**k``.
    """
    from .algebra import root_bound, squarefree_decomposition

    if p.degree < 1:
        raise ValueError("roots_numeric needs degree >= 1")
    bits = precision_bits
    with precision(bits):
        found = []
        for factor, mult in squarefree_decomposition(p):
            f = factor
            if f.coeff(0).is_zero():
                found.append((mpc(0), mult))
                f = UniPoly(f.coeffs[1:], f.var)
            if f.degree < 1:
                continue
            cs = [to_big(c) for c in f.coeffs]
            bound = float(root_bound(f))
            for r in _simultaneous_roots(cs, bits, bound):
                found.append((r, mult))
        merged = _merge(found, mpfr(2) ** (-bits / 4))
        full = [to_big(c) for c in p.coeffs]
        tol = mpfr(2) ** (-bits / 2)
        for r, _ in merged:
            val, _ = horner(full, r)
            if abs(val) > tol * _weighted_norm(full, r):
                raise RootFindingError(f"root {complex(r)} fails the residual check")
        return merged


def _merge(found, radius):
    roots = [r for r, _ in found]
    mult = [m for _, m in found]
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) <= radius * max(1, abs(roots[i])):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = []
    for idx in groups.values():
        # the member with the highest multiplicity is the best-conditioned center
        best = max(idx, key=lambda i: (mult[i], -i))
        out.append((roots[best], sum(mult[i] for i in idx)))
    out.sort(key=lambda t: (t[0].real, t[0].imag))
    return out
