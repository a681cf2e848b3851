"""Exact polynomial algebra over the Gaussian rationals.

Resultants are Sylvester determinants computed by fraction-free (Bareiss)
elimination over Z[i].  Multivariate resultants are assembled by evaluating
the remaining variables at integer nodes and interpolating; the Sylvester
matrix always uses the *formal* degrees of the inputs so specialisation
commutes with the determinant.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

import gmpy2

from .exact import ONE, ZERO, ExactComplex
from .poly import Poly, UniPoly

__all__ = [
    "gcd",
    "lcm_poly",
    "squarefree_decomposition",
    "root_bound",
    "conj_poly",
    "sylvester_resultant",
    "euclid_resultant",
    "resultant",
    "poly_gcd",
    "squarefree_part",
    "squarefree_full",
    "primitive_part",
    "resultant_vanishes",
]


# ---------------------------------------------------------------------------
# univariate


# primes p = 1 mod 4, where -1 has a square root and Z[i] maps onto Z/p
_PRIMES = (1000000009, 998244353, 1000000021)


def _sqrt_minus_one(p: int) -> int:
    g = 2
    while pow(g, (p - 1) // 2, p) != p - 1:
        g += 1
    return pow(g, (p - 1) // 4, p)


_ROOTS = {p: _sqrt_minus_one(p) for p in _PRIMES}


def _mod_p(u: UniPoly, p: int) -> list[int] | None:
    s = _ROOTS[p]
    out = []
    for c in u.coeffs:
        a, b, d = c.parts
        if d % p == 0:
            return None
        out.append((a + b * s) * pow(d, -1, p) % p)
    return out


def _gcd_degree_mod_p(a: list[int], b: list[int], p: int) -> int:
    def trim(x):
        while x and x[-1] == 0:
            x.pop()
        return x

    a, b = trim(list(a)), trim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            f = a[-1] * inv % p
            shift = len(a) - len(b)
            for k, c in enumerate(b):
                a[k + shift] = (a[k + shift] - f * c) % p
            trim(a)
            if not a:
                break
        a, b = b, a
    return len(a) - 1


def _coprime_certificate(a: UniPoly, b: UniPoly) -> bool:
    """True proves ``gcd(a, b) == 1``: reduction mod p keeps both degrees and
    can only raise the gcd degree."""
    for p in _PRIMES:
        am, bm = _mod_p(a, p), _mod_p(b, p)
        if am is None or bm is None or am[-1] == 0 or bm[-1] == 0:
            continue
        return _gcd_degree_mod_p(am, bm, p) == 0
    return False


def _primitive(u: UniPoly) -> UniPoly:
    """Scale to Gaussian-integer coefficients with trivial integer content."""
    if u.is_zero():
        return u
    den = 1
    for c in u.coeffs:
        den = lcm(den, c.parts[2])
    ints = []
    g = 0
    for c in u.coeffs:
        a, b, d = c.parts
        a, b = a * (den // d), b * (den // d)
        ints.append((a, b))
        g = gmpy2.gcd(g, gmpy2.gcd(a, b))
    g = int(g)
    return UniPoly([ExactComplex.gaussian(a // g, b // g) for a, b in ints], u.var)


def gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over Q(i)."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    if a.degree > 0 and b.degree > 0 and _coprime_certificate(a, b):
        return UniPoly.const(ONE, a.var)
    a, b = _primitive(a), _primitive(b)
    while not b.is_zero():
        a, b = b, _primitive(a % b)
    return a.monic()


def lcm_poly(a: UniPoly, b: UniPoly) -> UniPoly:
    return (a * b).exquo(gcd(a, b)).monic()


def squarefree_decomposition(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: ``p = lc * prod f_k**k`` with coprime squarefree ``f_k``."""
    if p.degree < 1:
        return []
    dp = p.derivative()
    a = gcd(p, dp)
    b = p.exquo(a)
    c = dp.exquo(a)
    d = c - b.derivative()
    out = []
    k = 1
    while b.degree > 0:
        a = gcd(b, d)
        if a.degree > 0:
            out.append((a, k))
        b = b.exquo(a)
        c = d.exquo(a)
        d = c - b.derivative()
        k += 1
    return out


def _iroot_ceil(t: Fraction, k: int, bits: int = 64) -> Fraction:
    """Rational ``r`` with ``r**k >= t`` and relative excess about ``2**-bits``."""
    if t <= 0:
        return Fraction(0)
    # pick scale s so that t**(1/k) * 2**s has ~bits significant bits
    mag = (t.numerator.bit_length() - t.denominator.bit_length()) // k
    s = max(0, bits - mag)
    num = t.numerator << (s * k)
    q, r = divmod(num, t.denominator)
    if r:
        q += 1
    root, exact = gmpy2.iroot(gmpy2.mpz(q), k)
    root = int(root)
    if not exact or r:
        root += 1
    return Fraction(root, 1 << s)


def root_bound(p: UniPoly) -> Fraction:
    """Upper bound ``max_i (n |a_i / a_n|)**(1/(n-i))`` on the root moduli.

    Each radical is rounded up to a rational, so the returned value is never
    below the real-valued bound.
    """
    n = p.degree
    if n < 1:
        raise ValueError("root bound of a constant polynomial")
    an = p.lc.norm()
    best = Fraction(0)
    for i in range(n):
        ai = p.coeff(i)
        if ai.is_zero():
            continue
        # (n |a_i/a_n|)^(1/(n-i)) = (n^2 |a_i|^2/|a_n|^2)^(1/(2(n-i)))
        t = Fraction(n * n) * ai.norm() / an
        best = max(best, _iroot_ceil(t, 2 * (n - i)))
    return best


def conj_poly(a):
    """Complex-conjugate every coefficient."""
    return a.conj()


# ---------------------------------------------------------------------------
# scalar resultants


def _gauss_rows(coeffs: Sequence[ExactComplex]) -> tuple[list[tuple[int, int]], int]:
    den = 1
    for c in coeffs:
        den = lcm(den, c.parts[2])
    return [(c.parts[0] * (den // c.parts[2]), c.parts[1] * (den // c.parts[2])) for c in coeffs], den


def _bareiss_int(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        rowk = m[k]
        for i in range(k + 1, n):
            rowi = m[i]
            f = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * pivot - f * rowk[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def _gdiv(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    # exact division in Z[i]
    c, d = b
    n = c * c + d * d
    re = a[0] * c + a[1] * d
    im = a[1] * c - a[0] * d
    return re // n, im // n


def _bareiss_gauss(m: list[list[tuple[int, int]]]) -> tuple[int, int]:
    n = len(m)
    if n == 0:
        return (1, 0)
    sign = 1
    prev = (1, 0)
    for k in range(n - 1):
        if m[k][k] == (0, 0):
            for r in range(k + 1, n):
                if m[r][k] != (0, 0):
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return (0, 0)
        pa, pb = m[k][k]
        rowk = m[k]
        for i in range(k + 1, n):
            rowi = m[i]
            fa, fb = rowi[k]
            for j in range(k + 1, n):
                xa, xb = rowi[j]
                ya, yb = rowk[j]
                num = (xa * pa - xb * pb - (fa * ya - fb * yb),
                       xa * pb + xb * pa - (fa * yb + fb * ya))
                rowi[j] = num if prev == (1, 0) else _gdiv(num, prev)
        prev = (pa, pb)
    a, b = m[n - 1][n - 1]
    return sign * a, sign * b


def sylvester_resultant(a: Sequence[ExactComplex], b: Sequence[ExactComplex]) -> ExactComplex:
    """Resultant of coefficient lists (index = exponent) at their formal degrees."""
    m, n = len(a) - 1, len(b) - 1
    if m < 0 or n < 0:
        raise ValueError("empty coefficient list")
    ra, da = _gauss_rows(a)
    rb, db = _gauss_rows(b)
    size = m + n
    zero = (0, 0)
    rows = []
    for i in range(n):
        rows.append([zero] * i + ra[::-1] + [zero] * (n - 1 - i))
    for i in range(m):
        rows.append([zero] * i + rb[::-1] + [zero] * (m - 1 - i))
    if all(x[1] == 0 for row in rows for x in row):
        det = (_bareiss_int([[x[0] for x in row] for row in rows]) if size else 1, 0)
    else:
        det = _bareiss_gauss(rows)
    return ExactComplex.gaussian(*det) / (ExactComplex.gaussian(da) ** n * ExactComplex.gaussian(db) ** m)


def euclid_resultant(a: UniPoly, b: UniPoly) -> ExactComplex:
    """Resultant at the actual degrees via the Euclidean remainder sequence."""
    if a.is_zero() or b.is_zero():
        return ZERO
    res = ONE
    while True:
        m, n = a.degree, b.degree
        if m == 0:
            return res * a.lc ** n
        if n == 0:
            return res * b.lc ** m
        r = a % b
        if r.is_zero():
            return ZERO
        if (m * n) % 2:
            res = -res
        res = res * b.lc ** (m - r.degree)
        a, b = b, r


# ---------------------------------------------------------------------------
# multivariate resultant


def _coeff_list(p: Poly, var: str, formal: int) -> list[ExactComplex]:
    k = p.index(var)
    out = [ZERO] * (formal + 1)
    for e, c in p.terms.items():
        out[e[k]] = c
    return out


def _interpolate(nodes: list[int], values: list[Poly], y: str, gens: tuple) -> Poly:
    """Newton interpolation of Poly-valued samples as a polynomial in ``y``."""
    vals = [v.with_gens(gens) for v in values]
    n = len(nodes)
    coef = list(vals)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            diff = coef[i] - coef[i - 1]
            if not diff.is_zero():
                diff = diff.scale(ExactComplex.gaussian(nodes[i] - nodes[i - j]).inverse())
            coef[i] = diff
    yv = Poly.var(y, gens)
    result = coef[-1]
    for i in range(n - 2, -1, -1):
        result = result * (yv - nodes[i]) + coef[i]
    return result


def _res_formal(a: Poly, b: Poly, var: str, m: int, n: int) -> Poly:
    rest = tuple(g for g in a.gens if g != var)
    if not rest:
        val = sylvester_resultant(_coeff_list(a, var, m), _coeff_list(b, var, n))
        return Poly.const(val, ())
    y = rest[-1]
    da, db = max(a.degree(y), 0), max(b.degree(y), 0)
    bound = m * db + n * da
    nodes = list(range(bound + 1))
    values = [_res_formal(a.subs({y: t}), b.subs({y: t}), var, m, n) for t in nodes]
    return _interpolate(nodes, values, y, rest)


def resultant(a: Poly, b: Poly, var: str, *, allow_constant: bool = False) -> Poly:
    """Sylvester resultant with respect to ``var``, embedded in ``a.gens``.

    The result does not involve ``var``; it is zero exactly when ``a`` and
    ``b`` share a factor of positive degree in ``var``.
    """
    if a.gens != b.gens:
        raise ValueError(f"mixed generators {a.gens} and {b.gens}")
    if a.is_zero() or b.is_zero():
        raise ValueError("resultant of a zero polynomial")
    m, n = a.degree(var), b.degree(var)
    if not allow_constant and (m < 1 or n < 1):
        raise ValueError(f"resultant needs positive degree in {var!r} for both inputs")
    r = _res_formal(a, b, var, m, n)
    return r.with_gens(a.gens)


def resultant_vanishes(a: Poly, b: Poly, var: str) -> bool:
    """Decide ``resultant(a, b, var) == 0`` for bivariate inputs by evaluating
    the other variable at enough nodes, with early exit on a nonzero value."""
    rest = [g for g in a.gens if g != var]
    if len(rest) != 1:
        raise ValueError("resultant_vanishes expects exactly one other variable")
    y = rest[0]
    m, n = a.degree(var), b.degree(var)
    if m < 1 or n < 1:
        return False
    bound = m * max(b.degree(y), 0) + n * max(a.degree(y), 0)
    lca = a.coeffs_in(var)[m]
    lcb = b.coeffs_in(var)[n]
    t = 0
    used = 0
    while used <= bound:
        if lca.subs({y: t}).is_zero() or lcb.subs({y: t}).is_zero():
            t += 1
            continue
        ua = a.subs({y: t}).to_uni(var)
        ub = b.subs({y: t}).to_uni(var)
        if not euclid_resultant(ua, ub).is_zero():
            return False
        used += 1
        t += 1
    return True


# ---------------------------------------------------------------------------
# multivariate gcd / squarefree


def _uni_view(p: Poly, var: str) -> list[Poly]:
    cs = p.coeffs_in(var)
    rest = tuple(g for g in p.gens if g != var)
    deg = max(cs) if cs else -1
    return [cs.get(d, Poly._trusted({}, rest)) for d in range(deg + 1)]


def _from_view(view: list[Poly], var: str, gens: tuple) -> Poly:
    return Poly.from_coeffs_in(var, {d: c for d, c in enumerate(view) if not c.is_zero()}, gens)


def _content(view: list[Poly]) -> Poly:
    g = None
    for c in view:
        if c.is_zero():
            continue
        g = c.normal_form() if g is None else poly_gcd(g, c)
        if g.is_constant():
            break
    return g


def primitive_part(p: Poly, var: str) -> Poly:
    """Divide out the content with respect to ``var`` (a poly in the others)."""
    if p.is_zero():
        return p
    view = _uni_view(p, var)
    c = _content(view)
    if c.is_constant():
        return p.normal_form()
    return _from_view([v.exquo(c) for v in view], var, p.gens).normal_form()


def _prem(u: list[Poly], v: list[Poly]) -> list[Poly]:
    r = list(u)
    dv = len(v) - 1
    lcv = v[-1]
    steps = 0
    delta = len(u) - len(v) + 1
    while len(r) - 1 >= dv and r:
        lr = r[-1]
        shift = len(r) - 1 - dv
        new = [c * lcv for c in r]
        for j, vc in enumerate(v):
            new[j + shift] = new[j + shift] - lr * vc
        new.pop()
        while new and new[-1].is_zero():
            new.pop()
        r = new
        steps += 1
    if steps < delta and r:
        f = lcv ** (delta - steps)
        r = [c * f for c in r]
    return r


def _free_of(a: Poly, b: Poly, var: str, tries: int = 4) -> bool:
    """Certify that ``gcd(a, b)`` has degree 0 in ``var`` (bivariate inputs).

    The gcd's leading coefficient in ``var`` divides that of ``a``, so at a
    node where the latter is nonzero the gcd keeps its degree; a constant
    univariate gcd there proves the claim.  False means "not certified".
    """
    (y,) = [g for g in a.gens if g != var]
    lca = a.coeffs_in(var).get(a.degree(var))
    t = 0
    for t in range(tries):
        if lca is None or lca.subs({y: t}).is_zero():
            continue
        ua, ub = a.subs({y: t}).to_uni(var), b.subs({y: t}).to_uni(var)
        if ub.is_zero():
            continue
        if gcd(ua, ub).degree == 0:
            return True
    return False


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Greatest common divisor over Q(i) in normal form."""
    if a.gens != b.gens:
        raise ValueError(f"mixed generators {a.gens} and {b.gens}")
    gens = a.gens
    if a.is_zero():
        return b.normal_form()
    if b.is_zero():
        return a.normal_form()
    if a.is_constant() or b.is_constant():
        return Poly.const(ONE, gens)
    free = set(a.free_gens()) | set(b.free_gens())
    if len(free) == 1:
        # field Euclid: pseudo-remainders over constants would never shrink
        (v,) = free
        return gcd(a.to_uni(v), b.to_uni(v)).to_poly(gens, v).normal_form()
    if len(gens) == 2 and all(_free_of(a, b, v) for v in gens if a.degree(v) > 0):
        return Poly.const(ONE, gens)
    var = next(g for g in gens if a.degree(g) > 0 or b.degree(g) > 0)
    va, vb = _uni_view(a, var), _uni_view(b, var)
    ca, cb = _content(va), _content(vb)
    c = poly_gcd(ca, cb)
    pa = [x.exquo(ca) for x in va]
    pb = [x.exquo(cb) for x in vb]
    if len(pa) < len(pb):
        pa, pb = pb, pa
    if len(pb) == 1:
        g = Poly.const(ONE, gens)
    else:
        u, v = pa, pb
        while True:
            r = _prem(u, v)
            if not r:
                g = _from_view(v, var, gens)
                break
            if len(r) == 1:
                g = Poly.const(ONE, gens)
                break
            rc = _content(r)
            u, v = v, [x.exquo(rc) for x in r]
        g = primitive_part(g, var)
    return (g * c.with_gens(gens)).normal_form()


def squarefree_part(a: Poly, var: str) -> Poly:
    """Remove repeated factors that involve ``var``; result in normal form."""
    if a.is_zero() or a.degree(var) < 1:
        raise ValueError(f"squarefree_part needs positive degree in {var!r}")
    g = poly_gcd(a, a.derivative(var))
    g = primitive_part(g, var)
    if g.is_constant():
        return a.normal_form()
    return a.exquo(g).normal_form()


def squarefree_full(a: Poly) -> Poly:
    """Remove every repeated factor: ``a / gcd(a, da/dx_1, ..., da/dx_k)``."""
    if a.is_zero() or a.is_constant():
        return a.normal_form()
    g = a
    for x in a.free_gens():
        g = poly_gcd(g, a.derivative(x))
        if g.is_constant():
            return a.normal_form()
    return a.exquo(g).normal_form()

