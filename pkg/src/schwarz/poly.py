"""Sparse multivariate and dense univariate polynomials over Gaussian rationals."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping

from .exact import ONE, ZERO, ExactComplex, as_exact

__all__ = ["Poly", "UniPoly", "VARPAIRS", "MixedVariablesError"]

# Named variable pairs used across the package.
VARPAIRS = {"XY": ("x", "y"), "ZW": ("z", "w"), "UV": ("u", "v")}
_PAIR_TAG = {v: k for k, v in VARPAIRS.items()}


class MixedVariablesError(ValueError):
    pass


def _coeff(c) -> ExactComplex:
    return c if isinstance(c, ExactComplex) else as_exact(c)


class Poly:
    """Immutable sparse polynomial in the named generators ``gens``.

    ``terms`` maps exponent tuples (aligned with ``gens``) to nonzero
    :class:`ExactComplex` coefficients.  A two-generator poly over one of the
    pairs in :data:`VARPAIRS` is what the rest of the package calls a BiPoly.
    """

    __slots__ = ("gens", "terms", "_hash")

    def __init__(self, terms: Mapping[tuple, object] | None, gens: Iterable[str]):
        self.gens = tuple(gens)
        n = len(self.gens)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match generators {self.gens}")
            c = _coeff(c)
            if not c.is_zero():
                clean[e] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _trusted(cls, terms: dict, gens: tuple) -> "Poly":
        obj = cls.__new__(cls)
        obj.gens = gens
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c, gens: Iterable[str]) -> "Poly":
        gens = tuple(gens)
        return cls({(0,) * len(gens): c}, gens)

    @classmethod
    def var(cls, name: str, gens: Iterable[str]) -> "Poly":
        gens = tuple(gens)
        e = tuple(1 if g == name else 0 for g in gens)
        if name not in gens:
            raise ValueError(f"unknown variable {name!r}")
        return cls({e: ONE}, gens)

    # -- structure -------------------------------------------------------

    @property
    def varpair(self) -> str | None:
        return _PAIR_TAG.get(self.gens)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> ExactComplex:
        return self.terms.get((0,) * len(self.gens), ZERO)

    def index(self, var: str) -> int:
        try:
            return self.gens.index(var)
        except ValueError:
            raise ValueError(f"variable {var!r} not in {self.gens}") from None

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (total degree when omitted); -1 for the zero poly."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        k = self.index(var)
        return max(e[k] for e in self.terms)

    def free_gens(self) -> tuple[str, ...]:
        """Generators that actually occur."""
        return tuple(g for k, g in enumerate(self.gens) if any(e[k] for e in self.terms))

    def leading(self) -> tuple[tuple, ExactComplex]:
        """Lexicographically largest exponent and its coefficient."""
        e = max(self.terms)
        return e, self.terms[e]

    # -- arithmetic ------------------------------------------------------

    def _check(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.gens != self.gens:
                raise MixedVariablesError(
                    f"cannot combine polynomials in {self.gens} and {other.gens}")
            return other
        try:
            return Poly.const(_coeff(other), self.gens)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
        return Poly._trusted(out, self.gens)

    __radd__ = __add__

    def __neg__(self):
        return Poly._trusted({e: -c for e, c in self.terms.items()}, self.gens)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return Poly._trusted({e: c for e, c in out.items() if not c.is_zero()}, self.gens)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = _coeff(c)
        if c.is_zero():
            return Poly._trusted({}, self.gens)
        return Poly._trusted({e: v * c for e, v in self.terms.items()}, self.gens)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.const(ONE, self.gens)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def exquo(self, other: "Poly") -> "Poly":
        """Exact quotient; raises ``ValueError`` when ``other`` does not divide."""
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        le, lc = other.leading()
        inv = lc.inverse()
        rem = dict(self.terms)
        quo = {}
        while rem:
            e = max(rem)
            if any(a < b for a, b in zip(e, le)):
                raise ValueError("polynomial division is not exact")
            q = tuple(a - b for a, b in zip(e, le))
            c = rem[e] * inv
            quo[q] = c
            for e2, c2 in other.terms.items():
                t = tuple(a + b for a, b in zip(q, e2))
                s = rem.get(t, ZERO) - c * c2
                if s.is_zero():
                    rem.pop(t, None)
                else:
                    rem[t] = s
        return Poly._trusted(quo, self.gens)

    # -- transformations -------------------------------------------------

    def conj(self) -> "Poly":
        return Poly._trusted({e: c.conjugate() for e, c in self.terms.items()}, self.gens)

    def swap(self) -> "Poly":
        """Reverse the exponent order (for two generators: swap the variables)."""
        return Poly._trusted({e[::-1]: c for e, c in self.terms.items()}, self.gens)

    def derivative(self, var: str) -> "Poly":
        k = self.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = e[:k] + (e[k] - 1,) + e[k + 1:]
                out[ne] = c * e[k]
        return Poly._trusted(out, self.gens)

    def with_gens(self, gens: Iterable[str]) -> "Poly":
        """Re-express over ``gens``; every occurring variable must be kept."""
        gens = tuple(gens)
        pos = {g: k for k, g in enumerate(self.gens)}
        for g in self.free_gens():
            if g not in gens:
                raise ValueError(f"variable {g!r} occurs but is not in {gens}")
        idx = [pos.get(g) for g in gens]
        out = {}
        for e, c in self.terms.items():
            ne = tuple(e[k] if k is not None else 0 for k in idx)
            out[ne] = c
        return Poly._trusted(out, gens)

    def rename(self, gens: Iterable[str]) -> "Poly":
        """Same exponents, new generator names."""
        gens = tuple(gens)
        if len(gens) != len(self.gens):
            raise ValueError("rename needs the same number of generators")
        return Poly._trusted(dict(self.terms), gens)

    def subs(self, values: Mapping[str, object]) -> "Poly":
        """Substitute exact scalars for some generators, dropping them."""
        keep = [k for k, g in enumerate(self.gens) if g not in values]
        drop = [(k, _coeff(values[g])) for k, g in enumerate(self.gens) if g in values]
        powers: dict = {}
        out: dict = {}
        for e, c in self.terms.items():
            for k, v in drop:
                key = (k, e[k])
                p = powers.get(key)
                if p is None:
                    p = powers[key] = v ** e[k]
                c = c * p
            if c.is_zero():
                continue
            ne = tuple(e[k] for k in keep)
            s = out.get(ne)
            out[ne] = c if s is None else s + c
        return Poly._trusted({e: c for e, c in out.items() if not c.is_zero()},
                             tuple(self.gens[k] for k in keep))

    def substitute(self, values: Mapping[str, "Poly"], gens: Iterable[str]) -> "Poly":
        """Replace generators by polynomials over ``gens``."""
        gens = tuple(gens)
        images = []
        for g in self.gens:
            if g in values:
                images.append(values[g].with_gens(gens) if values[g].gens != gens else values[g])
            else:
                images.append(Poly.var(g, gens))
        cache: dict = {}
        result = Poly._trusted({}, gens)
        for e, c in self.terms.items():
            term = Poly.const(c, gens)
            for k, p in enumerate(e):
                if p:
                    key = (k, p)
                    if key not in cache:
                        cache[key] = images[k] ** p
                    term = term * cache[key]
            result = result + term
        return result

    def coeffs_in(self, var: str) -> dict[int, "Poly"]:
        """View as a univariate polynomial in ``var``: exponent -> coefficient poly."""
        k = self.index(var)
        rest = self.gens[:k] + self.gens[k + 1:]
        groups: dict = {}
        for e, c in self.terms.items():
            groups.setdefault(e[k], {})[e[:k] + e[k + 1:]] = c
        return {d: Poly._trusted(t, rest) for d, t in groups.items()}

    @classmethod
    def from_coeffs_in(cls, var: str, coeffs: Mapping[int, "Poly"], gens: Iterable[str]) -> "Poly":
        gens = tuple(gens)
        k = gens.index(var)
        out = {}
        for d, p in coeffs.items():
            for e, c in p.terms.items():
                out[e[:k] + (d,) + e[k:]] = c
        return cls._trusted(out, gens)

    def to_uni(self, var: str | None = None) -> "UniPoly":
        free = self.free_gens()
        if var is None:
            if len(free) > 1:
                raise ValueError(f"not univariate: {free}")
            var = free[0] if free else (self.gens[0] if self.gens else "z")
        elif any(g != var for g in free):
            raise ValueError(f"not univariate in {var!r}: {free}")
        if var not in self.gens:
            return UniPoly([self.constant_value()], var)
        k = self.gens.index(var)
        n = self.degree(var)
        coeffs = [ZERO] * (n + 1)
        for e, c in self.terms.items():
            coeffs[e[k]] = c
        return UniPoly(coeffs, var)

    # -- normal form -----------------------------------------------------

    def clear_denominators(self) -> "Poly":
        """Scale to Gaussian-integer coefficients with trivial integer content."""
        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = lcm(den, c.parts[2])
        g = 0
        ints = {}
        for e, c in self.terms.items():
            a, b, d = c.parts
            a, b = a * (den // d), b * (den // d)
            ints[e] = (a, b)
            g = gcd(g, a, b)
        return Poly._trusted({e: ExactComplex.gaussian(a // g, b // g) for e, (a, b) in ints.items()},
                             self.gens)

    def normal_form(self) -> "Poly":
        """Primitive Gaussian-integer form whose lex-leading coefficient lies in
        the quadrant ``re > 0, im >= 0`` (fixed by a unit of Z[i])."""
        p = self.clear_denominators()
        if not p.terms:
            return p
        _, lc = p.leading()
        a, b, _ = lc.parts
        if a > 0 and b >= 0:
            return p
        if b > 0 and a <= 0:
            unit = ExactComplex.gaussian(0, -1)
        elif a < 0 and b <= 0:
            unit = ExactComplex.gaussian(-1)
        else:
            unit = ExactComplex.gaussian(0, 1)
        return p.scale(unit)

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        return self.scale(self.leading()[1].inverse())

    # -- numeric ---------------------------------------------------------

    def evalf(self, point) -> object:
        """Evaluate at numeric values aligned with ``gens`` (gmpy2 or Python numbers)."""
        from .numeric import to_big

        total = 0
        for e, c in self.terms.items():
            t = to_big(c)
            for v, p in zip(point, e):
                if p:
                    t = t * v ** p
            total = total + t
        return total

    def eval_exact(self, point) -> ExactComplex:
        vals = [_coeff(v) for v in point]
        total = ZERO
        for e, c in self.terms.items():
            t = c
            for v, p in zip(vals, e):
                if p:
                    t = t * v ** p
            total = total + t
        return total

    # -- dunder ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.gens == other.gens and self.terms == other.terms
        if isinstance(other, (int, Fraction, ExactComplex)):
            return self == Poly.const(other, self.gens)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.gens, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({str(self)!r}, gens={self.gens})"

    def __str__(self):
        return format_poly(self)


def _sorted_terms(p: Poly):
    return sorted(p.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)


def _coeff_str(c: ExactComplex) -> tuple[str, str]:
    """Return (sign, magnitude-string) for a coefficient in grammar syntax."""
    re, im = c.re, c.im
    if im == 0:
        return ("-" if re < 0 else "+"), _frac(abs(re))
    if re == 0:
        mag = abs(im)
        body = "i" if mag == 1 else f"{_frac(mag)}*i"
        return ("-" if im < 0 else "+"), body
    s = f"{_frac(re)}{'-' if im < 0 else '+'}{'' if abs(im) == 1 else _frac(abs(im)) + '*'}i"
    return "+", f"({s})"


def _frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_poly(p: Poly) -> str:
    """Render in the package's polynomial grammar, e.g. ``z*w - 1``."""
    if not p.terms:
        return "0"
    parts = []
    for e, c in _sorted_terms(p):
        mono = "*".join(g if k == 1 else f"{g}^{k}" for g, k in zip(p.gens, e) if k)
        sign, mag = _coeff_str(c)
        if not mono:
            body = mag
        elif mag == "1":
            body = mono
        else:
            body = f"{mag}*{mono}"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class UniPoly:
    """Dense univariate polynomial; ``coeffs[k]`` multiplies ``var**k``."""

    __slots__ = ("coeffs", "var", "_hash")

    def __init__(self, coeffs: Iterable = (), var: str = "z"):
        cs = [_coeff(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var
        self._hash = None

    @classmethod
    def const(cls, c, var: str = "z") -> "UniPoly":
        return cls([c], var)

    @classmethod
    def x(cls, var: str = "z") -> "UniPoly":
        return cls([ZERO, ONE], var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> ExactComplex:
        return self.coeffs[-1] if self.coeffs else ZERO

    def coeff(self, k: int) -> ExactComplex:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def _same(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        try:
            return UniPoly.const(_coeff(other), self.var)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self.coeff(k) + other.coeff(k) for k in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return UniPoly([], self.var)
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out, self.var)

    __rmul__ = __mul__

    def scale(self, c) -> "UniPoly":
        c = _coeff(c)
        return UniPoly([a * c for a in self.coeffs], self.var)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = UniPoly.const(ONE, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly([], self.var), self
        inv = other.lc.inverse()
        quo = [ZERO] * (dq + 1)
        m = len(other.coeffs) - 1
        for k in range(dq, -1, -1):
            c = rem[k + m] * inv
            quo[k] = c
            if c.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * b
        return UniPoly(quo, self.var), UniPoly(rem[:m], self.var)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def exquo(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("polynomial division is not exact")
        return q

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self.scale(self.lc.inverse())

    def derivative(self) -> "UniPoly":
        return UniPoly([c * k for k, c in enumerate(self.coeffs)][1:], self.var)

    def conj(self) -> "UniPoly":
        return UniPoly([c.conjugate() for c in self.coeffs], self.var)

    def reversed(self, d: int | None = None) -> "UniPoly":
        """``var**d * p(1/var)``; ``d`` defaults to the degree."""
        d = self.degree if d is None else d
        if d < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        cs = list(self.coeffs) + [ZERO] * (d + 1 - len(self.coeffs))
        return UniPoly(cs[::-1], self.var)

    def compose(self, other: "UniPoly") -> "UniPoly":
        result = UniPoly([], other.var)
        for c in reversed(self.coeffs):
            result = result * other + c
        return result

    def __call__(self, x):
        """Exact evaluation (Horner)."""
        x = _coeff(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evalf(self, x):
        from .numeric import to_big

        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + to_big(c)
        return acc

    def to_poly(self, gens: Iterable[str], var: str | None = None) -> Poly:
        gens = tuple(gens)
        var = var or self.var
        k = gens.index(var)
        return Poly({tuple(d if j == k else 0 for j in range(len(gens))): c
                     for d, c in enumerate(self.coeffs)}, gens)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, ExactComplex)):
            return self == UniPoly.const(other, self.var)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self):
        return f"UniPoly({str(self)!r})"

    def __str__(self):
        return format_poly(self.to_poly((self.var,)))
