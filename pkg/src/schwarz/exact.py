"""Exact Gaussian-rational scalars.

Values are stored as ``(a + b*i) / d`` with integers ``a, b, d``, ``d > 0`` and
``gcd(a, b, d) == 1``.  That keeps a single gcd per operation, which matters in
the resultant and interpolation loops.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

__all__ = ["ExactComplex", "as_exact", "ZERO", "ONE", "I"]


class ExactComplex:
    __slots__ = ("_a", "_b", "_d", "_hash")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self._set(re.numerator * (d // re.denominator),
                  im.numerator * (d // im.denominator), d)

    def _set(self, a, b, d):
        g = gcd(a, b, d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        self._a = a
        self._b = b
        self._d = d
        self._hash = None

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "ExactComplex":
        obj = cls.__new__(cls)
        if d < 0:
            a, b, d = -a, -b, -d
        obj._set(a, b, d)
        return obj

    @classmethod
    def gaussian(cls, a: int, b: int = 0) -> "ExactComplex":
        obj = cls.__new__(cls)
        obj._a, obj._b, obj._d, obj._hash = a, b, 1, None
        return obj

    # -- accessors -------------------------------------------------------

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    @property
    def parts(self) -> tuple[int, int, int]:
        """Raw ``(a, b, d)`` with value ``(a + b i) / d``."""
        return self._a, self._b, self._d

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def is_real(self) -> bool:
        return self._b == 0

    def conjugate(self) -> "ExactComplex":
        return ExactComplex._raw(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        """Squared modulus, exact."""
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a1, b1, d1 = self._a, self._b, self._d
        a2, b2, d2 = other._a, other._b, other._d
        if d1 == d2:
            return ExactComplex._raw(a1 + a2, b1 + b2, d1)
        return ExactComplex._raw(a1 * d2 + a2 * d1, b1 * d2 + b2 * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return ExactComplex._raw(-self._a, -self._b, self._d)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a1, b1, d1 = self._a, self._b, self._d
        a2, b2, d2 = other._a, other._b, other._d
        return ExactComplex._raw(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "ExactComplex":
        n = self._a * self._a + self._b * self._b
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        # d / (a + bi) = d (a - bi) / (a^2 + b^2)
        return ExactComplex._raw(self._d * self._a, -self._d * self._b, n)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison / hashing --------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self._a == other._a and self._b == other._b and self._d == other._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._a, self._b, self._d))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def sort_key(self) -> tuple[Fraction, Fraction]:
        return (self.re, self.im)

    # -- conversion ------------------------------------------------------

    def __complex__(self):
        return complex(self._a / self._d, self._b / self._d)

    def __repr__(self):
        return f"ExactComplex({self.re}, {self.im})"

    def __str__(self):
        re, im = self.re, self.im
        if im == 0:
            return str(re)
        if re == 0:
            return _imag_str(im)
        sign = "-" if im < 0 else "+"
        return f"{re}{sign}{_imag_str(abs(im))}"


def _imag_str(im: Fraction) -> str:
    if im == 1:
        return "i"
    if im == -1:
        return "-i"
    if im.denominator == 1:
        return f"{im}*i"
    return f"{im.numerator}*i/{im.denominator}"


def _coerce(x):
    if isinstance(x, ExactComplex):
        return x
    if isinstance(x, int):
        return ExactComplex.gaussian(x)
    if isinstance(x, Fraction):
        return ExactComplex._raw(x.numerator, 0, x.denominator)
    return NotImplemented


def as_exact(x) -> ExactComplex:
    """Coerce ints, Fractions, ``(re, im)`` pairs and decimal strings."""
    if isinstance(x, ExactComplex):
        return x
    if isinstance(x, (int, Fraction)):
        return _coerce(x)
    if isinstance(x, str):
        return ExactComplex(Fraction(x))
    if isinstance(x, tuple) and len(x) == 2:
        return ExactComplex(Fraction(x[0]), Fraction(x[1]))
    if isinstance(x, complex):
        return ExactComplex(Fraction(x.real), Fraction(x.imag))
    raise TypeError(f"cannot convert {x!r} to ExactComplex")


ZERO = ExactComplex.gaussian(0)
ONE = ExactComplex.gaussian(1)
I = ExactComplex.gaussian(0, 1)
