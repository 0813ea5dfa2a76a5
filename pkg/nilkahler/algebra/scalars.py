"""Exact scalars in the field Q(i, sqrt(d)).

A scalar is stored as four reduced rationals (x, y, u, v) standing for
x + y*i + (u + v*i)*sqrt(d). Scalars without a sqrt(d) part are field
agnostic and combine with any extension.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from nilkahler.exceptions import FieldMismatchError, NilkahlerError


@lru_cache(maxsize=None)
def check_sqrt(d: int) -> int:
    """Validate the radicand of the quadratic extension.

    Raises:
        NilkahlerError: If d is negative, one, or not square-free.
    """
    if d < 0 or d == 1:
        raise NilkahlerError(f"sqrt({d}) does not define a quadratic extension of Q(i)")
    for f in range(2, math.isqrt(d) + 1):
        if d % (f * f) == 0:
            raise NilkahlerError(f"sqrt({d}): radicand is not square-free")
    return d


def _join_fields(d1: int, d2: int) -> int:
    if d1 == 0:
        return d2
    if d2 == 0 or d1 == d2:
        return d1
    raise FieldMismatchError(f"cannot combine scalars from Q(i, sqrt({d1})) and Q(i, sqrt({d2}))")


def _gauss_mul(a, b, c, e):
    return a * c - b * e, a * e + b * c


def _format_rational(q: Fraction) -> str:
    return str(q)


class Scalar:
    """An immutable element of Q(i, sqrt(d))."""

    __slots__ = ("x", "y", "u", "v", "d")

    def __init__(self, x=0, y=0, u=0, v=0, d: int = 0):
        x, y, u, v = Fraction(x), Fraction(y), Fraction(u), Fraction(v)
        if u == 0 and v == 0:
            d = 0
        elif d:
            check_sqrt(d)
        else:
            raise NilkahlerError("a sqrt(d) component needs d >= 2")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def coerce(cls, value) -> Scalar:
        """Turn an int, Fraction, complex with integral parts or Scalar into a Scalar."""
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Rational)):
            return cls(value)
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        raise TypeError(f"cannot interpret {value!r} as a Scalar")

    @classmethod
    def sqrt(cls, d: int) -> Scalar:
        if d == 0:
            return ZERO
        if math.isqrt(d) ** 2 == d:
            return cls(math.isqrt(d))
        return cls(0, 0, 1, 0, d)

    # predicates

    def is_zero(self) -> bool:
        return not (self.x or self.y or self.u or self.v)

    def is_real(self) -> bool:
        return self.y == 0 and self.v == 0

    def is_rational(self) -> bool:
        return self.y == 0 and self.u == 0 and self.v == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    # arithmetic

    def __add__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        d = _join_fields(self.d, other.d)
        return Scalar(self.x + other.x, self.y + other.y, self.u + other.u, self.v + other.v, d)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.x, -self.y, -self.u, -self.v, self.d)

    def __sub__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            other = Fraction(other)
            return Scalar(self.x * other, self.y * other, self.u * other, self.v * other, self.d)
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        d = _join_fields(self.d, other.d)
        ax, ay = _gauss_mul(self.x, self.y, other.x, other.y)
        if not (self.u or self.v or other.u or other.v):
            return Scalar(ax, ay)
        bx, by = _gauss_mul(self.u, self.v, other.u, other.v)
        cx, cy = _gauss_mul(self.x, self.y, other.u, other.v)
        ex, ey = _gauss_mul(self.u, self.v, other.x, other.y)
        return Scalar(ax + d * bx, ay + d * by, cx + ex, cy + ey, d)

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero scalar")
        # (A + B s)^-1 = (A - B s) / (A^2 - d B^2) with N = A^2 - d B^2 a Gaussian rational
        ax, ay = _gauss_mul(self.x, self.y, self.x, self.y)
        bx, by = _gauss_mul(self.u, self.v, self.u, self.v)
        nx, ny = ax - self.d * bx, ay - self.d * by
        norm = nx * nx + ny * ny
        ix, iy = nx / norm, -ny / norm
        px, py = _gauss_mul(self.x, self.y, ix, iy)
        qx, qy = _gauss_mul(-self.u, -self.v, ix, iy)
        return Scalar(px, py, qx, qy, self.d)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroDivisionError("division of a scalar by zero")
            return self * (1 / Fraction(other))
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conj(self) -> Scalar:
        return Scalar(self.x, -self.y, self.u, -self.v, self.d)

    def abs2(self) -> Scalar:
        """|s|^2 = s * conj(s), a real scalar."""
        return self * self.conj()

    def real_part(self) -> Scalar:
        return Scalar(self.x, 0, self.u, 0, self.d)

    def imag_part(self) -> Scalar:
        return Scalar(self.y, 0, self.v, 0, self.d)

    # order on real scalars

    def sign(self) -> int:
        """Exact sign of a real scalar x + u*sqrt(d)."""
        if not self.is_real():
            raise NilkahlerError(f"sign of the non-real scalar {self}")
        x, u = self.x, self.u
        sx = (x > 0) - (x < 0)
        su = (u > 0) - (u < 0)
        if su == 0:
            return sx
        if sx == 0 or sx == su:
            return su
        # opposite signs: compare x^2 against d u^2
        diff = x * x - self.d * u * u
        return sx if diff > 0 else (su if diff < 0 else 0)

    def _compare(self, other) -> int:
        return (self - Scalar.coerce(other)).sign()

    def __lt__(self, other):
        return self._compare(other) < 0

    def __le__(self, other):
        return self._compare(other) <= 0

    def __gt__(self, other):
        return self._compare(other) > 0

    def __ge__(self, other):
        return self._compare(other) >= 0

    # identity

    def _key(self):
        return (self.x, self.y, self.u, self.v, self.d)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self._key() == other._key()
        if isinstance(other, (int, Rational, complex)):
            return self._key() == Scalar.coerce(other)._key()
        return NotImplemented

    def __hash__(self):
        return hash(self._key())

    def __complex__(self):
        root = math.sqrt(self.d)
        return complex(float(self.x) + float(self.u) * root, float(self.y) + float(self.v) * root)

    def __float__(self):
        if not self.is_real():
            raise NilkahlerError(f"float of the non-real scalar {self}")
        return complex(self).real

    def __str__(self):
        head = f"{_format_rational(self.x)}+{_format_rational(self.y)}*i"
        if self.d == 0:
            return head
        return f"{head}+({_format_rational(self.u)}+{_format_rational(self.v)}*i)*sqrt({self.d})"

    def __repr__(self):
        return f"Scalar({self})"


ZERO = Scalar()
ONE = Scalar(1)
I = Scalar(0, 1)


def sigma(p: int) -> Scalar:
    """The normalization constant i^(p^2) 2^(-p)."""
    if p < 0:
        raise NilkahlerError("sigma(p) needs p >= 0")
    scale = Fraction(1, 2**p)
    # p^2 is 0 mod 4 for even p and 1 mod 4 for odd p
    return Scalar(0, scale) if p % 2 else Scalar(scale)
