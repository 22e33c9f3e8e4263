"""Exact scalars in the Gaussian rationals Q(i).

A value is stored as ``(a + b*i) / d`` with integers ``a, b`` and ``d > 0``
and ``gcd(a, b, d) == 1``.  That keeps arithmetic on plain Python ints,
which is several times faster than carrying two ``Fraction`` objects.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Union

Scalarlike = Union["GaussianRational", int, Fraction, str]


class GaussianRational:
    __slots__ = ("_a", "_b", "_d", "_hash")

    def __init__(self, re: Scalarlike = 0, im: int | Fraction = 0):
        if isinstance(re, GaussianRational):
            if im:
                raise TypeError("cannot combine a GaussianRational with an imaginary part")
            self._a, self._b, self._d = re._a, re._b, re._d
            self._hash = None
            return
        if isinstance(re, str):
            parsed = parse_scalar(re)
            if im:
                raise TypeError("cannot combine a string with an imaginary part")
            self._a, self._b, self._d = parsed._a, parsed._b, parsed._d
            self._hash = None
            return
        x = Fraction(re)
        y = Fraction(im)
        d = x.denominator * y.denominator // gcd(x.denominator, y.denominator)
        a = x.numerator * (d // x.denominator)
        b = y.numerator * (d // y.denominator)
        _set(self, a, b, d)

    # construction helpers

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> GaussianRational:
        z = object.__new__(cls)
        _set(z, a, b, d)
        return z

    # accessors

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def conj(self) -> GaussianRational:
        if self._b == 0:
            return self
        z = object.__new__(GaussianRational)
        z._a, z._b, z._d, z._hash = self._a, -self._b, self._d, None
        return z

    def norm(self) -> Fraction:
        """Squared modulus |z|^2."""
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    def is_real(self) -> bool:
        return self._b == 0

    # arithmetic

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if self._d == 1 and o._d == 1:
            return GaussianRational._raw(self._a + o._a, self._b + o._b, 1)
        return GaussianRational._raw(
            self._a * o._d + o._a * self._d,
            self._b * o._d + o._b * self._d,
            self._d * o._d,
        )

    __radd__ = __add__

    def __neg__(self):
        z = object.__new__(GaussianRational)
        z._a, z._b, z._d, z._hash = -self._a, -self._b, self._d, None
        return z

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a1, b1, a2, b2 = self._a, self._b, o._a, o._b
        # multiplying by 1 is the common case when one factor is a delta
        if b2 == 0 and a2 == 1 and o._d == 1:
            return self
        if b1 == 0 and a1 == 1 and self._d == 1:
            return o
        if b1 == 0 and b2 == 0:
            return GaussianRational._raw(a1 * a2, 0, self._d * o._d)
        return GaussianRational._raw(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1, self._d * o._d)

    __rmul__ = __mul__

    def inverse(self) -> GaussianRational:
        n = self._a * self._a + self._b * self._b
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational._raw(self._d * self._a, -self._d * self._b, n)

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison / hashing

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def __eq__(self, other) -> bool:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = self._hash = hash((self._a, self._b, self._d))
        return h

    def sort_key(self) -> tuple[Fraction, Fraction]:
        return (self.re, self.im)

    # formatting

    def __repr__(self) -> str:
        return f"GaussianRational({self})"

    def __str__(self) -> str:
        return format_scalar(self)

    def __reduce__(self):
        return (GaussianRational._raw, (self._a, self._b, self._d))


def _set(z: GaussianRational, a: int, b: int, d: int) -> None:
    if d == 0:
        raise ZeroDivisionError("zero denominator")
    if d < 0:
        a, b, d = -a, -b, -d
    if d != 1:
        g = gcd(a, b, d)
        if g != 1:
            a //= g
            b //= g
            d //= g
    if a == 0 and b == 0:
        d = 1
    z._a, z._b, z._d, z._hash = a, b, d, None


def _coerce(x) -> GaussianRational | None:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, int):
        return GaussianRational._raw(x, 0, 1)
    if isinstance(x, Rational):
        return GaussianRational._raw(x.numerator, 0, x.denominator)
    return None


def gr(x: Scalarlike, im: int | Fraction = 0) -> GaussianRational:
    """Coerce ints, fractions and strings like ``"1/2-i"`` to a GaussianRational."""
    if isinstance(x, GaussianRational) and not im:
        return x
    return GaussianRational(x, im)


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def format_scalar(z: GaussianRational) -> str:
    """Canonical wire form ``a/b+c/d*i`` (always both parts, always explicit denominators)."""
    re_part, im_part = z.re, z.im
    sign = "-" if im_part < 0 else "+"
    return f"{_frac_str(re_part)}{sign}{_frac_str(abs(im_part))}*i"


def parse_scalar(text: str) -> GaussianRational:
    """Parse the wire form and friendlier spellings such as ``"1"``, ``"-i"``, ``"1-2*i"``."""
    s = text.replace(" ", "")
    try:
        if not s.endswith("i"):
            return GaussianRational(Fraction(s))
        body = s[:-1]
        if body.endswith("*"):
            body = body[:-1]
            if not body[-1:].isdigit():
                raise ValueError
        k = max(body.rfind("+"), body.rfind("-"))
        real, imag = (body[:k], body[k:]) if k > 0 else ("0", body)
        if imag in ("", "+", "-"):
            imag += "1"
        return GaussianRational(Fraction(real), Fraction(imag))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a Gaussian rational: {text!r}") from None


ZERO = GaussianRational._raw(0, 0, 1)
ONE = GaussianRational._raw(1, 0, 1)
I = GaussianRational._raw(0, 1, 1)

# coefficient alphabet for seeded random elements: {0, +-1, +-i, 1+-i}
RANDOM_COEFFICIENTS = (ZERO, ONE, -ONE, I, -I, ONE + I, ONE - I)
