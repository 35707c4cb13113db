"""Exact scalars in a real quadratic field Q(sqrt(m)).

A ``Scalar`` is ``a + b*sqrt(m)`` with rational ``a`` and ``b``.  Values with
``b == 0`` are plain rationals and mix freely with any radicand; two
irrational values must share the same radicand.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import RadicandMismatch, SchemaError

__all__ = ["Scalar", "to_scalar", "parse_scalar", "ZERO", "ONE", "squarefree"]


def squarefree(m: int) -> bool:
    if m < 1:
        return False
    k = 2
    while k * k <= m:
        if m % (k * k) == 0:
            return False
        k += 1
    return True


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot make an exact rational from {x!r}")


class Scalar:
    __slots__ = ("a", "b", "m")

    def __init__(self, a=0, b=0, m: int = 1):
        a = _frac(a)
        b = _frac(b)
        if b == 0 or m == 1:
            # rational values forget their radicand
            if m == 1 and b != 0:
                a += b
            self.a, self.b, self.m = a, Fraction(0), 1
        else:
            self.a, self.b, self.m = a, b, m

    # construction helpers -------------------------------------------------
    @staticmethod
    def _fast(a: Fraction, b: Fraction, m: int) -> "Scalar":
        s = object.__new__(Scalar)
        if b == 0:
            s.a, s.b, s.m = a, b, 1
        else:
            s.a, s.b, s.m = a, b, m
        return s

    def _common(self, other: "Scalar") -> int:
        if self.m == other.m or other.m == 1:
            return self.m
        if self.m == 1:
            return other.m
        raise RadicandMismatch(f"cannot combine sqrt({self.m}) with sqrt({other.m})")

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = to_scalar(other)
        if other is NotImplemented:
            return other
        m = self._common(other)
        return Scalar._fast(self.a + other.a, self.b + other.b, m)

    __radd__ = __add__

    def __sub__(self, other):
        other = to_scalar(other)
        if other is NotImplemented:
            return other
        m = self._common(other)
        return Scalar._fast(self.a - other.a, self.b - other.b, m)

    def __rsub__(self, other):
        other = to_scalar(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = to_scalar(other)
        if other is NotImplemented:
            return other
        if self.m == 1 and other.m == 1:
            return Scalar._fast(self.a * other.a, Fraction(0), 1)
        m = self._common(other)
        a = self.a * other.a + self.b * other.b * m
        b = self.a * other.b + self.b * other.a
        return Scalar._fast(a, b, m)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.m == 1:
            if self.a == 0:
                raise ZeroDivisionError("inverse of zero")
            return Scalar._fast(1 / self.a, Fraction(0), 1)
        norm = self.a * self.a - self.b * self.b * self.m
        if norm == 0:
            raise ZeroDivisionError("inverse of zero")
        return Scalar._fast(self.a / norm, -self.b / norm, self.m)

    def __truediv__(self, other):
        other = to_scalar(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = to_scalar(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __neg__(self):
        return Scalar._fast(-self.a, -self.b, self.m)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers are exact")
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

    def conjugate(self) -> "Scalar":
        return Scalar._fast(self.a, -self.b, self.m)

    # comparisons ----------------------------------------------------------
    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: compare a^2 with m b^2
        if a * a > b * b * self.m:
            return 1 if a > 0 else -1
        return 1 if b > 0 else -1

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other):
        other = to_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self.a == other.a and self.b == other.b and (self.b == 0 or self.m == other.m)

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.m))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # conversions ----------------------------------------------------------
    def is_rational(self) -> bool:
        return self.b == 0

    def is_integer(self) -> bool:
        return self.b == 0 and self.a.denominator == 1

    def rational(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    def __float__(self):
        if self.b == 0:
            return float(self.a)
        return float(self.a) + float(self.b) * math.sqrt(self.m)

    def floor(self) -> int:
        if self.b == 0:
            return math.floor(self.a)
        n = math.floor(float(self))
        while self < n:
            n -= 1
        while self >= n + 1:
            n += 1
        return n

    def frac(self) -> "Scalar":
        return self - self.floor()

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        rat = _fmt(self.a)
        if self.b == 0:
            return rat
        surd = f"{_fmt(self.b)}√{self.m}"
        if self.a == 0:
            return surd
        return f"{rat}{'' if self.b < 0 else '+'}{surd}"

    def to_json(self):
        if self.b == 0:
            return _fmt(self.a)
        return {"rat": _fmt(self.a), "surd": _fmt(self.b), "radicand": self.m}


def _fmt(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


ZERO = Scalar(0)
ONE = Scalar(1)


def to_scalar(x, m: int = 1):
    """Coerce ints, Fractions and Scalars; anything else gives NotImplemented."""
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar._fast(Fraction(x), Fraction(0), 1)
    return NotImplemented


_SURD_TEXT = re.compile(r"^\s*(?:([+-]?[\d/]+))?\s*(?:([+-]?)\s*([\d/]*)\s*(?:√|sqrt)\s*\(?(\d+)\)?)?\s*$")


def parse_scalar(value, radicand: int = 1) -> Scalar:
    """Parse the JSON scalar forms: ints, "p/q", {"rat": .., "surd": ..}."""
    if isinstance(value, Scalar):
        return value
    if isinstance(value, bool):
        raise SchemaError(f"bad scalar {value!r}")
    if isinstance(value, int):
        return Scalar(value)
    if isinstance(value, float):
        raise SchemaError(f"floats are not exact, write {value!r} as a string fraction")
    if isinstance(value, dict):
        extra = set(value) - {"rat", "surd", "radicand"}
        if extra:
            raise SchemaError(f"unknown scalar keys {sorted(extra)}")
        m = int(value.get("radicand", radicand))
        try:
            a = _frac(str(value.get("rat", "0")))
            b = _frac(str(value.get("surd", "0")))
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad scalar {value!r}: {exc}") from None
        if b != 0 and m != radicand:
            raise SchemaError(f"scalar radicand {m} differs from algebra radicand {radicand}")
        return Scalar(a, b, m)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Scalar(Fraction(text))
        except (ValueError, ZeroDivisionError):
            pass
        match = _SURD_TEXT.match(text)
        if match and match.group(4):
            a = _frac(match.group(1) or "0")
            coef = match.group(3) or "1"
            b = _frac(coef) * (-1 if match.group(2) == "-" else 1)
            m = int(match.group(4))
            if m != radicand:
                raise SchemaError(f"scalar radicand {m} differs from algebra radicand {radicand}")
            return Scalar(a, b, m)
        raise SchemaError(f"bad scalar {value!r}")
    raise SchemaError(f"bad scalar {value!r}")
