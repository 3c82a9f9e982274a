"""Exact dyadic rounding, real intervals and complex balls.

Every quantity here is an exact :class:`fractions.Fraction`.  Rounding only
happens through :func:`round_down` / :func:`round_up` (and the square-root
variants), which snap a rational to a dyadic with a bounded number of
significant bits in a chosen direction.  Nothing relies on the floating point
rounding mode of the host.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def _as_fraction(x: Rational) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def is_dyadic(x: Rational) -> bool:
    x = _as_fraction(x)
    den = x.denominator
    return den & (den - 1) == 0


def _floor_scaled(num: int, den: int, k: int) -> int:
    """floor(num / den * 2**k) for den > 0."""
    if k >= 0:
        return (num << k) // den
    return num // (den << -k)


def round_down(x: Rational, prec: int) -> Fraction:
    """Largest dyadic with about ``prec`` significant bits that is <= x."""
    x = _as_fraction(x)
    if x == 0 or prec <= 0:
        if prec <= 0:
            raise ValueError("precision must be positive")
        return ZERO
    num, den = x.numerator, x.denominator
    k = prec - (abs(num).bit_length() - den.bit_length())
    m = _floor_scaled(num, den, k)
    return Fraction(m, 1 << k) if k >= 0 else Fraction(m << -k)


def round_up(x: Rational, prec: int) -> Fraction:
    """Smallest dyadic with about ``prec`` significant bits that is >= x."""
    return -round_down(-_as_fraction(x), prec)


def _isqrt_scaled(x: Fraction, prec: int) -> tuple[int, int, bool]:
    # returns (s, k, exact) with s = floor(sqrt(x) * 2**k)
    num, den = x.numerator, x.denominator
    k = prec - (num.bit_length() - den.bit_length()) // 2
    scaled_num = num << (2 * k) if k >= 0 else num
    scaled_den = den if k >= 0 else den << (-2 * k)
    q, r = divmod(scaled_num, scaled_den)
    s = math.isqrt(q)
    return s, k, (r == 0 and s * s == q)


def _dyadic(m: int, k: int) -> Fraction:
    return Fraction(m, 1 << k) if k >= 0 else Fraction(m << -k)


def sqrt_down(x: Rational, prec: int) -> Fraction:
    """Dyadic lower bound of sqrt(x), about ``prec`` bits."""
    x = _as_fraction(x)
    if x < 0:
        raise ValueError("square root of a negative number")
    if x == 0:
        return ZERO
    s, k, _ = _isqrt_scaled(x, prec)
    return _dyadic(s, k)


def sqrt_up(x: Rational, prec: int) -> Fraction:
    """Dyadic upper bound of sqrt(x), about ``prec`` bits."""
    x = _as_fraction(x)
    if x < 0:
        raise ValueError("square root of a negative number")
    if x == 0:
        return ZERO
    s, k, exact = _isqrt_scaled(x, prec)
    return _dyadic(s if exact else s + 1, k)


def to_decimal(x: Rational, digits: int = 17, direction: str = "nearest") -> str:
    """Decimal string of ``x`` rounded to ``digits`` significant digits.

    ``direction`` is ``"down"``, ``"up"`` or ``"nearest"``; directed modes
    give a decimal that is a valid lower (upper) bound of ``x``.
    """
    x = _as_fraction(x)
    if x == 0:
        return "0"
    neg = x < 0
    a = -x if neg else x
    e10 = len(str(a.numerator)) - len(str(a.denominator))
    if Fraction(10) ** e10 > a:
        e10 -= 1
    if Fraction(10) ** (e10 + 1) <= a:
        e10 += 1
    scaled = a * Fraction(10) ** (digits - 1 - e10)
    if direction == "nearest":
        m = round(scaled)
    else:
        toward_up = (direction == "up") != neg
        m = math.ceil(scaled) if toward_up else math.floor(scaled)
    if m >= 10**digits:  # rounding carried into a new digit
        m //= 10
        e10 += 1
    s = str(m).rjust(digits, "0")
    body = s[0] + ("." + s[1:].rstrip("0") if s[1:].rstrip("0") else "")
    return f"{'-' if neg else ''}{body}e{e10:+03d}"


@dataclass(frozen=True)
class Interval:
    """Closed real interval with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _as_fraction(self.lo))
        object.__setattr__(self, "hi", _as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: Rational) -> "Interval":
        x = _as_fraction(x)
        return cls(x, x)

    @classmethod
    def around(cls, c: Rational, r: Rational) -> "Interval":
        c, r = _as_fraction(c), _as_fraction(r)
        return cls(c - r, c + r)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Rational) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def subset_of(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def __add__(self, other):
        other = _coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        other = _coerce(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if self.lo >= 0 and other.lo >= 0:
            return Interval(self.lo * other.lo, self.hi * other.hi)
        p = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(p), max(p))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other.contains_zero():
            raise ZeroDivisionError("interval divisor contains zero")
        return self * Interval(1 / other.hi, 1 / other.lo)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        if n % 2 == 1 or self.lo >= 0:
            return Interval(self.lo**n, self.hi**n)
        if self.hi <= 0:
            return Interval(self.hi**n, self.lo**n)
        return Interval(ZERO, max(self.lo**n, self.hi**n))

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(ZERO, max(-self.lo, self.hi))

    def sqrt(self, prec: int = 64) -> "Interval":
        if self.lo < 0:
            raise ValueError("square root of an interval with negative part")
        return Interval(sqrt_down(self.lo, prec), sqrt_up(self.hi, prec))

    def round(self, prec: int) -> "Interval":
        """Outward rounding of both endpoints to dyadics."""
        return Interval(round_down(self.lo, prec), round_up(self.hi, prec))

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __str__(self):
        return f"[{to_decimal(self.lo, 17, 'down')}, {to_decimal(self.hi, 17, 'up')}]"


def _coerce(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(_as_fraction(x))


def imin(intervals) -> Interval:
    """Enclosure of the minimum of values enclosed by ``intervals``."""
    intervals = list(intervals)
    return Interval(min(i.lo for i in intervals), min(i.hi for i in intervals))


def abs_upper(re: Fraction, im: Fraction, prec: int = 40) -> Fraction:
    """Upper bound of |re + i im|."""
    if im == 0:
        return abs(re)
    if re == 0:
        return abs(im)
    return sqrt_up(re * re + im * im, prec)


@dataclass(frozen=True)
class Ball:
    """Complex ball: every point within ``rad`` of ``re + i*im``."""

    re: Fraction
    im: Fraction
    rad: Fraction = ZERO

    @classmethod
    def exact(cls, re: Rational, im: Rational = 0) -> "Ball":
        return cls(_as_fraction(re), _as_fraction(im), ZERO)

    def __add__(self, other):
        other = _bcoerce(other)
        return Ball(self.re + other.re, self.im + other.im, self.rad + other.rad)

    __radd__ = __add__

    def __neg__(self):
        return Ball(-self.re, -self.im, self.rad)

    def __sub__(self, other):
        other = _bcoerce(other)
        return Ball(self.re - other.re, self.im - other.im, self.rad + other.rad)

    def __rsub__(self, other):
        return _bcoerce(other) - self

    def __mul__(self, other):
        other = _bcoerce(other)
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        rad = ZERO
        if self.rad or other.rad:
            rad = (
                abs_upper(self.re, self.im) * other.rad
                + abs_upper(other.re, other.im) * self.rad
                + self.rad * other.rad
            )
        return Ball(re, im, rad)

    __rmul__ = __mul__

    def conjugate(self) -> "Ball":
        return Ball(self.re, -self.im, self.rad)

    def round(self, prec: int) -> "Ball":
        """Round the centre to ``prec`` bits and absorb the error in the radius."""
        re, im = round_down(self.re, prec), round_down(self.im, prec)
        err = (self.re - re) + (self.im - im)
        rad = self.rad + err
        if rad:
            rad = round_up(rad, 32)
        return Ball(re, im, rad)

    def abs(self, prec: int = 64) -> Interval:
        """Enclosure of the modulus of every point in the ball."""
        if self.im == 0:
            c = abs(self.re)
            return Interval(max(ZERO, c - self.rad), c + self.rad)
        n = self.re * self.re + self.im * self.im
        lo = sqrt_down(n, prec) - self.rad
        return Interval(max(ZERO, lo), sqrt_up(n, prec) + self.rad)

    def contains_zero(self) -> bool:
        return self.re * self.re + self.im * self.im <= self.rad * self.rad

    def contains(self, re: Rational, im: Rational = 0) -> bool:
        dr, di = self.re - re, self.im - im
        return dr * dr + di * di <= self.rad * self.rad

    def real_interval(self) -> Interval:
        return Interval.around(self.re, self.rad)

    def __str__(self):
        return (
            f"({to_decimal(self.re, 17)} {'+' if self.im >= 0 else '-'} "
            f"{to_decimal(abs(self.im), 17)}i) +/- {to_decimal(self.rad, 5, 'up')}"
        )


def _bcoerce(x) -> Ball:
    if isinstance(x, Ball):
        return x
    if isinstance(x, complex):
        return Ball.exact(Fraction(x.real), Fraction(x.imag))
    return Ball.exact(_as_fraction(x))
