"""Exact rationals and certified dyadic-interval enclosures.

Rationals are :class:`fractions.Fraction`. Irrational quantities (pi, arccos,
square roots, logarithms) are returned as :class:`DyadicInterval` values whose
endpoints are integers scaled by a power of two; every operation rounds
outward so the exact value is always inside.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

Number = Union[int, Fraction]

GUARD_BITS = 32


class DomainError(ValueError):
    """Argument outside the domain of a certified function."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


_OPS = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "−": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "×": lambda a, b: a * b,
    "/": lambda a, b: a / b,
    "÷": lambda a, b: a / b,
}


def rational_arith(a, b, op: str) -> Fraction:
    """Exact ``a op b`` in lowest terms; raises ZeroDivisionError for ``x / 0``."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}") from None
    a, b = as_fraction(a), as_fraction(b)
    if op in "/÷" and b == 0:
        raise ZeroDivisionError("rational division by zero")
    return fn(a, b)


def _floor_shift(x: int, k: int) -> int:
    """floor(x / 2**k) for k >= 0, or x * 2**-k."""
    return x >> k if k >= 0 else x << -k


def _ceil_shift(x: int, k: int) -> int:
    return -((-x) >> k) if k >= 0 else x << -k


def _floor_frac(q: Fraction, prec: int) -> int:
    return (q.numerator << prec) // q.denominator if prec >= 0 else math.floor(q / (1 << -prec))


def _ceil_frac(q: Fraction, prec: int) -> int:
    return -((-q.numerator << prec) // q.denominator) if prec >= 0 else math.ceil(q / (1 << -prec))


@dataclass(frozen=True)
class DyadicInterval:
    """Closed interval ``[lo_m / 2**scale, hi_m / 2**scale]``."""

    lo_m: int
    hi_m: int
    scale: int = 0

    def __post_init__(self):
        if self.lo_m > self.hi_m:
            raise ValueError("empty interval: lo > hi")

    # constructors -----------------------------------------------------

    @classmethod
    def exact(cls, x, prec: int = 0) -> DyadicInterval:
        """Tightest enclosure of the rational ``x`` on the grid ``2**-prec``."""
        q = as_fraction(x)
        d = q.denominator
        if d & (d - 1) == 0:
            k = d.bit_length() - 1
            return cls(q.numerator, q.numerator, k)
        return cls(_floor_frac(q, prec), _ceil_frac(q, prec), prec)

    @classmethod
    def hull(cls, *items: DyadicInterval) -> DyadicInterval:
        s = max(i.scale for i in items)
        return cls(
            min(i.lo_m << (s - i.scale) for i in items),
            max(i.hi_m << (s - i.scale) for i in items),
            s,
        )

    # views ------------------------------------------------------------

    @property
    def lo(self) -> Fraction:
        return Fraction(self.lo_m, 1 << self.scale) if self.scale >= 0 else Fraction(self.lo_m << -self.scale)

    @property
    def hi(self) -> Fraction:
        return Fraction(self.hi_m, 1 << self.scale) if self.scale >= 0 else Fraction(self.hi_m << -self.scale)

    @property
    def precision(self) -> int:
        return self.scale

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def approx(self) -> float:
        """Midpoint as a float. Not certified."""
        return float(self.mid)

    def contains(self, x) -> bool:
        if isinstance(x, DyadicInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        q = as_fraction(x)
        return self.lo <= q <= self.hi

    __contains__ = contains

    def intersects(self, other: DyadicInterval) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def width_at_most(self, bits: int) -> bool:
        return self.width <= Fraction(1, 1 << bits)

    def round_out(self, prec: int) -> DyadicInterval:
        if prec >= self.scale:
            return self
        k = self.scale - prec
        return DyadicInterval(_floor_shift(self.lo_m, k), _ceil_shift(self.hi_m, k), prec)

    # arithmetic (exact on dyadics; callers round) -----------------------

    def _aligned(self, other: DyadicInterval):
        s = max(self.scale, other.scale)
        return (
            self.lo_m << (s - self.scale),
            self.hi_m << (s - self.scale),
            other.lo_m << (s - other.scale),
            other.hi_m << (s - other.scale),
            s,
        )

    def _coerce(self, other) -> DyadicInterval:
        if isinstance(other, DyadicInterval):
            return other
        q = as_fraction(other)
        if q.denominator & (q.denominator - 1):
            raise TypeError("non-dyadic rational; use scale_by() with a precision")
        return DyadicInterval.exact(q)

    def __add__(self, other) -> DyadicInterval:
        a, b, c, d, s = self._aligned(self._coerce(other))
        return DyadicInterval(a + c, b + d, s)

    __radd__ = __add__

    def __neg__(self) -> DyadicInterval:
        return DyadicInterval(-self.hi_m, -self.lo_m, self.scale)

    def __sub__(self, other) -> DyadicInterval:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> DyadicInterval:
        return self._coerce(other) - self

    def __mul__(self, other) -> DyadicInterval:
        o = self._coerce(other)
        p = (self.lo_m * o.lo_m, self.lo_m * o.hi_m, self.hi_m * o.lo_m, self.hi_m * o.hi_m)
        return DyadicInterval(min(p), max(p), self.scale + o.scale)

    __rmul__ = __mul__

    def scale_by(self, q, prec: int) -> DyadicInterval:
        """Multiply by an arbitrary rational, rounding outward to ``prec`` bits."""
        q = as_fraction(q)
        lo, hi = self.lo * q, self.hi * q
        if lo > hi:
            lo, hi = hi, lo
        return DyadicInterval(_floor_frac(lo, prec), _ceil_frac(hi, prec), prec)

    def div(self, other: DyadicInterval, prec: int) -> DyadicInterval:
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("divisor interval contains zero")
        a, b = self.lo, self.hi
        c, d = other.lo, other.hi
        qs = (a / c, a / d, b / c, b / d)
        return DyadicInterval(_floor_frac(min(qs), prec), _ceil_frac(max(qs), prec), prec)

    def __repr__(self) -> str:
        return f"DyadicInterval([{float(self.lo)!r}, {float(self.hi)!r}], scale={self.scale})"


ZERO = DyadicInterval(0, 0, 0)


def _adaptive(fn, bits: int) -> DyadicInterval:
    """Evaluate ``fn(w)`` at w = bits + guard, doubling w until width <= 2**-bits."""
    if bits < 1:
        raise ValueError("bits must be >= 1")
    w = bits + GUARD_BITS
    while True:
        res = fn(w)
        if res.width_at_most(bits):
            return res
        w *= 2


# ---------------------------------------------------------------------------
# pi


def _atan_inv(x: int, w: int) -> tuple[int, int]:
    """Fixed-point enclosure of atan(1/x) at scale w, x >= 2."""
    one = 1 << w
    total = 0
    k = 0
    xpow = x
    x2 = x * x
    # first omitted term 1/((2N+1) x^(2N+1)) < 2**-w once x^(2N+1) > 2**w
    while True:
        t = one // ((2 * k + 1) * xpow)
        total += -t if k & 1 else t
        k += 1
        xpow *= x2
        if xpow > one:
            break
    err = k + 1
    return total - err, total + err


@lru_cache(maxsize=64)
def _pi_fixed(w: int) -> DyadicInterval:
    alo, ahi = _atan_inv(5, w)
    blo, bhi = _atan_inv(239, w)
    return DyadicInterval(16 * alo - 4 * bhi, 16 * ahi - 4 * blo, w)


def _pi_w(w: int) -> DyadicInterval:
    return _pi_fixed(w)


@lru_cache(maxsize=64)
def pi_enclosure(bits: int) -> DyadicInterval:
    """Enclosure of pi with width <= 2**-bits.

    The result is snapped to the grid ``2**-(bits+2)`` around the exact value of
    floor(pi * 2**(bits+2)), so the enclosures for increasing ``bits`` nest.
    """
    if bits < 1:
        raise ValueError("bits must be >= 1")
    t = bits + 2
    w = t + GUARD_BITS
    while True:
        enc = _pi_fixed(w)
        f_lo = _floor_shift(enc.lo_m, w - t)
        f_hi = _floor_shift(enc.hi_m, w - t)
        if f_lo == f_hi:
            return DyadicInterval(f_lo - 1, f_lo + 2, t)
        w *= 2


# ---------------------------------------------------------------------------
# square roots, arcsin, arccos


def sqrt_enclosure(q, w: int) -> DyadicInterval:
    """Enclosure of sqrt(q) for a rational q >= 0 on the grid 2**-w."""
    q = as_fraction(q)
    if q < 0:
        raise DomainError("square root of a negative number")
    n_lo = _floor_frac(q, 2 * w)
    n_hi = _ceil_frac(q, 2 * w)
    s_lo = math.isqrt(n_lo)
    s_hi = math.isqrt(n_hi)
    if s_hi * s_hi < n_hi:
        s_hi += 1
    return DyadicInterval(s_lo, s_hi, w)


def sqrt_interval(x: DyadicInterval, w: int) -> DyadicInterval:
    if x.lo < 0:
        raise DomainError("square root of an interval reaching below zero")
    lo = sqrt_enclosure(x.lo, w)
    hi = sqrt_enclosure(x.hi, w)
    return DyadicInterval(lo.lo_m, hi.hi_m, w)


def _asin_nonneg(x: DyadicInterval, w: int) -> DyadicInterval:
    # Maclaurin series with positive coefficients, 0 <= x <= 1/2
    x = x.round_out(w)
    x2 = (x * x).round_out(w)
    power = x
    coeff = Fraction(1)
    acc = DyadicInterval(0, 0, w)
    eps = Fraction(1, 1 << w)
    k = 0
    xhi = x.hi
    while True:
        acc = acc + power.scale_by(coeff, w)
        k += 1
        coeff = coeff * Fraction((2 * k - 1) ** 2, (2 * k) * (2 * k + 1))
        power = (power * x2).round_out(w)
        # tail <= c_k x^(2k+1) / (1 - x^2) <= (4/3) c_k x^(2k+1)
        tail = Fraction(4, 3) * coeff * power.hi
        if tail < eps or xhi == 0:
            break
    return acc + DyadicInterval(0, _ceil_frac(tail, w), w)


def asin_interval(x: DyadicInterval, w: int) -> DyadicInterval:
    """arcsin on an interval inside [-1/2, 1/2]."""
    if x.lo < Fraction(-1, 2) or x.hi > Fraction(1, 2):
        raise DomainError("series arcsin needs |x| <= 1/2")
    if x.lo >= 0:
        return _asin_nonneg(x, w)
    if x.hi <= 0:
        return -_asin_nonneg(-x, w)
    return DyadicInterval.hull(
        -_asin_nonneg(DyadicInterval(0, -x.lo_m, x.scale), w),
        _asin_nonneg(DyadicInterval(0, x.hi_m, x.scale), w),
    )


def _arccos_w(x: Fraction, w: int) -> DyadicInterval:
    if x == 1:
        return DyadicInterval(0, 0, 0)
    if x == -1:
        return _pi_w(w)
    if x < 0:
        return _pi_w(w) - _arccos_w(-x, w)
    if x <= Fraction(1, 2):
        half_pi = DyadicInterval(_pi_w(w).lo_m, _pi_w(w).hi_m, w + 1)
        return half_pi - asin_interval(DyadicInterval.exact(x, w), w)
    # arccos x = 2 arcsin(sqrt((1 - x) / 2)) for x >= 1/2
    u = sqrt_enclosure((1 - x) / 2, w)
    return asin_interval(u, w) * 2


def arccos_enclosure(x, bits: int) -> DyadicInterval:
    """Enclosure of arccos(x) in radians with width <= 2**-bits."""
    x = as_fraction(x)
    if abs(x) > 1:
        raise DomainError(f"arccos undefined at {x}")
    if x == 1:
        return DyadicInterval(0, 0, 0)
    if x == -1:
        return pi_enclosure(bits)
    return _adaptive(lambda w: _arccos_w(x, w), bits)


def arcsin_enclosure(x, bits: int) -> DyadicInterval:
    x = as_fraction(x)
    if abs(x) > 1:
        raise DomainError(f"arcsin undefined at {x}")

    def ev(w):
        half_pi = DyadicInterval(_pi_w(w).lo_m, _pi_w(w).hi_m, w + 1)
        return half_pi - _arccos_w(x, w)

    return _adaptive(ev, bits)


def ln_enclosure(re, im_sign: int, bits: int) -> tuple[DyadicInterval, DyadicInterval]:
    """Principal logarithm of a unimodular complex number.

    The number is ``re + i*im`` with ``im = im_sign * sqrt(1 - re**2)``; only
    the sign of the imaginary part is needed because the modulus is 1. Returns
    enclosures of the real part (always exactly 0) and of the argument in
    (-pi, pi].
    """
    re = as_fraction(re)
    if abs(re) > 1:
        raise DomainError("real part outside [-1, 1] cannot lie on the unit circle")
    if re == -1:
        raise DomainError("z = -1 is the branch point of the principal logarithm")
    if re == 1:
        return ZERO, ZERO
    if im_sign not in (1, -1):
        raise DomainError("imaginary part must be nonzero unless z = 1")
    theta = arccos_enclosure(re, bits)
    return ZERO, theta if im_sign > 0 else -theta


def ln_rational_enclosure(q, bits: int) -> DyadicInterval:
    """Natural logarithm of a positive rational."""
    q = as_fraction(q)
    if q <= 0:
        raise DomainError("logarithm of a non-positive rational")
    k = q.numerator.bit_length() - q.denominator.bit_length()
    y = q / Fraction(2) ** k
    while y >= 2:
        y /= 2
        k += 1
    while y < 1:
        y *= 2
        k -= 1

    def atanh2(t: Fraction, w: int) -> DyadicInterval:
        # 2 atanh(t) = 2 sum t^(2j+1)/(2j+1), 0 <= t <= 1/3
        acc = DyadicInterval(0, 0, w)
        power = t
        j = 0
        eps = Fraction(1, 1 << w)
        while True:
            acc = acc + DyadicInterval.exact(power / (2 * j + 1), w)
            j += 1
            power *= t * t
            tail = power / ((2 * j + 1) * (1 - t * t))
            if tail < eps:
                break
        return (acc + DyadicInterval(0, _ceil_frac(tail, w), w)) * 2

    def ev(w):
        ln_y = atanh2((y - 1) / (y + 1), w)
        ln2 = atanh2(Fraction(1, 3), w)
        return ln_y + ln2 * k

    return _adaptive(ev, bits)
