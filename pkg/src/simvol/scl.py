"""Rotation numbers, scl values and the alpha_n sequence.

``alpha_n = 24 * arccos(1 - 2**-(n+1)) / pi``. All public values are
certified :class:`~simvol.exact.DyadicInterval` enclosures; floats appear only
as labelled, non-certified renderings.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import (
    DomainError,
    DyadicInterval,
    _adaptive,
    _arccos_w,
    _pi_w,
    as_fraction,
)


@dataclass(frozen=True)
class Matrix2:
    """Element of SL2(Z[1/2]) with rational entries (a b; c d)."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            v = as_fraction(getattr(self, name))
            object.__setattr__(self, name, v)
            den = v.denominator
            if den & (den - 1):
                raise ValueError(f"entry {name} = {v} is not a dyadic rational")
        if self.det != 1:
            raise ValueError(f"determinant is {self.det}, expected 1")

    @classmethod
    def parse(cls, text: str) -> Matrix2:
        parts = [Fraction(p.strip()) for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError("expected four comma-separated entries a,b,c,d")
        return cls(*parts)

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> Fraction:
        return self.a + self.d

    def __matmul__(self, o: Matrix2) -> Matrix2:
        return Matrix2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )


IDENTITY = Matrix2(1, 0, 0, 1)


def g_matrix(n: int) -> Matrix2:
    """g_n = (2, 1 + 2^(1-n); -1, -2^-n) for n >= 1."""
    if n < 1:
        raise ValueError("g_n is defined for n >= 1")
    return Matrix2(Fraction(2), 1 + Fraction(2, 1 << n), Fraction(-1), -Fraction(1, 1 << n))


def _check_elliptic(g: Matrix2) -> Fraction:
    tr = g.trace
    if abs(tr) > 2:
        raise DomainError(f"|tr| = {abs(tr)} > 2: hyperbolic elements are not handled")
    return tr / 2


def _rot_w(x: Fraction, w: int) -> DyadicInterval:
    return _arccos_w(x, w).div(_pi_w(w), w)


def rot_lift(g: Matrix2, bits: int) -> DyadicInterval:
    """Rotation number arccos(tr/2)/pi of the standard lift."""
    x = _check_elliptic(g)
    if x == 1:
        return DyadicInterval(0, 0, 0)
    if x == -1:
        return DyadicInterval(1, 1, 0)
    return _adaptive(lambda w: _rot_w(x, w), bits)


def scl_lift(g: Matrix2, bits: int) -> DyadicInterval:
    """scl of the lift, |rot| / 2."""
    x = _check_elliptic(g)
    if x == 1:
        return DyadicInterval(0, 0, 0)
    if x == -1:
        return DyadicInterval(1, 1, 1)
    return _adaptive(lambda w: _half(_rot_w(x, w)), bits)


def _half(iv: DyadicInterval) -> DyadicInterval:
    return DyadicInterval(iv.lo_m, iv.hi_m, iv.scale + 1)


@dataclass(frozen=True)
class AlphaValue:
    n: int
    enclosure: DyadicInterval
    exact: Fraction | None = None

    def to_json(self) -> dict:
        out = {"n": self.n, "lo": _q(self.enclosure.lo), "hi": _q(self.enclosure.hi)}
        if self.exact is not None:
            out["exact"] = _q(self.exact)
        out["approx_uncertified"] = self.enclosure.approx()
        return out


def _q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def alpha_argument(n: int) -> Fraction:
    """The cosine 1 - 2^-(n+1) = tr(g_n) / 2."""
    return 1 - Fraction(1, 1 << (n + 1))


def _alpha_w(n: int, w: int) -> DyadicInterval:
    return _arccos_w(alpha_argument(n), w).div(_pi_w(w), w) * 24


def alpha(n: int, bits: int) -> AlphaValue:
    """Enclosure of alpha_n; alpha_0 also carries its exact value 8."""
    if n < 0:
        raise ValueError("n must be a natural number")
    enc = _adaptive(lambda w: _alpha_w(n, w), bits)
    return AlphaValue(n, enc, Fraction(8) if n == 0 else None)


def _check_k(K: int):
    if K < 1:
        raise ValueError("K must be a positive integer")


def simvol_value(n: int, K: int, bits: int) -> DyadicInterval:
    """Enclosure of K * alpha_n (simplicial volume per the scl construction)."""
    _check_k(K)
    return _adaptive(lambda w: _alpha_w(n, w) * K, bits)


def scl_h(n: int, K: int, bits: int) -> DyadicInterval:
    """Enclosure of K * alpha_n / 48, the scl of the K-th power of the lift."""
    _check_k(K)
    return _adaptive(lambda w: (_alpha_w(n, w) * K).scale_by(Fraction(1, 48), w), bits)
