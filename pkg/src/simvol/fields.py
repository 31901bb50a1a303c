"""Exact arithmetic in multiquadratic fields Q(i, sqrt(m1), ..., sqrt(mk)).

Elements are rational coefficient vectors over the radical-product basis.
Basis vectors are indexed by bitmasks: bit 0 stands for ``i`` (when the basis
includes it) and bit j for ``sqrt(m_j)``. Linear independence of these
products for pairwise coprime squarefree radicands is taken as given; the
numerical embedding is used to cross-check it.

Also hosts the unimodular numbers

    gamma_p = (2^(p-1) - 1) / 2^(p-1) + i * sqrt(2^p - 1) / 2^(p-1)

and exact/numeric searches for multiplicative and additive relations among
them.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .exact import DomainError, DyadicInterval, arccos_enclosure, pi_enclosure, sqrt_enclosure

TRIAL_DIVISION_LIMIT = 10**6
SEARCH_GUARD = 10**7


class BasisMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer helpers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial division up to 10**6; rejects cofactors that may be composite."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    f = 2
    while f * f <= n and f <= TRIAL_DIVISION_LIMIT:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        if n > TRIAL_DIVISION_LIMIT**2:
            raise ValueError(f"cofactor {n} too large to certify by trial division")
        out[n] = out.get(n, 0) + 1
    return out


def squarefree_split(n: int) -> tuple[int, int]:
    """Return (f, s) with n = f**2 * s and s squarefree."""
    f, s = 1, 1
    for p, e in factorize(n).items():
        f *= p ** (e // 2)
        if e % 2:
            s *= p
    return f, s


def mersenne_gcd(p: int, q: int) -> int:
    return math.gcd((1 << p) - 1, (1 << q) - 1)


def mersenne_coprime(p: int, q: int) -> bool:
    """Whether 2^p - 1 and 2^q - 1 are coprime."""
    if p == q:
        raise ValueError("exponents must differ")
    return mersenne_gcd(p, q) == 1


def niven_filter(c) -> bool:
    """True iff the rational c is one of 0, +-1/2, +-1."""
    c = Fraction(c)
    if abs(c) > 1:
        raise DomainError(f"{c} is not a cosine value")
    return c in (0, Fraction(1, 2), Fraction(-1, 2), 1, -1)


# ---------------------------------------------------------------------------
# basis and elements


@dataclass(frozen=True)
class RadicalBasis:
    radicands: tuple[int, ...]
    include_i: bool = True

    def __post_init__(self):
        rs = tuple(self.radicands)
        object.__setattr__(self, "radicands", rs)
        if list(rs) != sorted(set(rs)):
            raise ValueError("radicands must be strictly increasing")
        for m in rs:
            if m < 2 or squarefree_split(m)[0] != 1:
                raise ValueError(f"radicand {m} is not a squarefree integer >= 2")
        for a, b in itertools.combinations(rs, 2):
            if math.gcd(a, b) != 1:
                raise ValueError(f"radicands {a} and {b} are not coprime")

    @property
    def offset(self) -> int:
        return 1 if self.include_i else 0

    @property
    def dim(self) -> int:
        return 1 << (len(self.radicands) + self.offset)

    def bit(self, radicand: int) -> int:
        try:
            return 1 << (self.radicands.index(radicand) + self.offset)
        except ValueError:
            raise ValueError(f"radicand {radicand} not in basis") from None

    def label(self, mask: int) -> str:
        parts = []
        if self.include_i and mask & 1:
            parts.append("i")
        for j, m in enumerate(self.radicands):
            if mask >> (j + self.offset) & 1:
                parts.append(f"sqrt{m}")
        return "*".join(parts) or "1"

    @lru_cache(maxsize=None)
    def product_table(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """table[a][b] = (mask, integer factor) with e_a * e_b = factor * e_mask."""
        off = self.offset
        rows = []
        for a in range(self.dim):
            row = []
            for b in range(self.dim):
                factor = 1
                both = a & b
                if self.include_i and both & 1:
                    factor = -1
                for j, m in enumerate(self.radicands):
                    if both >> (j + off) & 1:
                        factor *= m
                row.append((a ^ b, factor))
            rows.append(tuple(row))
        return tuple(rows)


class FieldElement:
    __slots__ = ("basis", "coeffs")

    def __init__(self, basis: RadicalBasis, coeffs: Sequence):
        if len(coeffs) != basis.dim:
            raise ValueError("coefficient vector has the wrong length")
        self.basis = basis
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    @classmethod
    def zero(cls, basis):
        return cls(basis, [0] * basis.dim)

    @classmethod
    def one(cls, basis):
        return cls.rational(basis, 1)

    @classmethod
    def rational(cls, basis, q):
        c = [0] * basis.dim
        c[0] = q
        return cls(basis, c)

    @classmethod
    def unit(cls, basis, mask, q=1):
        c = [0] * basis.dim
        c[mask] = q
        return cls(basis, c)

    @classmethod
    def i(cls, basis):
        if not basis.include_i:
            raise ValueError("basis does not contain i")
        return cls.unit(basis, 1)

    @classmethod
    def sqrt(cls, basis, m):
        return cls.unit(basis, basis.bit(m))

    def _check(self, other):
        if not isinstance(other, FieldElement):
            return FieldElement.rational(self.basis, other)
        if other.basis != self.basis:
            raise BasisMismatch("elements live in different bases")
        return other

    def __add__(self, other):
        o = self._check(other)
        return FieldElement(self.basis, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.basis, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        o = self._check(other)
        table = self.basis.product_table()
        out = [Fraction(0)] * self.basis.dim
        for a, ca in enumerate(self.coeffs):
            if not ca:
                continue
            row = table[a]
            for b, cb in enumerate(o.coeffs):
                if cb:
                    mask, f = row[b]
                    out[mask] += f * ca * cb
        return FieldElement(self.basis, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = FieldElement.one(self.basis)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = FieldElement.rational(self.basis, other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.basis == other.basis and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.basis, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def conjugate(self) -> FieldElement:
        """Complex conjugation: negate the coefficients on i-containing vectors."""
        if not self.basis.include_i:
            return self
        return FieldElement(self.basis, [-c if m & 1 else c for m, c in enumerate(self.coeffs)])

    def inverse(self) -> FieldElement:
        """Solve self * x = 1 as a dense linear system over Q."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a field")
        n = self.basis.dim
        table = self.basis.product_table()
        # column b of the multiplication-by-self matrix is self * e_b
        mat = [[Fraction(0)] * n for _ in range(n)]
        for a, ca in enumerate(self.coeffs):
            if ca:
                for b in range(n):
                    mask, f = table[a][b]
                    mat[mask][b] += f * ca
        rhs = [Fraction(0)] * n
        rhs[0] = Fraction(1)
        return FieldElement(self.basis, _solve(mat, rhs))

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def in_subfield_without(self, radicand: int) -> bool:
        """True iff no basis vector involving sqrt(radicand) has a nonzero coefficient."""
        bit = self.basis.bit(radicand)
        return all(c == 0 for m, c in enumerate(self.coeffs) if m & bit)

    def embed(self, bits: int) -> tuple[DyadicInterval, DyadicInterval]:
        """Enclosures of real and imaginary part under sqrt(m) > 0, i -> imaginary unit."""
        w = bits + 8
        roots = [sqrt_enclosure(m, w) for m in self.basis.radicands]
        re = DyadicInterval(0, 0, w)
        im = DyadicInterval(0, 0, w)
        off = self.basis.offset
        for mask, c in enumerate(self.coeffs):
            if not c:
                continue
            v = DyadicInterval(1 << w, 1 << w, w)
            for j, r in enumerate(roots):
                if mask >> (j + off) & 1:
                    v = (v * r).round_out(w)
            v = v.scale_by(c, w)
            if off and mask & 1:
                im = im + v
            else:
                re = re + v
        return re, im

    def __repr__(self):
        terms = [f"{c}*{self.basis.label(m)}" for m, c in enumerate(self.coeffs) if c]
        return "FieldElement(" + (" + ".join(terms) or "0") + ")"


def _solve(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(mat)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular multiplication matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def field_arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    if op == "inverse":
        return a.inverse()
    if b is None:
        raise ValueError(f"operator {op!r} needs two operands")
    if a.basis != b.basis:
        raise BasisMismatch("elements live in different bases")
    return {"+": a.__add__, "-": a.__sub__, "*": a.__mul__, "/": a.__truediv__}[op](b)


# ---------------------------------------------------------------------------
# gamma_p


def gamma_radicand(p: int) -> int:
    return squarefree_split((1 << p) - 1)[1]


def compositum(primes: Iterable[int]) -> RadicalBasis:
    """Basis Q(i, sqrt(s_p) ...) with s_p the squarefree part of 2^p - 1."""
    return RadicalBasis(tuple(sorted({gamma_radicand(p) for p in primes})), True)


def gamma(p: int, basis: RadicalBasis | None = None) -> FieldElement:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    f, s = squarefree_split((1 << p) - 1)
    basis = basis or RadicalBasis((s,), True)
    den = 1 << (p - 1)
    coeffs = [Fraction(0)] * basis.dim
    coeffs[0] = Fraction(den - 1, den)
    coeffs[1 | basis.bit(s)] = Fraction(f, den)
    return FieldElement(basis, coeffs)


@dataclass(frozen=True)
class PowerExpansion:
    p: int
    n: int
    q1: Fraction
    q2: Fraction
    q2_nonzero: bool
    power: FieldElement = field(repr=False)


class ConsistencyError(RuntimeError):
    pass


def binomial_power(p: int, n: int, basis: RadicalBasis | None = None) -> FieldElement:
    """gamma_p^n from the closed-form binomial sum."""
    f, s = squarefree_split((1 << p) - 1)
    basis = basis or RadicalBasis((s,), True)
    den = 1 << (p - 1)
    a = Fraction(den - 1, den)
    b = Fraction(f, den)
    rbit = basis.bit(s)
    coeffs = [Fraction(0)] * basis.dim
    for j in range(n + 1):
        # (i b sqrt s)^j = i^j b^j s^(j//2) sqrt(s)^(j%2)
        term = math.comb(n, j) * a ** (n - j) * b**j * s ** (j // 2)
        ipow = j % 4
        sign = -1 if ipow in (2, 3) else 1
        mask = (1 if ipow % 2 else 0) | (rbit if j % 2 else 0)
        coeffs[mask] += sign * term
    return FieldElement(basis, coeffs)


def power_expansion_check(p: int, n: int) -> PowerExpansion:
    """gamma_p^n two ways; returns its coefficients on 1 and on i*sqrt(s)."""
    if n < 1:
        raise ValueError("n must be positive")
    g = gamma(p)
    iterated = FieldElement.one(g.basis)
    for _ in range(n):
        iterated = iterated * g
    closed = binomial_power(p, n, g.basis)
    if iterated.coeffs != closed.coeffs:
        raise ConsistencyError(f"binomial expansion disagrees with field powers at p={p}, n={n}")
    rmask = 1 | g.basis.bit(g.basis.radicands[0])
    q1, q2 = iterated.coeffs[0], iterated.coeffs[rmask]
    return PowerExpansion(p, n, q1, q2, q2 != 0, iterated)


# ---------------------------------------------------------------------------
# relation searches


def _power_tables(primes: Sequence[int], bound: int, basis: RadicalBasis):
    tables = []
    for p in primes:
        g = gamma(p, basis)
        ginv = g.conjugate()
        pos = [FieldElement.one(basis)]
        neg = [FieldElement.one(basis)]
        for _ in range(bound):
            pos.append(pos[-1] * g)
            neg.append(neg[-1] * ginv)
        tables.append({e: (pos[e] if e >= 0 else neg[-e]) for e in range(-bound, bound + 1)})
    return tables


def relation_search_exact(primes: Sequence[int], bound: int, threads: int = 1) -> list[tuple[int, ...]]:
    """All exponent tuples |n_j| <= bound, not all zero, with prod gamma_pj^nj = 1.

    Tuples are returned in lexicographic order.
    """
    primes = list(primes)
    k = len(primes)
    if k == 0:
        return []
    if len(set(primes)) != k:
        raise ValueError("primes must be distinct")
    if k * (2 * bound + 1) ** k > SEARCH_GUARD:
        raise ValueError("search space exceeds the 10**7 product guard")
    basis = compositum(primes)
    tables = _power_tables(primes, bound, basis)
    one = FieldElement.one(basis)
    rng = range(-bound, bound + 1)

    def shard(first: int) -> list[tuple[int, ...]]:
        hits = []
        head = tables[0][first]
        for rest in itertools.product(rng, repeat=k - 1):
            if first == 0 and not any(rest):
                continue
            prod = head
            for t, e in zip(tables[1:], rest):
                prod = prod * t[e]
            if prod == one:
                hits.append((first, *rest))
        return hits

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            shards = list(pool.map(shard, rng))
    else:
        shards = [shard(e) for e in rng]
    return [t for s in shards for t in s]


@dataclass
class NumericVerdict:
    status: str
    relations: list[tuple[int, ...]]
    margin: Fraction | None
    bits: int
    unresolved: list[tuple[int, ...]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "relations": [list(r) for r in self.relations],
            "margin_lower_bound": None if self.margin is None else f"{self.margin.numerator}/{self.margin.denominator}",
            "margin_approx": None if self.margin is None else float(self.margin),
            "bits": self.bits,
        }


class PrecisionError(RuntimeError):
    """Enclosures too wide to separate a candidate relation from zero."""


def _confirm_exact(primes, coeffs, n0) -> bool:
    """sum n_j theta_j + n0 pi = 0 iff prod gamma_j^n_j = (-1)^n0 (angles mod 2 pi),
    and the real angle sum is then a multiple of pi fixed by the enclosure."""
    basis = compositum(primes)
    prod = FieldElement.one(basis)
    for p, e in zip(primes, coeffs):
        prod = prod * gamma(p, basis) ** e
    return prod == (1 if n0 % 2 == 0 else -1)


def relation_search_numeric(
    primes: Sequence[int], coeff_bound: int, bits: int = 256, max_bits: int = 4096
) -> NumericVerdict:
    """Search integer relations sum n_j * theta_pj + n0 * pi = 0, |n| <= coeff_bound.

    theta_p = arccos(1 - 2^(1-p)) is the argument of gamma_p, so ln gamma_p =
    i theta_p. Every combination is evaluated with certified enclosures; those
    whose enclosure contains zero are confirmed or refuted exactly in the
    field. Otherwise the minimum distance from zero is reported as margin.
    """
    if bits < 128:
        raise ValueError("bits must be >= 128")
    primes = list(primes)
    if not primes:
        return NumericVerdict("NoRelationFound", [], None, bits)
    while True:
        w = bits + 8
        thetas = [arccos_enclosure(1 - Fraction(1, 1 << (p - 1)), w).round_out(w) for p in primes]
        pi = pi_enclosure(w).round_out(w)
        # align everything to scale w
        ths = [(t.lo_m << (w - t.scale), t.hi_m << (w - t.scale)) for t in thetas]
        pil, pih = pi.lo_m << (w - pi.scale), pi.hi_m << (w - pi.scale)
        B = coeff_bound
        rng = range(-B, B + 1)
        margin = None
        found = []
        unresolved = []
        for ns in itertools.product(rng, repeat=len(primes)):
            lo = hi = 0
            for n, (tl, th) in zip(ns, ths):
                if n >= 0:
                    lo += n * tl
                    hi += n * th
                else:
                    lo += n * th
                    hi += n * tl
            # n0 nearest to -L/pi, plus its neighbours, within the bound
            centre = -(lo + hi) // (2 * pil) if pil else 0
            # distance is convex in n0, so the clamped neighbours of the
            # unconstrained minimiser include the closest admissible n0
            for n0 in sorted({max(-B, min(B, c)) for c in (centre - 1, centre, centre + 1)}):
                if n0 == 0 and not any(ns):
                    continue
                if n0 >= 0:
                    vlo, vhi = lo + n0 * pil, hi + n0 * pih
                else:
                    vlo, vhi = lo + n0 * pih, hi + n0 * pil
                if vlo <= 0 <= vhi:
                    cand = (*ns, n0)
                    if _confirm_exact(primes, ns, n0):
                        found.append(cand)
                    else:
                        unresolved.append(cand)
                else:
                    dist = Fraction(min(abs(vlo), abs(vhi)), 1 << w)
                    margin = dist if margin is None else min(margin, dist)
        if unresolved:
            if bits * 2 > max_bits:
                raise PrecisionError(f"{len(unresolved)} candidates unresolved at {bits} bits")
            bits *= 2
            continue
        status = "RelationFound" if found else "NoRelationFound"
        return NumericVerdict(status, found, margin, bits)
