from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import encloses
from simvol.exact import DomainError
from simvol.fields import (
    BasisMismatch,
    FieldElement,
    RadicalBasis,
    binomial_power,
    compositum,
    field_arith,
    gamma,
    gamma_radicand,
    mersenne_coprime,
    mersenne_gcd,
    niven_filter,
    power_expansion_check,
    relation_search_exact,
    relation_search_numeric,
    squarefree_split,
)

PRIMES_31 = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
BASES = [RadicalBasis((3,)), RadicalBasis((3, 7)), RadicalBasis((7, 31, 127))]


def random_element(basis, rng):
    return FieldElement(basis, [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(basis.dim)])


def test_examples():
    b = RadicalBasis((3, 7))
    s3 = FieldElement.sqrt(b, 3)
    assert s3 * s3 == FieldElement.rational(b, 3)
    i = FieldElement.i(b)
    assert (i * s3) * (i * FieldElement.sqrt(b, 7)) == FieldElement.unit(b, b.bit(3) | b.bit(7), -1)
    x = FieldElement.one(b) + i + s3
    assert x * x.inverse() == FieldElement.one(b)
    assert field_arith(x, x, "/") == FieldElement.one(b)
    with pytest.raises(ZeroDivisionError):
        FieldElement.zero(b).inverse()


def test_basis_validation():
    with pytest.raises(ValueError):
        RadicalBasis((4,))
    with pytest.raises(ValueError):
        RadicalBasis((3, 15))
    with pytest.raises(BasisMismatch):
        FieldElement.one(BASES[0]) + FieldElement.one(BASES[1])


@pytest.mark.parametrize("basis", BASES)
def test_ring_axioms(basis):
    rng = random.Random(basis.dim)
    for _ in range(200):
        a, b, c = (random_element(basis, rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a and a + b == b + a
        assert a * (b + c) == a * b + a * c
        if not a.is_zero():
            assert a * a.inverse() == FieldElement.one(basis)


@pytest.mark.parametrize("basis", BASES)
def test_embedding_consistency(basis):
    rng = random.Random(100 + basis.dim)
    roots = {m: mpmath.sqrt(m) for m in basis.radicands}

    def value(x):
        out = mpmath.mpc(0)
        for mask, c in enumerate(x.coeffs):
            v = mpmath.mpf(c.numerator) / c.denominator
            if mask & 1:
                v = v * 1j
            for m in basis.radicands:
                if mask & basis.bit(m):
                    v = v * roots[m]
            out += v
        return out

    for _ in range(100):
        a, b = random_element(basis, rng), random_element(basis, rng)
        for x in (a + b, a * b):
            re, im = x.embed(200)
            ref = value(x)
            assert encloses(re, ref.real) and encloses(im, ref.imag)
            assert re.width_at_most(150) and im.width_at_most(150)


def test_gamma_examples():
    g2 = gamma(2)
    assert g2.coeffs[0] == Fraction(1, 2) and g2.coeffs[1 | g2.basis.bit(3)] == Fraction(1, 2)
    g3 = gamma(3)
    assert g3.coeffs[0] == Fraction(3, 4) and g3.coeffs[1 | g3.basis.bit(7)] == Fraction(1, 4)
    g5 = gamma(5)
    assert g5.coeffs[0] == Fraction(15, 16) and g5.coeffs[1 | g5.basis.bit(31)] == Fraction(1, 16)
    re, im = g2.embed(100)
    assert encloses(re, mpmath.cos(mpmath.pi / 3)) and encloses(im, mpmath.sin(mpmath.pi / 3))
    with pytest.raises(ValueError):
        gamma(9)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_gamma_unimodular(p):
    g = gamma(p)
    assert g * g.conjugate() == FieldElement.one(g.basis)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_radicands_squarefree(p):
    assert squarefree_split((1 << p) - 1) == (1, (1 << p) - 1) == (1, gamma_radicand(p))


def test_mersenne():
    assert mersenne_coprime(3, 5) and mersenne_gcd(3, 5) == 1
    assert mersenne_coprime(2, 3)
    assert mersenne_gcd(4, 6) == 3
    for p, q in itertools.combinations(PRIMES_31, 2):
        assert mersenne_coprime(p, q)
        assert math.gcd((1 << p) - 1, (1 << q) - 1) == 1
    for p, q in itertools.product(range(1, 20), repeat=2):
        assert mersenne_gcd(p, q) == math.gcd((1 << p) - 1, (1 << q) - 1) == (1 << math.gcd(p, q)) - 1


def test_power_expansion_examples():
    g = gamma(2)
    assert g**3 == FieldElement.rational(g.basis, -1)
    assert binomial_power(2, 3) == g**3
    out = power_expansion_check(3, 1)
    assert out.q2 == Fraction(1, 4) and out.q2_nonzero


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_binomial_matches_iterated(p):
    g = gamma(p)
    acc = FieldElement.one(g.basis)
    for n in range(1, 21):
        acc = acc * g
        assert binomial_power(p, n, g.basis) == acc


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_q2_nonzero(p):
    assert all(power_expansion_check(p, n).q2_nonzero for n in range(1, 21))


def test_subfield_membership():
    b = RadicalBasis((7, 31))
    assert not FieldElement.sqrt(b, 31).in_subfield_without(31)
    assert (FieldElement.one(b) + FieldElement.i(b)).in_subfield_without(31)
    g3 = gamma(3, b)
    assert (g3**-2).in_subfield_without(31)


def test_exact_search_examples():
    assert relation_search_exact([3, 5], 4) == []
    assert relation_search_exact([3, 5, 7], 3) == []
    assert relation_search_exact([2], 6) == [(-6,), (6,)]
    assert relation_search_exact([], 3) == []
    assert relation_search_exact([3, 5, 7], 2, threads=4) == []


def test_top_radical_never_cancels():
    primes = [3, 5, 7]
    basis = compositum(primes)
    powers = {p: {e: gamma(p, basis) ** e for e in range(-3, 4)} for p in primes}
    for ns in itertools.product(range(-3, 4), repeat=3):
        if ns[-1] > 0:
            x = powers[7][ns[-1]]
            assert not x.in_subfield_without(gamma_radicand(7))
            rest = powers[3][-ns[0]] * powers[5][-ns[1]]
            assert rest.in_subfield_without(gamma_radicand(7))


def test_numeric_search():
    v = relation_search_numeric([3, 5, 7], 10, bits=256)
    assert v.status == "NoRelationFound" and v.margin > 0
    v2 = relation_search_numeric([2], 6, bits=256)
    assert v2.status == "RelationFound" and (6, -2) in v2.relations
    assert relation_search_numeric([], 10).status == "NoRelationFound"


def test_niven():
    assert niven_filter(Fraction(1, 2)) and niven_filter(-1) and niven_filter(0)
    assert not niven_filter(Fraction(3, 4))
    assert not any(niven_filter(1 - Fraction(1, 1 << (n + 1))) for n in range(1, 31))
    with pytest.raises(DomainError):
        niven_filter(2)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 10**6))
def test_squarefree_split(n):
    f, s = squarefree_split(n)
    assert f * f * s == n
    assert all(s % (p * p) for p in range(2, math.isqrt(s) + 1))
