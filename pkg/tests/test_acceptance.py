"""One test per acceptance criterion; each records a PASS/FAIL line with its runtime."""
from __future__ import annotations

import itertools
import math
import time
from contextlib import contextmanager
from fractions import Fraction

import mpmath

from conftest import ACCEPTANCE, encloses
from simvol.computable import inf_ratio, specker, upward_closure
from simvol.fields import (
    binomial_power,
    gamma,
    mersenne_coprime,
    mersenne_gcd,
    niven_filter,
    power_expansion_check,
    relation_search_exact,
    relation_search_numeric,
)
from simvol.l1 import (
    Budget,
    Certified,
    Witness,
    homology,
    semi_decide,
    simvol_stream,
    tetrahedron_boundary,
    torus7,
    triangle,
    verify_witness,
)
from simvol.scl import alpha, alpha_argument, g_matrix, scl_lift
from simvol.urm import HaltingSet, Halted, decode, evens, run


@contextmanager
def criterion(number: int, title: str, limit: float):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        in_time = elapsed < limit
        status = "PASS" if ok and in_time else "FAIL"
        note = "" if in_time else f" (over the {limit:g} s limit)"
        ACCEPTANCE.append(f"criterion {number}: {status}  {title}  [{elapsed:.2f} s / {limit:g} s]{note}")
    assert in_time, f"criterion {number} took {elapsed:.2f} s, limit {limit} s"


def test_criterion_01_alpha_zero():
    with criterion(1, "alpha_0 = 8 exactly, 64-bit enclosure contains 8", 1):
        a = alpha(0, 64)
        assert a.exact == 8
        assert a.enclosure.contains(8) and a.enclosure.width_at_most(64)


def test_criterion_02_monotone_vanishing():
    with criterion(2, "alpha_n strictly decreasing, alpha_30 < 0.001", 5):
        vals = [alpha(n, 64).enclosure for n in range(31)]
        assert all(b.hi < a.lo for a, b in zip(vals, vals[1:]))
        assert vals[30].hi < Fraction(1, 1000)
        assert encloses(vals[30], 24 * mpmath.acos(1 - mpmath.mpf(2) ** -31) / mpmath.pi)


def test_criterion_03_niven_sweep():
    with criterion(3, "Niven filter silent for n = 1..30, fires at n = 0", 1):
        assert not any(niven_filter(alpha_argument(n)) for n in range(1, 31))
        assert alpha_argument(0) == Fraction(1, 2) and niven_filter(alpha_argument(0))


def test_criterion_04_matrix_identities():
    with criterion(4, "det g_n = 1 and tr g_n / 2 = 1 - 2^-(n+1) for n = 1..64", 1):
        for n in range(1, 65):
            g = g_matrix(n)
            assert g.det == 1 and g.trace / 2 == 1 - Fraction(1, 1 << (n + 1))


def test_criterion_05_scl_consistency():
    with criterion(5, "48 scl(g_n) meets alpha_n at 64 bits for n = 1..30", 5):
        for n in range(1, 31):
            assert (scl_lift(g_matrix(n), 64) * 48).intersects(alpha(n, 64).enclosure)


def test_criterion_06_mersenne():
    with criterion(6, "Mersenne numbers of distinct primes <= 31 coprime; gcd(15, 63) = 3", 1):
        primes = [p for p in range(2, 32) if all(p % q for q in range(2, p))]
        for p, q in itertools.combinations(primes, 2):
            assert mersenne_coprime(p, q) and math.gcd((1 << p) - 1, (1 << q) - 1) == 1
        assert mersenne_gcd(4, 6) == 3


def test_criterion_07_power_expansion():
    with criterion(7, "q2 != 0 for p in {3,5,7,11,13}, n = 1..20, binomial = iterated", 10):
        for p in (3, 5, 7, 11, 13):
            g = gamma(p)
            acc = g.one(g.basis)
            for n in range(1, 21):
                acc = acc * g
                assert binomial_power(p, n, g.basis) == acc
                assert power_expansion_check(p, n).q2_nonzero


def test_criterion_08_exact_relation_search():
    with criterion(8, "no relation among gamma_3, gamma_5, gamma_7 up to 3; gamma_2^6 = 1", 60):
        assert relation_search_exact([3, 5, 7], 3) == []
        assert (6,) in relation_search_exact([2], 6)


def test_criterion_09_numeric_relation_search():
    with criterion(9, "256-bit search, coefficients <= 10: no relation, positive margin", 60):
        v = relation_search_numeric([3, 5, 7], 10, bits=256)
        assert v.status == "NoRelationFound" and v.relations == []
        assert v.margin is not None and v.margin > 0


def test_criterion_10_specker():
    with criterion(10, "Specker evens within 2^-20; halting stream monotone and sound", 10):
        eps = Fraction(1, 1 << 20)
        lower, upper = specker(evens())
        lo, up = lower.take(25)[-1], upper.take(25)[-1]
        assert 0 <= Fraction(4, 3) - lo <= eps and 0 <= up - Fraction(2, 3) <= eps
        steps = 450
        events = list(itertools.islice(HaltingSet().events(), steps))
        lows = specker(HaltingSet())[0].take(steps)
        assert all(a <= b for a, b in zip(lows, lows[1:]))
        found = [n for n in events if n is not None]
        assert found
        for n in found:
            assert isinstance(run(decode(n), n, 1 << 32), Halted)


def test_criterion_11_inf_ratio():
    with criterion(11, "inf_ratio for f(m) = m + 1 reaches 1 + 2^-10 within 2^11 emissions", 1):
        best = min(inf_ratio(upward_closure(lambda m: m + 1)).take(1 << 11))
        assert 1 <= best <= 1 + Fraction(1, 1 << 10)


def test_criterion_12_semi_decide():
    with criterion(12, "semi_decide certifies triangle (1, 1) and S^2 (1, 4); flipped sign rejected", 120):
        T = triangle()
        out = semi_decide(T, 1, 1, Budget(2, 0))
        assert isinstance(out, Certified) and verify_witness(T, out.witness).ok
        S = tetrahedron_boundary()
        out2 = semi_decide(S, 1, 4, Budget(0, 0))
        assert isinstance(out2, Certified) and verify_witness(S, out2.witness).ok
        for space, w in ((T, out.witness), (S, out2.witness)):
            (c, sigma), rest = w.chain[0], w.chain[1:]
            v = verify_witness(space, Witness(space, w.m, w.n, [(-c, sigma)] + rest))
            assert not v.ok and not v.checks["class"]


def test_criterion_13_simvol_stream():
    with criterion(13, "triangle stream running minimum <= 1/2", 300):
        stream = simvol_stream(triangle(), cells=60)
        best = min(stream.take(20))
        assert best <= Fraction(1, 2)


def test_criterion_14_homology_goldens():
    with criterion(14, "H1(triangle) = Z, H2(S^2) = Z, H1(torus) = Z^2", 5):
        assert str(homology(triangle(), 1)) == "Z"
        assert str(homology(tetrahedron_boundary(), 2)) == "Z"
        h = homology(torus7(), 1)
        assert h.rank == 2 and h.torsion == []
