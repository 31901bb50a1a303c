from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simvol.computable import (
    ComputableReal,
    ProducerContractError,
    SemiResult,
    UpperBoundStream,
    constant_lower,
    constant_upper,
    inf_ratio,
    lower_from,
    mul_nonneg,
    semi_lt,
    specker,
    specker_computable,
    unscale,
    upper_from,
    upward_closure,
)
from simvol.urm import HaltingSet, Halted, all_naturals, decode, empty_set, evens, run

EPS = Fraction(1, 1 << 20)


def inf_of(stream, k):
    return min(stream.take(k))


def eight_sevenths():
    # upper bounds 8/7 + 2^-k
    return upper_from(lambda k: Fraction(8, 7) + Fraction(1, 1 << k), meta=Fraction(8, 7))


def test_mul_examples():
    assert inf_of(mul_nonneg(constant_upper(2), constant_upper(3)), 5) == 6
    prod = mul_nonneg(eight_sevenths(), constant_upper(Fraction(7, 8)))
    assert inf_of(prod, 60) - 1 < EPS and prod.meta == 1
    zero = mul_nonneg(upper_from(lambda k: Fraction(1, k + 1)), constant_upper(5))
    assert inf_of(zero, 2000) < Fraction(1, 300)


def test_mul_rejects_negative_bounds():
    s = mul_nonneg(UpperBoundStream([1, -1]), constant_upper(1))
    with pytest.raises(ProducerContractError):
        s.take(2)


@settings(max_examples=20, deadline=None)
@given(st.fractions(0, 50, max_denominator=97), st.fractions(0, 50, max_denominator=97))
def test_mul_inf_is_product_of_infs(a, b):
    sa = upper_from(lambda k: a + Fraction(1, 1 << k))
    sb = upper_from(lambda k: b + Fraction(3, 1 << k))
    out = min(mul_nonneg(sa, sb).take(80))
    assert a * b <= out <= a * b + Fraction(1, 1 << 70)


def test_unscale_examples():
    assert inf_of(unscale(constant_upper(6), ComputableReal.exact(2)), 3) == 3
    src = [Fraction(5), Fraction(4), Fraction(7, 2)]
    assert unscale(UpperBoundStream(src), ComputableReal.exact(1)).take(3) == src


def test_unscale_scaling_by_48k():
    K = 3
    c = ComputableReal.exact(48 * K)
    a = eight_sevenths()
    ca = UpperBoundStream((48 * K * q for q in a))
    assert inf_of(unscale(ca, c), 60) - Fraction(8, 7) < EPS


def test_unscale_defers_until_c_positive():
    c = ComputableReal(constant_upper(1), lower_from(lambda k: Fraction(0) if k < 5 else Fraction(1, 2)))
    out = unscale(constant_upper(1), c).take(3)
    assert out == [2, 2, 2]


def test_unscale_stall_limit_ends_stream():
    c = ComputableReal(constant_upper(1), constant_lower(0))
    assert unscale(constant_upper(1), c, stall_limit=50).take(10) == []


def test_unscale_contract_error():
    with pytest.raises(ProducerContractError):
        unscale(UpperBoundStream([-1]), ComputableReal.exact(1)).take(1)


def test_specker_evens():
    lower, upper = specker(evens())
    lo = lower.take(25)
    up = upper.take(25)
    assert Fraction(4, 3) - lo[-1] <= EPS and lo[-1] <= Fraction(4, 3)
    assert up[-1] - Fraction(2, 3) <= EPS and up[-1] >= Fraction(2, 3)


def test_specker_empty_and_all():
    lower, upper = specker(empty_set())
    assert set(lower.take(30)) == {0} and set(upper.take(30)) == {2}
    lower, _ = specker(all_naturals())
    assert 2 - lower.take(40)[-1] == Fraction(1, 1 << 39)


def test_specker_computable_sandwich():
    x = specker_computable(evens())
    lows, ups = x.lower.take(40), x.upper.take(40)
    v = Fraction(4, 3)
    assert all(q <= v for q in lows) and all(q >= v for q in ups)
    assert ups[-1] - lows[-1] <= EPS


def test_specker_halting_sound_and_monotone():
    events = list(itertools.islice(HaltingSet().events(), 450))
    lower, _ = specker(HaltingSet())
    lows = lower.take(450)
    assert all(a <= b for a, b in zip(lows, lows[1:]))
    found = [e for e in events if e is not None]
    assert len(found) > 20
    for n in found:
        assert isinstance(run(decode(n), n, 1 << 32), Halted)


@pytest.mark.parametrize(
    "f, target, tol",
    [(lambda m: m + 1, Fraction(1), Fraction(1, 1024)), (lambda m: 1, Fraction(0), Fraction(1, 1000)),
     (lambda m: 3 * m, Fraction(3), Fraction(0))],
)
def test_inf_ratio_profiles(f, target, tol):
    out = inf_of(inf_ratio(upward_closure(f)), 1 << 11)
    assert target <= out <= target + tol


def test_upward_closure_is_upward_closed_and_repetition_free():
    pairs = list(itertools.islice(upward_closure(lambda m: m + 1), 5000))
    assert len(set(pairs)) == len(pairs)
    assert all(n >= m + 1 for m, n in pairs)
    assert (3, 4) in pairs and (3, 9) in pairs


def test_inf_ratio_warns_on_nonpositive_m():
    with pytest.warns(RuntimeWarning):
        out = inf_ratio([(0, 1), (2, 3)]).take(1)
    assert out == [Fraction(3, 2)]


def test_semi_lt_examples():
    assert semi_lt(eight_sevenths(), 2, 5) is SemiResult.CONFIRMED_BELOW
    assert semi_lt(eight_sevenths(), 1, 200) is SemiResult.UNKNOWN


def test_semi_lt_on_specker_value():
    x = specker_computable(evens())
    assert semi_lt(x.upper, Fraction(27, 20), 100) is SemiResult.CONFIRMED_BELOW


def test_envelopes_monotone():
    up = UpperBoundStream([5, 3, 4, 1, 2])
    env = list(up.envelope())
    assert env == [5, 3, 3, 1, 1]
    lows = list(itertools.islice(lower_from(lambda k: Fraction((-1) ** k, k + 1)).envelope(), 6))
    assert all(a <= b for a, b in zip(lows, lows[1:]))


def test_cut_contains_only_rationals_above_inf():
    cut = list(itertools.islice(eight_sevenths().cut(), 300))
    assert all(q > Fraction(8, 7) for q in cut)
    # Calkin-Wilf reaches 1/k only near index 2**k, so offsets shrink slowly
    assert any(q < Fraction(8, 7) + Fraction(1, 4) for q in cut)


def test_dump_format():
    lines = list(constant_upper(Fraction(2, 3)).dump(2))
    assert lines[0] == '{"k": 0, "bound": "2/3", "kind": "upper"}'
