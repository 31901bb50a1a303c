"""One-sided computable reals as streams of rational bounds.

An :class:`UpperBoundStream` emits rationals q0, q1, ... whose infimum is the
represented real; a :class:`LowerBoundStream` emits rationals whose supremum
is the represented real. Streams are single-consumer iterators, and
combinators take exclusive ownership of their operands.
"""
from __future__ import annotations

import enum
import itertools
import json
import warnings
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .urm import ExplicitRecursive, ReSetEnumerator


class ProducerContractError(ValueError):
    """A stream emitted a bound that violates its declared contract."""


class _BoundStream:
    kind = ""

    def __init__(self, source: Iterable, meta: Fraction | None = None, name: str = ""):
        self._it = iter(source)
        self.meta = None if meta is None else Fraction(meta)
        self.name = name
        self.emitted = 0

    def __iter__(self):
        return self

    def __next__(self) -> Fraction:
        q = Fraction(next(self._it))
        self.emitted += 1
        return q

    def take(self, k: int) -> list[Fraction]:
        return list(itertools.islice(self, k))

    def dump(self, k: int) -> Iterator[str]:
        """JSON lines ``{"k": i, "bound": "p/q", "kind": ...}`` for k emissions."""
        for i, q in enumerate(itertools.islice(self, k)):
            yield json.dumps({"k": i, "bound": _fmt(q), "kind": self.kind})


class UpperBoundStream(_BoundStream):
    kind = "upper"

    def envelope(self) -> Iterator[Fraction]:
        """Running minimum of the emissions."""
        return itertools.accumulate(self, min)

    def cut(self) -> Iterator[Fraction]:
        """Enumerate the upper cut {x in Q | alpha < x}.

        Interleaves, for every emitted bound q, the rationals q + a/b above it
        along a diagonal schedule, so every element of the cut eventually
        appears (possibly repeatedly).
        """
        bounds: list[Fraction] = []
        for step in itertools.count():
            bounds.append(next(self))
            for i, q in enumerate(bounds):
                j = step - i
                # j-th positive rational via the Calkin-Wilf sequence
                yield q + _calkin_wilf(j)


class LowerBoundStream(_BoundStream):
    kind = "lower"

    def envelope(self) -> Iterator[Fraction]:
        """Running maximum of the emissions."""
        return itertools.accumulate(self, max)


class ComputableReal:
    """A real with both an upper and a lower bound stream."""

    def __init__(self, upper: UpperBoundStream, lower: LowerBoundStream, meta: Fraction | None = None):
        self.upper = upper
        self.lower = lower
        self.meta = meta

    @classmethod
    def exact(cls, q) -> ComputableReal:
        q = Fraction(q)
        return cls(constant_upper(q), constant_lower(q), q)


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _calkin_wilf(j: int) -> Fraction:
    q = Fraction(1)
    for _ in range(j):
        q = 1 / (2 * (q.numerator // q.denominator) + 1 - q)
    return q


def constant_upper(q) -> UpperBoundStream:
    q = Fraction(q)
    return UpperBoundStream(itertools.repeat(q), meta=q, name=f"const {q}")


def constant_lower(q) -> LowerBoundStream:
    q = Fraction(q)
    return LowerBoundStream(itertools.repeat(q), meta=q, name=f"const {q}")


def upper_from(fn: Callable[[int], Fraction], meta=None) -> UpperBoundStream:
    """Upper stream whose k-th emission is fn(k)."""
    return UpperBoundStream(map(fn, itertools.count()), meta=meta)


def lower_from(fn: Callable[[int], Fraction], meta=None) -> LowerBoundStream:
    return LowerBoundStream(map(fn, itertools.count()), meta=meta)


# ---------------------------------------------------------------------------
# closure operations


def mul_nonneg(a: UpperBoundStream, b: UpperBoundStream) -> UpperBoundStream:
    """Upper bounds for the product of two non-negative right-computable reals.

    Operands are advanced round-robin; each emission is the product of the
    two running minima.
    """

    def gen():
        best_a = best_b = None
        for qa, qb in zip(a, b):
            if qa < 0 or qb < 0:
                raise ProducerContractError(f"negative upper bound {min(qa, qb)} in mul_nonneg operand")
            best_a = qa if best_a is None else min(best_a, qa)
            best_b = qb if best_b is None else min(best_b, qb)
            yield best_a * best_b

    meta = a.meta * b.meta if a.meta is not None and b.meta is not None else None
    return UpperBoundStream(gen(), meta=meta)


def unscale(ca: UpperBoundStream, c: ComputableReal, stall_limit: int = 10_000) -> UpperBoundStream:
    """Upper bounds for alpha given upper bounds for c*alpha and a computable c > 0.

    An upper bound of c*alpha divided by a positive lower bound of c bounds
    alpha from above. Until c's lower stream turns positive nothing is emitted;
    after ``stall_limit`` consecutive silent steps the stream ends.
    """

    def gen():
        best_ca = None
        best_c = None
        silent = 0
        for qca, qc in zip(ca, c.lower):
            if qca < 0:
                raise ProducerContractError("negative upper bound for c*alpha")
            best_ca = qca if best_ca is None else min(best_ca, qca)
            best_c = qc if best_c is None else max(best_c, qc)
            if best_c > 0:
                silent = 0
                yield best_ca / best_c
            else:
                silent += 1
                if silent >= stall_limit:
                    return

    meta = ca.meta / c.meta if ca.meta is not None and c.meta not in (None, 0) else None
    return UpperBoundStream(gen(), meta=meta)


# ---------------------------------------------------------------------------
# Specker numbers  x_A = sum_{n in A} 2^-n


def _specker_partial_sums(A: ReSetEnumerator) -> Iterator[Fraction]:
    s = Fraction(0)
    for item in A.events():
        if item is not None:
            s += Fraction(1, 1 << item)
        yield s


def specker(A: ReSetEnumerator) -> tuple[LowerBoundStream, UpperBoundStream]:
    """Lower stream for x_A and upper stream for 2 - x_A.

    One emission per schedule step of the enumerator. Each stream drives its
    own copy of the enumeration.
    """
    lower = LowerBoundStream(_specker_partial_sums(A), name=f"x_{A.name}")
    upper = UpperBoundStream((2 - s for s in _specker_partial_sums(A)), name=f"2 - x_{A.name}")
    return lower, upper


def specker_computable(A: ExplicitRecursive) -> ComputableReal:
    """x_A as a two-sided computable real for a decidable set A.

    After deciding 0..N the undecided tail contributes at most 2^-N.
    """

    def bounds():
        s = Fraction(0)
        for n in itertools.count():
            if A.decides(n):
                s += Fraction(1, 1 << n)
            yield s, s + Fraction(1, 1 << n)

    lower = LowerBoundStream((lo for lo, _ in bounds()), name=f"x_{A.name}")
    upper = UpperBoundStream((hi for _, hi in bounds()), name=f"x_{A.name}")
    return ComputableReal(upper, lower)


# ---------------------------------------------------------------------------
# inf f(m)/m from an enumeration of {(m, n) | f(m) <= n}


def inf_ratio(pairs: Iterable[tuple[int, int]]) -> UpperBoundStream:
    """Emit n/m for each enumerated pair with m > 0."""

    def gen():
        for m, n in pairs:
            if m <= 0:
                warnings.warn(f"skipping pair with m = {m}", RuntimeWarning, stacklevel=2)
                continue
            yield Fraction(n, m)

    return UpperBoundStream(gen())


def upward_closure(f: Callable[[int], int]) -> Iterator[tuple[int, int]]:
    """Enumerate {(m, n) | m >= 1, n >= f(m)} without repetition.

    Step t writes t + 1 = 2**j * (2*i + 1) and emits (i + 1, f(i + 1) + j),
    so small j (the tightest pairs) come first and m grows linearly.
    """
    for t in itertools.count():
        x = t + 1
        j = (x & -x).bit_length() - 1
        i = (x >> (j + 1))
        m = i + 1
        yield m, f(m) + j


class SemiResult(enum.Enum):
    CONFIRMED_BELOW = "ConfirmedBelow"
    UNKNOWN = "Unknown"


def semi_lt(a: UpperBoundStream, x, budget: int) -> SemiResult:
    """Semi-decide alpha < x by reading at most ``budget`` emissions."""
    x = Fraction(x)
    for q in itertools.islice(a, budget):
        if q < x:
            return SemiResult.CONFIRMED_BELOW
    return SemiResult.UNKNOWN
