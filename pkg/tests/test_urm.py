from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simvol.urm import (
    ExplicitRecursive,
    Halted,
    HaltingSet,
    Jump,
    OutOfFuel,
    ProgramDomain,
    Succ,
    Transfer,
    UrmProgram,
    Zero,
    decode,
    diagonal_cell,
    evens,
    godel_index,
    pair,
    run,
    unpair,
)

reg = st.integers(1, 6)
instruction = st.one_of(
    st.builds(Zero, reg),
    st.builds(Succ, reg),
    st.builds(Transfer, reg, reg),
    st.builds(Jump, reg, reg, st.integers(1, 8)),
)
programs = st.lists(instruction, min_size=1, max_size=6).map(lambda xs: UrmProgram(tuple(xs)))


def test_run_examples():
    assert run(UrmProgram((Succ(1),)), 0, 10) == Halted(1, 1)
    assert isinstance(run(UrmProgram((Jump(1, 1, 1),)), 5, 1000), OutOfFuel)
    assert run(UrmProgram((Zero(1),)), 7, 10).output == 0


def test_addition_program():
    # r1 := r1 + r2 with r2 preset by the program to 3
    prog = UrmProgram.parse("S 2\nS 2\nS 2\nJ 2 3 8\nS 1\nS 3\nJ 1 1 4\n")
    assert run(prog, 4, 1000) == Halted(7, 3 + 4 * 3 + 1)


def test_invalid_programs():
    with pytest.raises(ValueError):
        UrmProgram(())
    with pytest.raises(ValueError):
        UrmProgram((Zero(0),))
    with pytest.raises(ValueError):
        UrmProgram.parse("X 1")
    with pytest.raises(ValueError):
        UrmProgram.parse("J 1 2")


def test_godel_examples():
    p = UrmProgram((Zero(1),))
    assert decode(godel_index(p)) == p
    q = UrmProgram((Zero(2), Succ(1), Transfer(1, 3), Jump(3, 2, 1)))
    assert decode(godel_index(q)) == q
    assert decode(0) == UrmProgram((Zero(1),))
    with pytest.raises(ValueError):
        decode(-1)


@settings(max_examples=300, deadline=None)
@given(programs)
def test_godel_round_trip(p):
    assert decode(godel_index(p)) == p
    assert UrmProgram.parse(p.format()) == p


@settings(max_examples=300, deadline=None)
@given(st.one_of(st.integers(0, 10**6), st.builds(pair, st.integers(0, 12), st.integers(0, 10**40))))
def test_decode_is_total_and_bijective(n):
    assert godel_index(decode(n)) == n
    assert pair(*unpair(n)) == n


def test_diagonal_schedule_covers_cells():
    cells = [diagonal_cell(t) for t in range(55)]
    assert len(set(cells)) == 55
    assert {(n, k) for n in range(10) for k in range(10 - n)} == set(cells)


def test_evens_enumeration():
    assert evens().enumerate(11) == [0, 2, 4, 6, 8, 10]


def test_halting_set_finds_successor_index():
    n = godel_index(UrmProgram((Succ(1),)))
    assert isinstance(run(decode(n), n, 1), Halted)
    # the cell (n, 0) sits at index T(n) + n of the diagonal schedule
    budget = n * (n + 1) // 2 + n + 1
    assert n in HaltingSet().enumerate(budget)
    assert n not in HaltingSet().enumerate(budget - 1)


def test_halting_enumeration_monotone():
    rng = random.Random(7)
    for _ in range(20):
        b = rng.randrange(1, 250)
        small, big = HaltingSet().enumerate(b), HaltingSet().enumerate(2 * b)
        assert set(small) <= set(big)


def test_halting_enumeration_sound():
    # fuel doubles along the diagonal, so cost grows like 2**sqrt(2 * budget)
    budget = 500
    found = HaltingSet().enumerate(budget)
    assert len(found) > 20
    for n in found:
        assert isinstance(run(decode(n), n, 1 << 32), Halted)


def test_halting_excludes_self_loop():
    loop = godel_index(UrmProgram((Jump(1, 1, 1),)))
    assert loop not in HaltingSet().enumerate(loop * (loop + 1) // 2 + 200)


@pytest.mark.parametrize("threads", [1, 2, 4])
def test_enumeration_thread_independent(threads):
    assert HaltingSet().enumerate(450, threads=threads) == HaltingSet().enumerate(450)


def test_program_domain():
    # halts iff the input is even: count r2 up in steps of two until it equals r1
    prog = UrmProgram.parse("J 1 2 5\nS 2\nS 2\nJ 1 1 1\n")
    dom = ProgramDomain(prog).enumerate(200)
    assert dom and all(n % 2 == 0 for n in dom)
    assert {0, 2, 4} <= set(dom)


def test_explicit_recursive_matches_rule():
    rule = lambda n: n % 3 == 1 or n == 0  # noqa: E731
    A = ExplicitRecursive(rule)
    assert A.enumerate(1000) == [n for n in range(1000) if rule(n)]
    assert all(A.decides(n) == rule(n) for n in range(1000))
