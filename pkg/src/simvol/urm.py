"""Unlimited register machines, a total Goedel numbering, and dovetailed
enumeration of recursively enumerable subsets of the naturals.

Programs use the four URM instructions ``Z r``, ``S r``, ``T a b`` and
``J a b q``. Registers and jump targets are 1-based; jumping past the last
instruction halts. The input goes into register 1 and the output is read from
register 1.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple, Union


@dataclass(frozen=True)
class Zero:
    r: int


@dataclass(frozen=True)
class Succ:
    r: int


@dataclass(frozen=True)
class Transfer:
    src: int
    dst: int


@dataclass(frozen=True)
class Jump:
    a: int
    b: int
    target: int


Instruction = Union[Zero, Succ, Transfer, Jump]


@dataclass(frozen=True)
class UrmProgram:
    instructions: tuple[Instruction, ...]

    def __post_init__(self):
        if not self.instructions:
            raise ValueError("a URM program needs at least one instruction")
        for ins in self.instructions:
            regs = {
                Zero: lambda i: (i.r,),
                Succ: lambda i: (i.r,),
                Transfer: lambda i: (i.src, i.dst),
                Jump: lambda i: (i.a, i.b, i.target),
            }[type(ins)](ins)
            if any(x < 1 for x in regs):
                raise ValueError(f"register indices and jump targets must be >= 1: {ins}")

    def __len__(self):
        return len(self.instructions)

    @classmethod
    def parse(cls, text: str) -> UrmProgram:
        """Parse the line format ``Z 1`` / ``S 2`` / ``T 1 2`` / ``J 1 2 7``."""
        out = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            op, *args = line.split()
            try:
                nums = [int(a) for a in args]
            except ValueError:
                raise ValueError(f"line {lineno}: non-integer operand in {raw!r}") from None
            arity = {"Z": 1, "S": 1, "T": 2, "J": 3}.get(op.upper())
            if arity is None or len(nums) != arity:
                raise ValueError(f"line {lineno}: cannot parse {raw!r}")
            out.append({"Z": Zero, "S": Succ, "T": Transfer, "J": Jump}[op.upper()](*nums))
        return cls(tuple(out))

    def format(self) -> str:
        lines = []
        for ins in self.instructions:
            if isinstance(ins, Zero):
                lines.append(f"Z {ins.r}")
            elif isinstance(ins, Succ):
                lines.append(f"S {ins.r}")
            elif isinstance(ins, Transfer):
                lines.append(f"T {ins.src} {ins.dst}")
            else:
                lines.append(f"J {ins.a} {ins.b} {ins.target}")
        return "\n".join(lines) + "\n"


class Halted(NamedTuple):
    output: int
    steps: int


class OutOfFuel(NamedTuple):
    steps: int


RunResult = Union[Halted, OutOfFuel]


class Machine:
    """Resumable execution state of one program on one input."""

    __slots__ = ("program", "regs", "pc", "steps", "halted")

    def __init__(self, program: UrmProgram, x: int):
        self.program = program
        self.regs = {1: x}
        self.pc = 0
        self.steps = 0
        self.halted = False

    def advance(self, fuel: int) -> bool:
        """Execute at most ``fuel`` more steps; True once halted."""
        ins_list = self.program.instructions
        n = len(ins_list)
        regs = self.regs
        pc = self.pc
        steps = self.steps
        limit = steps + fuel
        while pc < n and steps < limit:
            ins = ins_list[pc]
            t = type(ins)
            if t is Succ:
                regs[ins.r] = regs.get(ins.r, 0) + 1
                pc += 1
            elif t is Zero:
                regs[ins.r] = 0
                pc += 1
            elif t is Transfer:
                regs[ins.dst] = regs.get(ins.src, 0)
                pc += 1
            else:
                pc = ins.target - 1 if regs.get(ins.a, 0) == regs.get(ins.b, 0) else pc + 1
            steps += 1
        self.pc = pc
        self.steps = steps
        self.halted = pc >= n
        return self.halted


def run(program: UrmProgram, x: int, fuel: int) -> RunResult:
    """Run for at most ``fuel`` steps. Halting costs no extra step."""
    m = Machine(program, x)
    if m.advance(fuel):
        return Halted(m.regs.get(1, 0), m.steps)
    return OutOfFuel(m.steps)


# ---------------------------------------------------------------------------
# Goedel numbering: Cantor pairing over instruction codes.
# Instruction code (registers shifted to 0-based):
#   Z r      -> 4*(r-1)
#   S r      -> 4*(r-1) + 1
#   T a b    -> 4*<a-1, b-1> + 2
#   J a b q  -> 4*<<a-1, b-1>, q-1> + 3
# Program [c1, ..., ck] -> <k-1, c1 | c2 | ...> with right-nested pairing.
# Both maps are bijections, so decode is total and decode(0) = [Z 1].


def pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def unpair(z: int) -> tuple[int, int]:
    w = (math.isqrt(8 * z + 1) - 1) // 2
    b = z - w * (w + 1) // 2
    return w - b, b


def encode_instruction(ins: Instruction) -> int:
    if isinstance(ins, Zero):
        return 4 * (ins.r - 1)
    if isinstance(ins, Succ):
        return 4 * (ins.r - 1) + 1
    if isinstance(ins, Transfer):
        return 4 * pair(ins.src - 1, ins.dst - 1) + 2
    return 4 * pair(pair(ins.a - 1, ins.b - 1), ins.target - 1) + 3


def decode_instruction(c: int) -> Instruction:
    q, tag = divmod(c, 4)
    if tag == 0:
        return Zero(q + 1)
    if tag == 1:
        return Succ(q + 1)
    if tag == 2:
        a, b = unpair(q)
        return Transfer(a + 1, b + 1)
    ab, t = unpair(q)
    a, b = unpair(ab)
    return Jump(a + 1, b + 1, t + 1)


def godel_index(program: UrmProgram) -> int:
    codes = [encode_instruction(i) for i in program.instructions]
    acc = codes[-1]
    for c in reversed(codes[:-1]):
        acc = pair(c, acc)
    return pair(len(codes) - 1, acc)


def decode(index: int) -> UrmProgram:
    if index < 0:
        raise ValueError("Goedel indices are natural numbers")
    k1, rest = unpair(index)
    codes = []
    for _ in range(k1):
        c, rest = unpair(rest)
        codes.append(c)
    codes.append(rest)
    return UrmProgram(tuple(decode_instruction(c) for c in codes))


# ---------------------------------------------------------------------------
# dovetailing


def diagonal_cell(t: int) -> tuple[int, int]:
    """The t-th cell (n, k) of the Cantor diagonal schedule; fuel is 2**k."""
    d = (math.isqrt(8 * t + 1) - 1) // 2
    n = t - d * (d + 1) // 2
    return n, d - n


def _max_exponent(n: int, budget: int) -> int:
    """Largest k with cell (n, k) among the first ``budget`` cells, or -1."""
    # cell (n, k) sits at index T(n + k) + n with T the triangular numbers
    room = budget - 1 - n
    if room < 0:
        return -1
    d = (math.isqrt(8 * room + 1) - 1) // 2
    return d - n if d >= n else -1


class ReSetEnumerator:
    """Deterministic enumerator of a recursively enumerable set.

    ``events()`` yields one item per schedule step: the newly discovered
    element, or None when the step discovers nothing.
    """

    name = "re-set"

    def events(self) -> Iterator[int | None]:
        raise NotImplementedError

    def enumerate(self, budget: int, threads: int = 1) -> list[int]:
        """Sorted elements discovered within the first ``budget`` steps."""
        found = set()
        for step, item in enumerate(self.events()):
            if step >= budget:
                break
            if item is not None:
                found.add(item)
        return sorted(found)


class ExplicitRecursive(ReSetEnumerator):
    """Decidable set: step t decides membership of t."""

    def __init__(self, rule: Callable[[int], bool], name: str = "recursive"):
        self.rule = rule
        self.name = name

    def events(self):
        n = 0
        while True:
            yield n if self.rule(n) else None
            n += 1

    def decides(self, n: int) -> bool:
        return bool(self.rule(n))


class _Dovetail(ReSetEnumerator):
    """Domain of a family of programs, program for input n given by ``_program``."""

    def _program(self, n: int) -> UrmProgram:
        raise NotImplementedError

    def events(self):
        machines: dict[int, Machine] = {}
        done: set[int] = set()
        t = 0
        while True:
            n, k = diagonal_cell(t)
            t += 1
            if n in done:
                yield None
                continue
            m = machines.get(n)
            if m is None:
                m = machines[n] = Machine(self._program(n), n)
            if m.advance((1 << k) - m.steps):
                done.add(n)
                del machines[n]
                yield n
            else:
                yield None

    def enumerate(self, budget: int, threads: int = 1) -> list[int]:
        if threads <= 1:
            return super().enumerate(budget)
        # each input runs once with its largest scheduled fuel; halting within
        # 2**k for a smaller k implies halting within the larger fuel
        ns = [n for n in range(budget) if _max_exponent(n, budget) >= 0]

        def check(n):
            res = run(self._program(n), n, 1 << _max_exponent(n, budget))
            return n if isinstance(res, Halted) else None

        with ThreadPoolExecutor(max_workers=threads) as pool:
            hits = list(pool.map(check, ns))
        return sorted(n for n in hits if n is not None)


class HaltingSet(_Dovetail):
    """K = {n | decode(n) halts on input n}."""

    name = "halting"

    def _program(self, n):
        return decode(n)


class ProgramDomain(_Dovetail):
    """W = {n | program halts on input n}."""

    def __init__(self, program: UrmProgram, name: str = "program"):
        self.program = program
        self.name = name

    def _program(self, n):
        return self.program


def evens() -> ExplicitRecursive:
    return ExplicitRecursive(lambda n: n % 2 == 0, "evens")


def odds() -> ExplicitRecursive:
    return ExplicitRecursive(lambda n: n % 2 == 1, "odds")


def empty_set() -> ExplicitRecursive:
    return ExplicitRecursive(lambda n: False, "empty")


def all_naturals() -> ExplicitRecursive:
    return ExplicitRecursive(lambda n: True, "all")
