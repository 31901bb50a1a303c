"""Semi-decision of ||m [T]||_1 <= n and the upper-bound stream for ||T||.

Candidates are homogeneous chains: every term has the same depths (r, s).
Canonical order is (r, s, l1-norm, term list), the term list being sorted by
vertex-map code and compared lexicographically with coefficients keyed
1, -1, 2, -2, ... The pruned search below returns exactly the first
candidate of :func:`enumerate_combinatorial_chains` that passes
:func:`~simvol.l1.witness.verify_witness`; it only cuts branches that provably
cannot close up.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from ..computable import UpperBoundStream
from . import kernel as _kernel
from .combinatorial import (
    CombinatorialSimplex,
    LevelContext,
    Target,
    coefficient_keys,
    domain,
    face_terms,
    level_context,
    pushed_terms,
)
from .complex import SimplicialComplex, fundamental_cycle
from .witness import Witness, make_witness


@dataclass(frozen=True)
class Budget:
    r_max: int = 0
    s_max: int = 0
    node_limit: int | None = None  # per (r, s, norm) level; None = unlimited


@dataclass
class Certified:
    witness: Witness
    nodes: int = 0

    status = "Certified"


@dataclass
class Exhausted:
    """Budget used up without a witness; says nothing about the norm."""

    reason: str = "budget exhausted"
    nodes: int = 0

    status = "Exhausted"


class _Problem:
    """Cached targets and contexts for one complex."""

    def __init__(self, T: SimplicialComplex):
        self.T = T
        self.z = fundamental_cycle(T)
        self.d = T.dimension
        self._targets: dict[int, Target] = {}

    def target(self, s: int) -> Target:
        if s not in self._targets:
            self._targets[s] = Target(self.T, self.z, s)
        return self._targets[s]

    def target_norm(self, s: int) -> int:
        return self.z.l1_norm() * math.factorial(self.d + 1) ** s

    def n_top(self, r: int) -> int:
        return math.factorial(self.d + 1) ** r

    def context(self, r: int, s: int, m: int) -> LevelContext:
        return level_context(domain(self.d, r), self.target(s), m)


@lru_cache(maxsize=16)
def _problem(key: str) -> _Problem:
    import json

    from .complex import load_complex

    return _Problem(load_complex(json.loads(key)))


def problem_for(T: SimplicialComplex) -> _Problem:
    import json

    return _problem(json.dumps(T.to_json(), sort_keys=True))


def _apply(residual, faces_res, code_terms, face_list, c):
    P = residual[:]
    for idx, e in code_terms:
        P[idx] -= c * e
    F = dict(faces_res)
    for f, e in face_list:
        v = F.get(f, 0) + c * e
        if v:
            F[f] = v
        else:
            F.pop(f, None)
    return P, F


class _Counter:
    def __init__(self, limit):
        self.limit = limit if limit is not None else float("inf")
        self.used = 0

    def left(self):
        return self.limit - self.used


def _dfs(ctx, bound, rem, P, F, terms, counter, find):
    """First (code, coeff) list completing P = 0 and F = {} with norm exactly rem more."""
    if rem == 0:
        return terms if not any(P) and not F else None
    keys = coefficient_keys(rem)
    b = bound
    while True:
        code, alive, used = _call(find, ctx, b, rem, P, keys, counter)
        if code is None:
            return None
        pushed = pushed_terms(ctx, code)
        faces = face_terms(ctx, code)
        for c in alive:
            left = rem - abs(c)
            P2, F2 = _apply(P, F, pushed, faces, c)
            if sum(map(abs, P2)) > left * ctx.n_top:
                continue
            if sum(map(abs, F2.values())) > left * (ctx.d + 1):
                continue
            out = _dfs(ctx, code, left, P2, F2, terms + [(code, c)], counter, find)
            if out is not None:
                return out
        b = code


def _call(find, ctx, bound, rem, P, keys, counter):
    left = counter.left()
    try:
        code, alive, used = find(ctx, bound, rem, P, keys, left if left != float("inf") else 1 << 62)
    except _kernel.NodeLimit:
        counter.used = counter.limit + 1
        raise
    counter.used += used
    return code, alive, used


def _first_terms(ctx, nu, counter, find):
    """Yield root candidates (code, coeff, P, F, root nodes so far) in canonical order.

    A final ``None`` marks that the root enumeration hit the node limit.
    """
    keys = coefficient_keys(nu)
    b = None
    P, F = ctx.residual, {}
    while True:
        try:
            code, alive, _ = _call(find, ctx, b, nu, P, keys, counter)
        except _kernel.NodeLimit:
            yield None
            return
        if code is None:
            return
        pushed = pushed_terms(ctx, code)
        faces = face_terms(ctx, code)
        for c in alive:
            left = nu - abs(c)
            P2, F2 = _apply(P, F, pushed, faces, c)
            if sum(map(abs, P2)) > left * ctx.n_top or sum(map(abs, F2.values())) > left * (ctx.d + 1):
                continue
            yield code, c, P2, F2, counter.used
        b = code


def _search_level(ctx: LevelContext, nu: int, node_limit, threads: int, find):
    """Search one (r, s, nu) level; returns (terms or None, nodes, exhausted)."""
    if sum(map(abs, ctx.residual)) > nu * ctx.n_top:
        return None, 0, False
    root = _Counter(node_limit)
    shards = _first_terms(ctx, nu, root, find)

    def run(item):
        if item is None:
            return None, 0, True
        code, c, P2, F2, _ = item
        counter = _Counter(node_limit)
        try:
            out = _dfs(ctx, code, nu - abs(c), P2, F2, [(code, c)], counter, find)
        except _kernel.NodeLimit:
            return None, counter.used, True
        return out, counter.used, False

    total = 0
    root_used = 0
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        while True:
            batch = list(itertools.islice(shards, max(1, threads * 4)))
            if not batch:
                return None, root.used + total, False
            results = pool.map(run, batch) if pool else map(run, batch)
            for item, (out, used, hit) in zip(batch, results):
                # costs are accumulated in canonical order, so the outcome
                # does not depend on the number of threads
                if item is None:
                    return None, root.used + total, True
                root_used = item[4]
                total += used
                if hit or (node_limit is not None and root_used + total > node_limit):
                    return None, root_used + total, True
                if out is not None:
                    return out, root_used + total, False
    finally:
        if pool:
            pool.shutdown(wait=True, cancel_futures=True)


def _witness_from(problem: _Problem, ctx: LevelContext, r: int, s: int, m: int, n: int, terms) -> Witness:
    chain = [(c, CombinatorialSimplex(r, s, tuple(ctx.labels[v] for v in code))) for code, c in terms]
    return make_witness(problem.T, m, n, chain, problem.z)


def search_cell(T: SimplicialComplex, m: int, n: int, r: int, s: int, node_limit=None, threads=1,
                find=None) -> Certified | Exhausted | None:
    """Search the single depth pair (r, s) for norms 1..n. None = no witness there."""
    problem = problem_for(T)
    find = find or _kernel.find_next_map
    nodes = 0
    if n * problem.n_top(r) < m * problem.target_norm(s):
        return None
    ctx = problem.context(r, s, m)
    for nu in range(1, n + 1):
        terms, used, hit = _search_level(ctx, nu, node_limit, threads, find)
        nodes += used
        if hit:
            return Exhausted(f"node limit at r={r} s={s} norm={nu}", nodes)
        if terms is not None:
            return Certified(_witness_from(problem, ctx, r, s, m, n, terms), nodes)
    return None


def semi_decide(T: SimplicialComplex, m: int, n: int, budget: Budget = Budget(), threads: int = 1,
                find=None) -> Certified | Exhausted:
    """Certify ||m [T]||_1 <= n by the canonically first witness within the budget."""
    if m < 1 or n < 0:
        raise ValueError("need m >= 1 and n >= 0")
    nodes = 0
    for r in range(budget.r_max + 1):
        for s in range(budget.s_max + 1):
            out = search_cell(T, m, n, r, s, budget.node_limit, threads, find)
            if out is None:
                continue
            out.nodes += nodes
            return out
    return Exhausted(nodes=nodes)


def enumerate_combinatorial_chains(T: SimplicialComplex, m: int, n: int, budget: Budget) -> Iterator[tuple]:
    """Every candidate chain in canonical order, unpruned.

    Yields (r, s, [(coefficient, CombinatorialSimplex), ...]); the empty chain
    comes first, once. ``m`` does not restrict the candidates; it is accepted
    so the signature matches the decision problem.
    """
    del m
    problem = problem_for(T)
    yield 0, 0, []
    for r in range(budget.r_max + 1):
        dom = domain(problem.d, r)
        for s in range(budget.s_max + 1):
            tgt = problem.target(s)
            maps = list(_all_simplicial_maps(dom, tgt))
            for nu in range(1, n + 1):
                for terms in _chains_of_norm(maps, nu, 0):
                    yield r, s, [
                        (c, CombinatorialSimplex(r, s, tuple(tgt.labels[v] for v in code))) for code, c in terms
                    ]


def _chains_of_norm(maps, nu, start):
    for i in range(start, len(maps)):
        for c in coefficient_keys(nu):
            left = nu - abs(c)
            if left == 0:
                yield [(maps[i], c)]
            else:
                for rest in _chains_of_norm(maps, left, i + 1):
                    yield [(maps[i], c)] + rest


def _all_simplicial_maps(dom, tgt) -> Iterator[tuple[int, ...]]:
    simplices = {frozenset(tgt.dense[v] for v in s) for lvl in tgt.complex.simplices for s in lvl}
    tops = [t for t, _ in dom.tops]
    for code in itertools.product(range(tgt.n_vertices), repeat=dom.n_vertices):
        if all(frozenset(code[x] for x in t) in simplices for t in tops):
            yield code


# ---------------------------------------------------------------------------
# upper-bound stream


@dataclass
class StreamEvent:
    index: int
    cell: tuple[int, int, int]  # (m, r, s)
    bound: Fraction
    witness: Witness | None = None
    nodes: int = 0


def stream_cells() -> Iterator[tuple[int, int, int]]:
    """Cells (m, r, s): stage t lists (m - 1, r, s) with sum t in lex order."""
    for t in itertools.count():
        for a in range(t + 1):
            for r in range(t - a + 1):
                yield a + 1, r, t - a - r


def simvol_events(T: SimplicialComplex, cells: int | None = None, node_limit: int | None = 200_000,
                  max_depth: int = 5, threads: int = 1, find=None) -> Iterator[StreamEvent]:
    """Seed emission ||z||_1, then one event per certified cell.

    For cell (m, r, s) the target is n = ceil(best * m) - 1, the largest norm
    that would improve the running minimum best; cells with n < 1, or depth
    above ``max_depth``, are skipped. ``cells`` caps the number of cells
    visited.
    """
    problem = problem_for(T)
    best = Fraction(problem.z.l1_norm())
    yield StreamEvent(0, (1, 0, 0), best)
    k = 1
    for i, (m, r, s) in enumerate(stream_cells()):
        if cells is not None and i >= cells:
            return
        if r > max_depth or s > max_depth:
            continue
        n = math.ceil(best * m) - 1
        if n < 1:
            continue
        out = search_cell(T, m, n, r, s, node_limit, threads, find)
        if isinstance(out, Certified):
            w = out.witness
            best = min(best, Fraction(w.norm, m))
            yield StreamEvent(k, (m, r, s), Fraction(w.norm, m), w, out.nodes)
            k += 1


def simvol_stream(T: SimplicialComplex, **kw) -> UpperBoundStream:
    """Upper bounds n/m for ||T||; each is backed by a verified witness."""
    return UpperBoundStream((e.bound for e in simvol_events(T, **kw)), name="simvol")
