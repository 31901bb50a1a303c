"""Combinatorial singular simplices and the per-level search context.

A combinatorial d-simplex of depth (r, s) is a simplicial map from
Sd^r(Delta^d) to Sd^s(T), stored as the tuple of target vertices indexed by
the (lexicographically ordered) vertices of Sd^r(Delta^d). For s = 0 target
vertices are the original labels of T; for s >= 1 they are vertex indices of
the subdivision.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .complex import (
    IteratedSubdivision,
    SimplicialChain,
    SimplicialComplex,
    barycentric_subdivide,
    sort_with_sign,
    standard_simplex,
)


@dataclass(frozen=True, order=True)
class CombinatorialSimplex:
    r: int
    s: int
    vertex_map: tuple[int, ...]

    def to_json(self) -> dict:
        return {"r": self.r, "s": self.s, "vertex_map": list(self.vertex_map)}

    @classmethod
    def from_json(cls, obj) -> CombinatorialSimplex:
        return cls(int(obj["r"]), int(obj["s"]), tuple(int(v) for v in obj["vertex_map"]))


class Domain:
    """Sd^r(Delta^d) with orientation signs and face inclusions."""

    def __init__(self, d: int, r: int):
        self.d, self.r = d, r
        self.sub: IteratedSubdivision = barycentric_subdivide(standard_simplex(d), r)
        cx = self.sub.complex
        self.n_vertices = len(cx.simplices[0])
        top = SimplicialChain(d, {tuple(range(d + 1)): 1})
        chain = self.sub.chain_map(top)
        # ordered list of (top simplex, sign) of the subdivided fundamental chain
        self.tops: list[tuple[tuple[int, ...], int]] = sorted(chain.terms.items())
        self.faces = [self._face_inclusion(i) for i in range(d + 1)] if d else []

    def _face_inclusion(self, i: int) -> tuple[int, ...]:
        """Vertices of Sd^r(Delta^d) hit by Sd^r of the i-th face inclusion, in order."""
        phi = {v: v + (v >= i) for v in range(self.d)}
        src = barycentric_subdivide(standard_simplex(self.d - 1), self.r)
        for k, step in enumerate(src.steps):
            target_step = self.sub.steps[k]
            phi = {
                v: target_step.vertex_of[tuple(sorted(phi[u] for u in step.carrier[v]))]
                for v in range(len(step.carrier))
            }
        return tuple(phi[v] for v in range(len(phi)))

    @property
    def n_top(self) -> int:
        return len(self.tops)


@lru_cache(maxsize=32)
def domain(d: int, r: int) -> Domain:
    return Domain(d, r)


class Target:
    """Sd^s(T) with dense vertex indices, simplex lookup and Sd^s(z)."""

    def __init__(self, T: SimplicialComplex, z: SimplicialChain, s: int):
        self.s = s
        self.sub = barycentric_subdivide(T, s)
        cx = self.complex = self.sub.complex
        self.labels: list[int] = cx.vertices
        self.dense = {v: i for i, v in enumerate(self.labels)}
        n = self.n_vertices = len(self.labels)
        self.base = n + 1
        nbrs: list[set] = [set() for _ in range(n)]
        for a, b in cx.simplices[1] if cx.dimension >= 1 else []:
            nbrs[self.dense[a]].add(self.dense[b])
            nbrs[self.dense[b]].add(self.dense[a])
        self.adjacency = [frozenset(x) for x in nbrs]
        d = cx.dimension
        self.tops = cx.simplices[d]
        # key of a sorted dense vertex tuple -> index among top simplices, or -1
        self.simplex_key: dict[int, int] = {}
        for k in range(min(2, d), d + 1):
            for j, simplex in enumerate(cx.simplices[k]):
                self.simplex_key[self.key(tuple(self.dense[v] for v in simplex))] = j if k == d else -1
        self.cycle = self.sub.chain_map(z)

    def key(self, dense_sorted) -> int:
        k = 0
        for v in reversed(dense_sorted):
            k = k * self.base + v + 1
        return k


@dataclass
class LevelContext:
    """Flat data consumed by the map-search kernels for one (r, s, m) level."""

    d: int
    n_dom: int
    n_tgt: int
    n_top: int
    earlier: list[tuple[int, ...]]  # domain neighbours u < v, per v
    tops_by_last: list[list[tuple[tuple[int, ...], int]]]
    completed: list[int]  # number of domain tops finished once vertex v is set
    adjacency: list[frozenset]
    simplex_key: dict[int, int]
    base: int
    faces: list[tuple[int, ...]]
    residual: list[int]  # m * Sd^s(z) on the target tops
    labels: list[int]


def level_context(dom: Domain, tgt: Target, m: int) -> LevelContext:
    n = dom.n_vertices
    earlier: list[set] = [set() for _ in range(n)]
    dcx = dom.sub.complex
    for a, b in dcx.simplices[1] if dcx.dimension >= 1 else []:
        earlier[b].add(a)
    tops_by_last: list[list] = [[] for _ in range(n)]
    for simplex, sign in dom.tops:
        tops_by_last[simplex[-1]].append((simplex, sign))
    completed, k = [], 0
    for v in range(n):
        k += len(tops_by_last[v])
        completed.append(k)
    top_index = {t: j for j, t in enumerate(tgt.tops)}
    residual = [0] * len(tgt.tops)
    for simplex, c in tgt.cycle.terms.items():
        residual[top_index[simplex]] = m * c
    return LevelContext(
        d=dom.d,
        n_dom=n,
        n_tgt=tgt.n_vertices,
        n_top=dom.n_top,
        earlier=[tuple(sorted(e)) for e in earlier],
        tops_by_last=tops_by_last,
        completed=completed,
        adjacency=tgt.adjacency,
        simplex_key=tgt.simplex_key,
        base=tgt.base,
        faces=dom.faces,
        residual=residual,
        labels=tgt.labels,
    )


def pushed_terms(ctx: LevelContext, code) -> list[tuple[int, int]]:
    """(target top index, sign) for each non-degenerate domain top under ``code``."""
    out = []
    for simplex in ctx.tops_by_last:
        for tau, sign in simplex:
            e, srt = sort_with_sign([code[x] for x in tau])
            if e:
                k = 0
                for v in reversed(srt):
                    k = k * ctx.base + v + 1
                out.append((ctx.simplex_key[k], sign * e))
    return out


def face_terms(ctx: LevelContext, code) -> list[tuple[tuple[int, ...], int]]:
    """Singular faces of ``code`` with their boundary signs."""
    return [(tuple(code[v] for v in face), -1 if i % 2 else 1) for i, face in enumerate(ctx.faces)]


def coefficient_keys(bound: int) -> list[int]:
    """1, -1, 2, -2, ... up to absolute value ``bound``."""
    out = []
    for a in range(1, bound + 1):
        out += [a, -a]
    return out
