"""Finite simplicial complexes, simplicial chains, homology and subdivision."""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .snf import SmithForm, matvec, smith_normal_form, solve_integer

Simplex = tuple


class ComplexError(ValueError):
    """Malformed complex description."""


class ManifoldError(ValueError):
    """The complex is not a closed connected orientable pseudomanifold."""


def sort_with_sign(vertices: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Sorted tuple and permutation sign; sign 0 when a vertex repeats."""
    vs = list(vertices)
    sign = 1
    for i in range(1, len(vs)):
        j = i
        while j > 0 and vs[j - 1] > vs[j]:
            vs[j - 1], vs[j] = vs[j], vs[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(vs, vs[1:]):
        if a == b:
            return 0, tuple(vs)
    return sign, tuple(vs)


class SimplicialChain:
    """Integral (or rational) combination of oriented simplices of one degree.

    Keys are increasing vertex tuples; zero coefficients are never stored.
    """

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: Mapping[Simplex, int] | None = None):
        self.degree = degree
        self.terms = {}
        for s, c in (terms or {}).items():
            if len(s) != degree + 1:
                raise ValueError(f"simplex {s} has the wrong degree")
            if c:
                self.terms[tuple(s)] = c

    @classmethod
    def from_oriented(cls, degree: int, items: Iterable[tuple[int, Iterable[int]]]) -> SimplicialChain:
        """Sum of c * [v0, ..., vk] over (c, vertices) pairs, degenerate terms dropped."""
        acc: dict[Simplex, int] = {}
        for c, vs in items:
            sign, key = sort_with_sign(vs)
            if sign:
                acc[key] = acc.get(key, 0) + sign * c
        return cls(degree, acc)

    def boundary(self) -> SimplicialChain:
        if self.degree == 0:
            return SimplicialChain(-1)
        acc: dict[Simplex, int] = {}
        for s, c in self.terms.items():
            for i in range(len(s)):
                f = s[:i] + s[i + 1 :]
                acc[f] = acc.get(f, 0) + (-c if i % 2 else c)
        return SimplicialChain(self.degree - 1, acc)

    def l1_norm(self):
        return sum(abs(c) for c in self.terms.values())

    def __add__(self, other: SimplicialChain) -> SimplicialChain:
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        acc = dict(self.terms)
        for s, c in other.terms.items():
            acc[s] = acc.get(s, 0) + c
        return SimplicialChain(self.degree, acc)

    def __neg__(self):
        return SimplicialChain(self.degree, {s: -c for s, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        return SimplicialChain(self.degree, {s: k * c for s, c in self.terms.items()})

    __mul__ = __rmul__

    def __eq__(self, other):
        if not isinstance(other, SimplicialChain):
            return NotImplemented
        return self.degree == other.degree and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"SimplicialChain({self.degree}, {dict(sorted(self.terms.items()))})"


class SimplicialComplex:
    """Face-closed finite complex; simplices are increasing vertex tuples."""

    def __init__(self, simplices: Iterable[Iterable[Simplex]], orientations: Mapping[Simplex, int] | None = None):
        levels = [sorted(set(map(tuple, lvl))) for lvl in simplices]
        while levels and not levels[-1]:
            levels.pop()
        if not levels:
            raise ComplexError("empty complex")
        self.simplices: list[list[Simplex]] = levels
        self.index: list[dict[Simplex, int]] = [{s: i for i, s in enumerate(lvl)} for lvl in levels]
        for k, lvl in enumerate(levels):
            for s in lvl:
                if len(s) != k + 1:
                    raise ComplexError(f"simplex {s} listed in dimension {k}")
                if any(a >= b for a, b in zip(s, s[1:])):
                    raise ComplexError(f"vertices of {s} are not strictly increasing")
                if k:
                    for i in range(k + 1):
                        if s[:i] + s[i + 1 :] not in self.index[k - 1]:
                            raise ComplexError(f"face of {s} missing: complex is not face-closed")
        self.orientations = dict(orientations) if orientations else None

    @classmethod
    def from_top_simplices(cls, tops: Iterable[Iterable[int]], orientations=None) -> SimplicialComplex:
        tops = [tuple(t) for t in tops]
        if not tops:
            raise ComplexError("no simplices given")
        seen = set()
        for t in tops:
            if any(a >= b for a, b in zip(t, t[1:])):
                raise ComplexError(f"vertices of {t} are not strictly increasing")
            if t in seen:
                raise ComplexError(f"duplicate simplex {t}")
            seen.add(t)
        dim = max(len(t) for t in tops) - 1
        levels: list[set] = [set() for _ in range(dim + 1)]
        for t in tops:
            for k in range(len(t)):
                levels[k].update(itertools.combinations(t, k + 1))
        orient = None
        if orientations is not None:
            orientations = list(orientations)
            if len(orientations) != len(tops) or any(o not in (1, -1) for o in orientations):
                raise ComplexError("orientations must be one +-1 per top simplex")
            orient = dict(zip(tops, orientations))
        return cls(levels, orient)

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    @property
    def vertices(self) -> list[int]:
        return [s[0] for s in self.simplices[0]]

    def f_vector(self) -> list[int]:
        return [len(lvl) for lvl in self.simplices]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def __contains__(self, s) -> bool:
        s = tuple(s)
        k = len(s) - 1
        return 0 <= k <= self.dimension and s in self.index[k]

    def top_simplices(self) -> list[Simplex]:
        """Maximal simplices."""
        out = []
        for k, lvl in enumerate(self.simplices):
            above = self.simplices[k + 1] if k < self.dimension else []
            covered = {f for s in above for f in itertools.combinations(s, k + 1)}
            out.extend(s for s in lvl if s not in covered)
        return out

    def is_pure(self) -> bool:
        return all(len(s) == self.dimension + 1 for s in self.top_simplices())

    def to_json(self) -> dict:
        out = {"dimension": self.dimension, "top_simplices": [list(s) for s in self.top_simplices()]}
        if self.orientations:
            out["orientations"] = [self.orientations[tuple(s)] for s in out["top_simplices"]]
        return out

    def boundary_matrix(self, k: int) -> list[list[int]]:
        """Matrix of the boundary C_k -> C_(k-1); rows index (k-1)-simplices."""
        if k <= 0 or k > self.dimension:
            rows = len(self.simplices[k - 1]) if 0 < k <= self.dimension + 1 else 0
            return [[] for _ in range(rows)] if k > self.dimension else []
        rows = self.index[k - 1]
        M = [[0] * len(self.simplices[k]) for _ in range(len(rows))]
        for j, s in enumerate(self.simplices[k]):
            for i in range(k + 1):
                M[rows[s[:i] + s[i + 1 :]]][j] += -1 if i % 2 else 1
        return M

    def chain_vector(self, chain: SimplicialChain) -> list:
        idx = self.index[chain.degree]
        v = [0] * len(idx)
        for s, c in chain.terms.items():
            try:
                v[idx[s]] = c
            except KeyError:
                raise ValueError(f"simplex {s} is not in the complex") from None
        return v

    def chain_from_vector(self, k: int, v) -> SimplicialChain:
        return SimplicialChain(k, {s: c for s, c in zip(self.simplices[k], v) if c})

    def count(self, k: int) -> int:
        return len(self.simplices[k]) if 0 <= k <= self.dimension else 0

    @cached_property
    def _snf(self) -> dict[int, SmithForm]:
        return {}

    def smith(self, k: int) -> SmithForm:
        """Smith form of the boundary C_k -> C_(k-1), cached."""
        if k not in self._snf:
            self._snf[k] = smith_normal_form(self.boundary_matrix(k), cols=self.count(k))
        return self._snf[k]

    def is_boundary(self, chain: SimplicialChain) -> list[int] | None:
        """Integer (k+1)-chain x (as a vector) with boundary x = chain, or None."""
        k = chain.degree
        b = self.chain_vector(chain)
        if k + 1 > self.dimension:
            return [] if not any(b) else None
        return solve_integer(self.boundary_matrix(k + 1), b, self.count(k + 1), self.smith(k + 1))


def load_complex(description: Mapping | str) -> SimplicialComplex:
    """Build a complex from the JSON description (dict, JSON text, or path)."""
    if isinstance(description, str):
        text = description
        if not text.lstrip().startswith("{"):
            with open(text) as fh:
                text = fh.read()
        description = json.loads(text)
    try:
        tops = description["top_simplices"]
    except (KeyError, TypeError):
        raise ComplexError("description needs a 'top_simplices' list") from None
    cx = SimplicialComplex.from_top_simplices(tops, description.get("orientations"))
    if "dimension" in description and description["dimension"] != cx.dimension:
        raise ComplexError(f"declared dimension {description['dimension']} != actual {cx.dimension}")
    if "simplices" in description:
        # an explicit face list must already be closed and agree with the tops
        listed = SimplicialComplex(
            [[tuple(s) for s in description["simplices"].get(str(k), [])] for k in range(cx.dimension + 1)]
        )
        if listed.simplices != cx.simplices:
            raise ComplexError("explicit simplex list disagrees with the closure of the top simplices")
    return cx


# ---------------------------------------------------------------------------
# homology


@dataclass
class HomologyGroup:
    degree: int
    rank: int
    torsion: list[int] = field(default_factory=list)
    generators: list[SimplicialChain] = field(default_factory=list)
    coefficients: str = "Z"

    def __str__(self):
        parts = (["Z^%d" % self.rank] if self.rank > 1 else ["Z"] * self.rank) + [f"Z/{t}" for t in self.torsion]
        if self.coefficients == "Q":
            return f"Q^{self.rank}" if self.rank else "0"
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "coefficients": self.coefficients,
            "rank": self.rank,
            "torsion": self.torsion,
            "group": str(self),
            "generators": [[[c, list(s)] for s, c in sorted(g.terms.items())] for g in self.generators],
        }


def homology(T: SimplicialComplex, degree: int, coefficients: str = "Z") -> HomologyGroup:
    """H_degree(T) via Smith normal forms, with cycles representing free generators."""
    if coefficients not in ("Z", "Q"):
        raise ValueError("coefficients must be 'Z' or 'Q'")
    k = degree
    nk = T.count(k)
    if nk == 0:
        return HomologyGroup(k, 0, [], [], coefficients)
    if k == 0:
        r_k = 0
        kernel_cols = [[int(i == j) for i in range(nk)] for j in range(nk)]
        T_inv = [[int(i == j) for j in range(nk)] for i in range(nk)]
    else:
        f = T.smith(k)
        r_k = f.rank
        kernel_cols = [[f.T[i][j] for i in range(nk)] for j in range(r_k, nk)]
        T_inv = f.T_inv
    dim_ker = nk - r_k
    if T.count(k + 1):
        B = T.boundary_matrix(k + 1)
        X = [row for row in (matvec_rows(T_inv, B))[r_k:]]
        g = smith_normal_form(X, cols=T.count(k + 1))
        diag = g.diagonal
        basis_change = g.S_inv
    else:
        diag = []
        basis_change = [[int(i == j) for j in range(dim_ker)] for i in range(dim_ker)]
    rank = dim_ker - len(diag)
    torsion = [d for d in diag if d > 1]
    gens = []
    for j in range(len(diag), dim_ker):
        coeff = [basis_change[i][j] for i in range(dim_ker)]
        vec = [sum(c * col[t] for c, col in zip(coeff, kernel_cols)) for t in range(nk)]
        gens.append(T.chain_from_vector(k, vec))
    if coefficients == "Q":
        torsion = []
    return HomologyGroup(k, rank, torsion, gens, coefficients)


def matvec_rows(A, B):
    """A @ B for list-of-rows matrices."""
    if not B or not B[0]:
        return [[] for _ in A]
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


# ---------------------------------------------------------------------------
# fundamental cycles


def fundamental_cycle(T: SimplicialComplex) -> SimplicialChain:
    """Signed sum of compatibly oriented top simplices.

    Raises ManifoldError unless T is a closed, connected, orientable
    pseudomanifold of dimension >= 1.
    """
    d = T.dimension
    if d < 1:
        raise ManifoldError("need dimension >= 1")
    if not T.is_pure():
        raise ManifoldError("complex is not pure")
    tops = T.simplices[d]
    cofaces: dict[Simplex, list[tuple[int, int]]] = {}
    for j, s in enumerate(tops):
        for i in range(d + 1):
            cofaces.setdefault(s[:i] + s[i + 1 :], []).append((j, -1 if i % 2 else 1))
    for f, cs in cofaces.items():
        if len(cs) != 2:
            raise ManifoldError(f"face {f} lies in {len(cs)} top simplices; not a closed manifold")
    orient = [0] * len(tops)
    orient[0] = 1
    queue = deque([0])
    while queue:
        j = queue.popleft()
        s = tops[j]
        for i in range(d + 1):
            f = s[:i] + s[i + 1 :]
            (a, sa), (b, sb) = cofaces[f]
            me_sign, (other, other_sign) = (sa, (b, sb)) if a == j else (sb, (a, sa))
            want = -orient[j] * me_sign * other_sign
            if orient[other] == 0:
                orient[other] = want
                queue.append(other)
            elif orient[other] != want:
                raise ManifoldError("orientation system is inconsistent; complex is not orientable")
    if 0 in orient:
        raise ManifoldError("top simplices are not connected through codimension-one faces")
    if T.orientations:
        given = [T.orientations[s] for s in tops]
        if given != orient and given != [-o for o in orient]:
            raise ManifoldError("given orientations are not compatible")
        orient = given
    z = SimplicialChain(d, dict(zip(tops, orient)))
    assert z.boundary().is_zero()
    return z


# ---------------------------------------------------------------------------
# barycentric subdivision


@dataclass
class Subdivision:
    """One barycentric subdivision step.

    Vertex v of the new complex is the barycentre of ``carrier[v]``, a simplex
    of the old complex; vertices are numbered by the lexicographic order of
    their carriers.
    """

    source: SimplicialComplex
    complex: SimplicialComplex
    carrier: list[Simplex]
    vertex_of: dict[Simplex, int]

    def _sd_simplex(self, s: Simplex) -> list[tuple[int, tuple[int, ...]]]:
        # Sd[v] = [v]; Sd(s) = sum_i (-1)^i  b_s * Sd(s minus i-th vertex)
        b = self.vertex_of[s]
        if len(s) == 1:
            return [(1, (b,))]
        out = []
        for i in range(len(s)):
            sign = -1 if i % 2 else 1
            for c, vs in self._sd_simplex(s[:i] + s[i + 1 :]):
                out.append((sign * c, (b,) + vs))
        return out

    def chain_map(self, chain: SimplicialChain) -> SimplicialChain:
        items = []
        for s, c in chain.terms.items():
            items.extend((c * sg, vs) for sg, vs in self._sd_simplex(s))
        return SimplicialChain.from_oriented(chain.degree, items)


def _subdivide_once(T: SimplicialComplex) -> Subdivision:
    carrier = sorted(s for lvl in T.simplices for s in lvl)
    vertex_of = {s: i for i, s in enumerate(carrier)}
    tops = []
    for top in T.top_simplices():
        for perm in itertools.permutations(top):
            # flag {perm[0]} < {perm[0], perm[1]} < ... < top
            flag = [vertex_of[tuple(sorted(perm[: j + 1]))] for j in range(len(top))]
            tops.append(tuple(sorted(flag)))
    return Subdivision(T, SimplicialComplex.from_top_simplices(sorted(tops)), carrier, vertex_of)


class IteratedSubdivision:
    """Sd^times(T) together with the chain map Sd^times_*."""

    def __init__(self, T: SimplicialComplex, times: int):
        self.base = T
        self.steps: list[Subdivision] = []
        cur = T
        for _ in range(times):
            step = _subdivide_once(cur)
            self.steps.append(step)
            cur = step.complex
        self.complex = cur

    @property
    def times(self) -> int:
        return len(self.steps)

    def chain_map(self, chain: SimplicialChain) -> SimplicialChain:
        for step in self.steps:
            chain = step.chain_map(chain)
        return chain

    def support(self, v: int) -> frozenset:
        """Vertices of the base complex spanning the smallest simplex containing vertex v."""
        level = [v]
        for step in reversed(self.steps):
            level = sorted({u for x in level for u in step.carrier[x]})
        return frozenset(level)


def barycentric_subdivide(T: SimplicialComplex, times: int = 1) -> IteratedSubdivision:
    if times < 0:
        raise ValueError("times must be >= 0")
    return IteratedSubdivision(T, times)


# ---------------------------------------------------------------------------
# fixtures


def standard_simplex(d: int) -> SimplicialComplex:
    return SimplicialComplex.from_top_simplices([tuple(range(d + 1))])


def boundary_of_simplex(d: int) -> SimplicialComplex:
    """The boundary of the d-simplex, a (d-1)-sphere."""
    return SimplicialComplex.from_top_simplices(itertools.combinations(range(d + 1), d))


def triangle() -> SimplicialComplex:
    return boundary_of_simplex(2)


def tetrahedron_boundary() -> SimplicialComplex:
    return boundary_of_simplex(3)


def torus7() -> SimplicialComplex:
    """Seven-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    tris = set()
    for i in range(7):
        tris.add(tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))))
        tris.add(tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))))
    return SimplicialComplex.from_top_simplices(sorted(tris))


def grid_surface(n: int, twist: bool) -> SimplicialComplex:
    """n x n grid with opposite sides glued; a Klein bottle when ``twist``."""

    def vid(i, j):
        if j == n:
            j = 0
            if twist:
                i = (n - i) % n
        return (i % n) * n + j

    tris = []
    for i in range(n):
        for j in range(n):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)
            tris.append(tuple(sorted((a, b, d))))
            tris.append(tuple(sorted((a, c, d))))
    return SimplicialComplex.from_top_simplices(tris)


def klein_bottle() -> SimplicialComplex:
    return grid_surface(4, twist=True)
