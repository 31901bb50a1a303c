"""Witnesses for ||m [T]||_1 <= n and their independent re-verification.

:func:`verify_witness` rebuilds every object it needs from the complex and the
vertex maps; it shares no state with the search.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .combinatorial import CombinatorialSimplex
from .complex import (
    SimplicialChain,
    SimplicialComplex,
    barycentric_subdivide,
    fundamental_cycle,
    load_complex,
    standard_simplex,
)

FORMAT = "simvol-witness/1"


@dataclass
class Witness:
    complex: SimplicialComplex
    m: int
    n: int
    chain: list[tuple[int, CombinatorialSimplex]]
    certificates: dict = field(default_factory=dict)

    @property
    def norm(self) -> int:
        return sum(abs(c) for c, _ in self.chain)

    @property
    def depths(self) -> tuple[int, int] | None:
        return (self.chain[0][1].r, self.chain[0][1].s) if self.chain else None

    def to_json(self) -> dict:
        return {
            "format": FORMAT,
            "complex": self.complex.to_json(),
            "m": self.m,
            "n": self.n,
            "norm": self.norm,
            "terms": [{"coefficient": c, **sigma.to_json()} for c, sigma in self.chain],
            "certificates": self.certificates,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj) -> Witness:
        if isinstance(obj, str):
            obj = json.loads(obj)
        if obj.get("format") != FORMAT:
            raise ValueError(f"not a witness file (format {obj.get('format')!r})")
        chain = [(int(t["coefficient"]), CombinatorialSimplex.from_json(t)) for t in obj["terms"]]
        return cls(load_complex(obj["complex"]), int(obj["m"]), int(obj["n"]), chain, obj.get("certificates", {}))

    def __eq__(self, other):
        if not isinstance(other, Witness):
            return NotImplemented
        return self.to_json() == other.to_json()


@dataclass
class Verdict:
    ok: bool
    reason: str = ""
    checks: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------------------
# independent verification


def _faces_by_support(sub, d: int) -> list[list[int]]:
    """Vertices of Sd^r(Delta^d) lying in the i-th face, in increasing order."""
    n = len(sub.complex.simplices[0])
    supports = [sub.support(v) for v in range(n)]
    return [[v for v in range(n) if i not in supports[v]] for i in range(d + 1)]


def _check(T: SimplicialComplex, z: SimplicialChain, w: Witness) -> Verdict:
    checks = {"simplicial": False, "cycle": False, "class": False, "norm": False}
    if w.m < 1 or w.n < 0:
        return Verdict(False, "m must be positive and n non-negative", checks)
    if any(c == 0 for c, _ in w.chain):
        return Verdict(False, "zero coefficient stored", checks)
    norm = sum(abs(c) for c, _ in w.chain)
    checks["norm"] = norm <= w.n
    if not w.chain:
        checks["simplicial"] = checks["cycle"] = True
        return Verdict(False, "empty chain cannot represent a non-zero class", checks)
    depths = {(sigma.r, sigma.s) for _, sigma in w.chain}
    if len(depths) != 1:
        return Verdict(False, "terms have mixed subdivision depths", checks)
    (r, s), = depths
    d = T.dimension
    dom = barycentric_subdivide(standard_simplex(d), r)
    tgt = barycentric_subdivide(T, s)
    dom_cx, tgt_cx = dom.complex, tgt.complex
    n_dom = len(dom_cx.simplices[0])
    dom_tops = dom_cx.simplices[d]

    # (1) simpliciality
    for _, sigma in w.chain:
        f = sigma.vertex_map
        if len(f) != n_dom:
            return Verdict(False, f"vertex map has {len(f)} entries, expected {n_dom}", checks)
        for tau in dom_tops:
            if tuple(sorted({f[v] for v in tau})) not in tgt_cx:
                return Verdict(False, f"image of {tau} under {f} is not a simplex", checks)
    checks["simplicial"] = True

    # (2) singular faces cancel
    faces = _faces_by_support(dom, d)
    residue: dict[tuple, int] = {}
    for c, sigma in w.chain:
        for i, vs in enumerate(faces):
            key = tuple(sigma.vertex_map[v] for v in vs)
            residue[key] = residue.get(key, 0) + (-c if i % 2 else c)
    leftover = {k: v for k, v in residue.items() if v}
    checks["cycle"] = not leftover
    if leftover:
        return Verdict(False, f"boundary does not vanish ({len(leftover)} faces survive)", checks)

    # (3) class: push to Sd^s(T) and compare with m * Sd^s(z)
    fundamental = dom.chain_map(SimplicialChain(d, {tuple(range(d + 1)): 1}))
    items = []
    for c, sigma in w.chain:
        for tau, e in fundamental.terms.items():
            items.append((c * e, [sigma.vertex_map[v] for v in tau]))
    pushed = SimplicialChain.from_oriented(d, items)
    diff = pushed - w.m * tgt.chain_map(z)
    x = tgt_cx.is_boundary(diff)
    checks["class"] = x is not None
    if x is None:
        return Verdict(False, "pushed chain is not homologous to m times the fundamental cycle", checks)
    given = w.certificates.get("class_solution")
    if given is not None and given != x:
        # any solution will do, as long as it solves the system
        if len(given) != tgt_cx.count(d + 1):
            return Verdict(False, "stored class certificate has the wrong length", checks)
        image = tgt_cx.chain_from_vector(d, [0] * tgt_cx.count(d))
        for j, c in enumerate(given):
            image = image + c * SimplicialChain(d + 1, {tgt_cx.simplices[d + 1][j]: 1}).boundary()
        if image != diff:
            return Verdict(False, "stored class certificate does not solve the boundary equation", checks)
    if not checks["norm"]:
        return Verdict(False, f"l1-norm {norm} exceeds n = {w.n}", checks)
    return Verdict(True, "", checks)


def verify_witness(T: SimplicialComplex | None, w: Witness) -> Verdict:
    """Re-check simpliciality, cycle condition, class and norm of ``w``."""
    T = T if T is not None else w.complex
    try:
        z = fundamental_cycle(T)
    except ValueError as exc:
        return Verdict(False, f"no fundamental cycle: {exc}")
    return _check(T, z, w)


def make_witness(T: SimplicialComplex, m: int, n: int, chain, z: SimplicialChain | None = None) -> Witness:
    """Package a chain with its certificates (face cancellation, class solution)."""
    w = Witness(T, m, n, sorted(chain, key=lambda t: t[1].vertex_map))
    if chain:
        r, s = chain[0][1].r, chain[0][1].s
        tgt = barycentric_subdivide(T, s)
        z = z if z is not None else fundamental_cycle(T)
        dom = barycentric_subdivide(standard_simplex(T.dimension), r)
        fundamental = dom.chain_map(SimplicialChain(T.dimension, {tuple(range(T.dimension + 1)): 1}))
        items = [
            (c * e, [sigma.vertex_map[v] for v in tau]) for c, sigma in chain for tau, e in fundamental.terms.items()
        ]
        diff = SimplicialChain.from_oriented(T.dimension, items) - m * tgt.chain_map(z)
        x = tgt.complex.is_boundary(diff)
        w.certificates = {"face_cancellation": "formal", "class_solution": x, "r": r, "s": s}
    return w


# ---------------------------------------------------------------------------
# refinement and concatenation


def subdivide_term(T: SimplicialComplex, sigma: CombinatorialSimplex) -> CombinatorialSimplex:
    """Sd(f): Sd^(r+1)(Delta^d) -> Sd^(s+1)(T), barycentre of a simplex to barycentre of its image."""
    d = T.dimension
    dom_step = barycentric_subdivide(standard_simplex(d), sigma.r + 1).steps[-1]
    tgt_step = barycentric_subdivide(T, sigma.s + 1).steps[-1]
    f = sigma.vertex_map
    new = tuple(tgt_step.vertex_of[tuple(sorted({f[u] for u in carrier}))] for carrier in dom_step.carrier)
    return CombinatorialSimplex(sigma.r + 1, sigma.s + 1, new)


def deepen_domain(T: SimplicialComplex, sigma: CombinatorialSimplex) -> CombinatorialSimplex:
    """f composed with the last-vertex map Sd^(r+1)(Delta^d) -> Sd^r(Delta^d)."""
    dom_step = barycentric_subdivide(standard_simplex(T.dimension), sigma.r + 1).steps[-1]
    f = sigma.vertex_map
    return CombinatorialSimplex(sigma.r + 1, sigma.s, tuple(f[carrier[-1]] for carrier in dom_step.carrier))


def refine(T: SimplicialComplex, w: Witness, r: int, s: int) -> Witness:
    """Move every term of ``w`` to depths (r, s); needs s >= s0 and r - s >= r0 - s0."""
    if not w.chain:
        return w
    r0, s0 = w.depths
    if s < s0 or r - s < r0 - s0:
        raise ValueError(f"cannot refine depths ({r0}, {s0}) to ({r}, {s})")
    out = []
    for c, sigma in w.chain:
        for _ in range(s - s0):
            sigma = subdivide_term(T, sigma)
        for _ in range(r - sigma.r):
            sigma = deepen_domain(T, sigma)
        out.append((c, sigma))
    return make_witness(T, w.m, w.n, _merge(out))


def _merge(chain):
    acc: dict[CombinatorialSimplex, int] = {}
    for c, sigma in chain:
        acc[sigma] = acc.get(sigma, 0) + c
    return [(c, sigma) for sigma, c in acc.items() if c]


def concatenate(T: SimplicialComplex, w1: Witness, w2: Witness) -> Witness:
    """A witness for (m1 + m2, n1 + n2) from witnesses for (m1, n1) and (m2, n2)."""
    if not w1.chain or not w2.chain:
        raise ValueError("cannot concatenate an empty witness")
    (r1, s1), (r2, s2) = w1.depths, w2.depths
    S = max(s1, s2)
    R = max(r1 + S - s1, r2 + S - s2)
    a, b = refine(T, w1, R, S), refine(T, w2, R, S)
    return make_witness(T, w1.m + w2.m, w1.n + w2.n, _merge(a.chain + b.chain))
