from __future__ import annotations

import json
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simvol.l1 import complex as cx
from simvol.l1.complex import (
    ComplexError,
    ManifoldError,
    SimplicialChain,
    barycentric_subdivide,
    fundamental_cycle,
    homology,
    load_complex,
)
from simvol.l1.snf import matmul, matvec, smith_normal_form, solve_integer

FIXTURES = {
    "triangle": cx.triangle,
    "tetrahedron": cx.tetrahedron_boundary,
    "torus7": cx.torus7,
    "klein": cx.klein_bottle,
    "simplex3": lambda: cx.standard_simplex(3),
}

matrices = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_smith_form_decomposition(A):
    f = smith_normal_form(A)
    D = matmul(matmul(f.S, A), f.T)
    for i, row in enumerate(D):
        for j, v in enumerate(row):
            assert v == (f.diagonal[i] if i == j and i < f.rank else 0)
    assert all(d > 0 for d in f.diagonal)
    assert all(b % a == 0 for a, b in zip(f.diagonal, f.diagonal[1:]))
    n, m = len(A[0]), len(A)
    assert matmul(f.S, f.S_inv) == [[int(i == j) for j in range(m)] for i in range(m)]
    assert matmul(f.T, f.T_inv) == [[int(i == j) for j in range(n)] for i in range(n)]


@settings(max_examples=200, deadline=None)
@given(matrices, st.data())
def test_solve_integer(A, data):
    x = data.draw(st.lists(st.integers(-5, 5), min_size=len(A[0]), max_size=len(A[0])))
    b = matvec(A, x)
    y = solve_integer(A, b, len(A[0]))
    assert y is not None and matvec(A, y) == b


def test_solve_integer_detects_torsion():
    assert solve_integer([[2]], [1], 1) is None
    assert solve_integer([[2]], [4], 1) == [2]


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_boundary_squared_zero(name):
    T = FIXTURES[name]()
    rng = random.Random(name)
    for k in range(1, T.dimension + 1):
        for _ in range(20):
            c = SimplicialChain(k, {s: rng.randint(-3, 3) for s in T.simplices[k]})
            assert c.boundary().boundary().is_zero()


def test_fixture_shapes():
    assert cx.triangle().f_vector() == [3, 3]
    assert cx.tetrahedron_boundary().f_vector() == [4, 6, 4]
    t = cx.torus7()
    assert t.f_vector() == [7, 21, 14] and t.euler_characteristic() == 0
    assert cx.klein_bottle().euler_characteristic() == 0


@pytest.mark.parametrize(
    "name, expected",
    [
        ("triangle", ["Z", "Z"]),
        ("tetrahedron", ["Z", "0", "Z"]),
        ("torus7", ["Z", "Z^2", "Z"]),
        ("klein", ["Z", "Z + Z/2", "0"]),
        ("simplex3", ["Z", "0", "0", "0"]),
    ],
)
def test_homology_goldens(name, expected):
    T = FIXTURES[name]()
    assert [str(homology(T, k)) for k in range(T.dimension + 1)] == expected


def test_homology_rational_drops_torsion():
    h = homology(cx.klein_bottle(), 1, "Q")
    assert h.rank == 1 and h.torsion == [] and str(h) == "Q^1"
    with pytest.raises(ValueError):
        homology(cx.triangle(), 1, "R")


@pytest.mark.parametrize("name", ["triangle", "tetrahedron", "torus7"])
def test_generators_are_cycles(name):
    T = FIXTURES[name]()
    for k in range(1, T.dimension + 1):
        for g in homology(T, k).generators:
            assert g.boundary().is_zero()
            assert T.is_boundary(g) is None


@pytest.mark.parametrize("name, norm", [("triangle", 3), ("tetrahedron", 4), ("torus7", 14)])
def test_fundamental_cycle(name, norm):
    T = FIXTURES[name]()
    z = fundamental_cycle(T)
    assert z.boundary().is_zero() and z.l1_norm() == norm
    assert set(z.terms.values()) <= {1, -1} and len(z) == len(T.simplices[T.dimension])
    assert T.is_boundary(z) is None


def test_fundamental_cycle_errors():
    with pytest.raises(ManifoldError):
        fundamental_cycle(cx.klein_bottle())
    with pytest.raises(ManifoldError):
        fundamental_cycle(cx.standard_simplex(2))
    two_circles = cx.SimplicialComplex.from_top_simplices([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    with pytest.raises(ManifoldError):
        fundamental_cycle(two_circles)


def test_load_complex_forms(tmp_path):
    desc = {"dimension": 1, "top_simplices": [[0, 1], [1, 2], [0, 2]]}
    a = load_complex(desc)
    b = load_complex(json.dumps(desc))
    path = tmp_path / "t.json"
    path.write_text(json.dumps(desc))
    c = load_complex(str(path))
    assert a.simplices == b.simplices == c.simplices == cx.triangle().simplices
    assert load_complex(a.to_json()).simplices == a.simplices


def test_load_complex_errors():
    with pytest.raises(ComplexError):
        load_complex({"top": []})
    with pytest.raises(ComplexError):
        load_complex({"dimension": 2, "top_simplices": [[0, 1]]})
    with pytest.raises(ValueError):
        load_complex("{not json")


def test_subdivision_counts():
    edge = cx.standard_simplex(1)
    assert len(barycentric_subdivide(edge, 1).complex.simplices[1]) == 2
    tri = cx.standard_simplex(2)
    assert len(barycentric_subdivide(tri, 1).complex.simplices[2]) == 6
    assert len(barycentric_subdivide(tri, 2).complex.simplices[2]) == 36
    assert barycentric_subdivide(cx.triangle(), 0).complex.simplices == cx.triangle().simplices
    with pytest.raises(ValueError):
        barycentric_subdivide(tri, -1)


@pytest.mark.parametrize("name", ["triangle", "tetrahedron"])
@pytest.mark.parametrize("s", [0, 1, 2])
def test_subdivided_fundamental_cycle(name, s):
    T = FIXTURES[name]()
    z = fundamental_cycle(T)
    sub = barycentric_subdivide(T, s)
    zs = sub.chain_map(z)
    d = T.dimension
    assert zs.boundary().is_zero()
    assert zs.l1_norm() == math.factorial(d + 1) ** s * z.l1_norm()
    # same class as the fundamental cycle computed directly on Sd^s T
    direct = fundamental_cycle(sub.complex)
    assert sub.complex.is_boundary(zs - direct) is not None or sub.complex.is_boundary(zs + direct) is not None
    assert sub.complex.is_boundary(zs) is None


@pytest.mark.parametrize("name", ["triangle", "tetrahedron", "torus7"])
def test_subdivision_is_chain_map(name):
    T = FIXTURES[name]()
    sub = barycentric_subdivide(T, 1)
    rng = random.Random(3)
    for k in range(1, T.dimension + 1):
        c = SimplicialChain(k, {s: rng.randint(-2, 2) for s in T.simplices[k]})
        assert sub.chain_map(c).boundary() == sub.chain_map(c.boundary())


def test_support_of_barycentres():
    sub = barycentric_subdivide(cx.standard_simplex(2), 2)
    sizes = [len(sub.support(v)) for v in range(len(sub.complex.simplices[0]))]
    assert sizes.count(1) == 3 and max(sizes) == 3
