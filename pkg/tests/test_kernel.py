from __future__ import annotations

import pytest

from simvol.l1 import tetrahedron_boundary, torus7, triangle
from simvol.l1.combinatorial import coefficient_keys
from simvol.l1.kernel import BACKEND, NodeLimit, find_next_map_c, find_next_map_py
from simvol.l1.search import problem_for

compiled = pytest.mark.skipif(find_next_map_c is None, reason="compiled kernel not built")

LEVELS = [
    (triangle, 0, 0, 1, 3),
    (triangle, 2, 0, 1, 1),
    (triangle, 2, 1, 2, 4),
    (tetrahedron_boundary, 0, 0, 1, 4),
    (tetrahedron_boundary, 1, 0, 1, 2),
    (torus7, 0, 0, 1, 14),
]


def walk(find, ctx, rem, limit=10**7, steps=200):
    """Successive lex-next maps from the start, as (code, alive, nodes) triples."""
    out, bound = [], None
    keys = coefficient_keys(rem)
    for _ in range(steps):
        code, alive, nodes = find(ctx, bound, rem, ctx.residual, keys, limit)
        out.append((code, alive, nodes))
        if code is None:
            break
        bound = code
    return out


def test_backend_name():
    assert BACKEND in ("cython", "python")


@compiled
@pytest.mark.parametrize("make, r, s, m, rem", LEVELS)
def test_kernels_agree_step_by_step(make, r, s, m, rem):
    ctx = problem_for(make()).context(r, s, m)
    assert walk(find_next_map_c, ctx, rem) == walk(find_next_map_py, ctx, rem)


@compiled
def test_kernels_agree_on_node_limit():
    ctx = problem_for(tetrahedron_boundary()).context(1, 0, 1)
    for find in (find_next_map_c, find_next_map_py):
        with pytest.raises(NodeLimit):
            find(ctx, None, 2, ctx.residual, coefficient_keys(2), 5)


def test_returned_maps_are_simplicial_and_increasing():
    T = triangle()
    ctx = problem_for(T).context(2, 0, 1)
    codes = [c for c, _, _ in walk(find_next_map_py, ctx, 1) if c is not None]
    assert codes == sorted(set(codes))
    assert codes and all(len(c) == ctx.n_dom for c in codes)
    for c in codes:
        for v, before in enumerate(ctx.earlier):
            assert all(c[u] == c[v] or c[u] in ctx.adjacency[c[v]] for u in before)


def test_wrong_bound_length_rejected():
    if find_next_map_c is None:
        pytest.skip("compiled kernel not built")
    ctx = problem_for(triangle()).context(0, 0, 1)
    with pytest.raises(ValueError):
        find_next_map_c(ctx, (0,), 1, ctx.residual, [1, -1], 100)
