"""Pure-Python map-search kernel (reference and fallback)."""
from __future__ import annotations


class NodeLimit(Exception):
    pass


def find_next_map(ctx, bound, rem, residual, coeffs, node_limit):
    """Lexicographically least simplicial map with code > ``bound``.

    ``bound`` None means no lower bound. A map survives only if some
    coefficient c in ``coeffs`` keeps the pushed residual reachable:
    ||residual - c * partial||_1 <= rem * n_top - |c| * (finished tops).

    Returns ``(code, alive_coeffs, nodes)`` or ``(None, None, nodes)``;
    raises NodeLimit once more than ``node_limit`` vertex assignments are tried.
    """
    n = ctx.n_dom
    nt = ctx.n_tgt
    earlier = ctx.earlier
    tops_by_last = ctx.tops_by_last
    completed = ctx.completed
    adjacency = ctx.adjacency
    skey = ctx.simplex_key
    base = ctx.base
    budget = rem * ctx.n_top
    nc = len(coeffs)
    mags = [abs(c) for c in coeffs]
    a = [0] * n
    acc: dict[int, int] = {}
    start_norm = sum(abs(x) for x in residual)
    norms = [start_norm] * nc
    alive = [True] * nc
    nodes = 0

    def rec(pos, tight):
        nonlocal nodes
        if pos == n:
            return not tight
        lo = bound[pos] if tight else 0
        for val in range(lo, nt):
            nodes += 1
            if nodes > node_limit:
                raise NodeLimit
            adj = adjacency[val]
            ok = True
            for u in earlier[pos]:
                w = a[u]
                if w != val and w not in adj:
                    ok = False
                    break
            if not ok:
                continue
            a[pos] = val
            # finish the domain tops whose last vertex is pos
            changes = []
            for tau, sign in tops_by_last[pos]:
                img = [a[x] for x in tau]
                # insertion sort with parity
                e = sign
                for i in range(1, len(img)):
                    j = i
                    while j > 0 and img[j - 1] > img[j]:
                        img[j - 1], img[j] = img[j], img[j - 1]
                        e = -e
                        j -= 1
                degenerate = any(img[i] == img[i + 1] for i in range(len(img) - 1))
                if degenerate:
                    distinct = sorted(set(img))
                    if len(distinct) >= 3:
                        k = 0
                        for v in reversed(distinct):
                            k = k * base + v + 1
                        if k not in skey:
                            ok = False
                            break
                    continue
                k = 0
                for v in reversed(img):
                    k = k * base + v + 1
                idx = skey.get(k)
                if idx is None or idx < 0:
                    ok = False
                    break
                changes.append((idx, e))
            if not ok:
                continue
            saved_norms = norms[:]
            saved_alive = alive[:]
            for idx, e in changes:
                p = residual[idx]
                cur = acc.get(idx, 0)
                for ci in range(nc):
                    if alive[ci]:
                        c = coeffs[ci]
                        old = p - c * cur
                        norms[ci] += abs(old - c * e) - abs(old)
                acc[idx] = cur + e
            cap = completed[pos]
            any_alive = False
            for ci in range(nc):
                if alive[ci]:
                    if norms[ci] > budget - mags[ci] * cap:
                        alive[ci] = False
                    else:
                        any_alive = True
            if any_alive and rec(pos + 1, tight and val == lo):
                return True
            for idx, e in changes:
                acc[idx] -= e
            norms[:] = saved_norms
            alive[:] = saved_alive
        return False

    if bound is not None and len(bound) != n:
        raise ValueError("bound has the wrong length")
    found = rec(0, bound is not None)
    if not found:
        return None, None, nodes
    return tuple(a), [c for c, ok in zip(coeffs, alive) if ok], nodes
