"""Smith normal form over the integers, with transforms.

Matrices are plain lists of rows of Python ints.
"""
from __future__ import annotations

from dataclasses import dataclass


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    cols = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def matvec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


@dataclass
class SmithForm:
    """S @ A @ T = D with S, T unimodular and D diagonal, d_i | d_(i+1)."""

    diagonal: list[int]
    S: list[list[int]]
    S_inv: list[list[int]]
    T: list[list[int]]
    T_inv: list[list[int]]
    rows: int
    cols: int

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def smith_normal_form(A: list[list[int]], cols: int | None = None) -> SmithForm:
    m = len(A)
    n = len(A[0]) if A else (cols or 0)
    D = [list(map(int, row)) for row in A]
    S, S_inv = identity(m), identity(m)
    T, T_inv = identity(n), identity(n)

    def swap_rows(i, j):
        if i != j:
            D[i], D[j] = D[j], D[i]
            S[i], S[j] = S[j], S[i]
            for row in S_inv:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i != j:
            for row in D:
                row[i], row[j] = row[j], row[i]
            for row in T:
                row[i], row[j] = row[j], row[i]
            T_inv[i], T_inv[j] = T_inv[j], T_inv[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        S[dst] = [a + q * b for a, b in zip(S[dst], S[src])]
        for row in S_inv:
            row[src] -= q * row[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for row in D:
            row[dst] += q * row[src]
        for row in T:
            row[dst] += q * row[src]
        T_inv[src] = [a - q * b for a, b in zip(T_inv[src], T_inv[dst])]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    if D[i][t]:
                        dirty = True
            if dirty:
                i = min((i for i in range(t + 1, m) if D[i][t]), key=lambda i: abs(D[i][t]))
                swap_rows(t, i)
                continue
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    if D[t][j]:
                        dirty = True
            if dirty:
                j = min((j for j in range(t + 1, n) if D[t][j]), key=lambda j: abs(D[t][j]))
                swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(D[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            S[t] = [-a for a in S[t]]
            for row in S_inv:
                row[t] = -row[t]
        diag.append(D[t][t])
        t += 1
    return SmithForm(diag, S, S_inv, T, T_inv, m, n)


def solve_integer(A: list[list[int]], b: list[int], cols: int, snf: SmithForm | None = None) -> list[int] | None:
    """An integer solution x of A x = b, or None if there is none."""
    snf = snf or smith_normal_form(A, cols)
    sb = matvec(snf.S, b) if snf.rows else []
    y = [0] * snf.cols
    for i, v in enumerate(sb):
        if i < snf.rank:
            d = snf.diagonal[i]
            if v % d:
                return None
            y[i] = v // d
        elif v:
            return None
    return matvec(snf.T, y) if snf.cols else []
