# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled map-search kernel; same contract as ``_kernel_py.find_next_map``."""
from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memcpy, memset
from libc.stdint cimport int64_t, uint64_t

cdef extern from "stdlib.h":
    long labs(long x) nogil

from ._kernel_py import NodeLimit, find_next_map as _py_find

cdef enum:
    MAX_DIM = 8

MAX_TARGET = 4096


cdef class _Data:
    cdef int n, nt, d1, n_top, n_tt
    cdef int *earlier_ptr
    cdef int *earlier_idx
    cdef int *tops_ptr
    cdef int *tops_verts
    cdef int *tops_sign
    cdef int *completed
    cdef unsigned char *adj
    cdef int64_t *hkeys
    cdef int *hvals
    cdef int64_t hmask
    cdef int hshift
    cdef int64_t base
    cdef int max_tops

    def __cinit__(self):
        self.earlier_ptr = self.earlier_idx = NULL
        self.tops_ptr = self.tops_verts = self.tops_sign = self.completed = NULL
        self.adj = NULL
        self.hkeys = NULL
        self.hvals = NULL

    def __dealloc__(self):
        free(self.earlier_ptr); free(self.earlier_idx)
        free(self.tops_ptr); free(self.tops_verts); free(self.tops_sign)
        free(self.completed); free(self.adj); free(self.hkeys); free(self.hvals)

    cdef void build(self, ctx) except *:
        cdef int i, j, k, v
        self.n = ctx.n_dom
        self.nt = ctx.n_tgt
        self.d1 = ctx.d + 1
        self.n_top = ctx.n_top
        self.n_tt = len(ctx.residual)
        self.base = ctx.base
        n = self.n
        self.earlier_ptr = <int *> malloc((n + 1) * sizeof(int))
        total = sum(len(e) for e in ctx.earlier)
        self.earlier_idx = <int *> malloc((total + 1) * sizeof(int))
        k = 0
        for i in range(n):
            self.earlier_ptr[i] = k
            for v in ctx.earlier[i]:
                self.earlier_idx[k] = v
                k += 1
        self.earlier_ptr[n] = k
        ntops = sum(len(t) for t in ctx.tops_by_last)
        self.tops_ptr = <int *> malloc((n + 1) * sizeof(int))
        self.tops_verts = <int *> malloc((ntops * self.d1 + 1) * sizeof(int))
        self.tops_sign = <int *> malloc((ntops + 1) * sizeof(int))
        self.completed = <int *> malloc((n + 1) * sizeof(int))
        k = 0
        self.max_tops = 0
        for i in range(n):
            self.tops_ptr[i] = k
            self.completed[i] = ctx.completed[i]
            if len(ctx.tops_by_last[i]) > self.max_tops:
                self.max_tops = len(ctx.tops_by_last[i])
            for tau, sign in ctx.tops_by_last[i]:
                for j in range(self.d1):
                    self.tops_verts[k * self.d1 + j] = tau[j]
                self.tops_sign[k] = sign
                k += 1
        self.tops_ptr[n] = k
        nt = self.nt
        self.adj = <unsigned char *> calloc(nt * nt, 1)
        for i in range(nt):
            self.adj[i * nt + i] = 1
            for v in ctx.adjacency[i]:
                self.adj[i * nt + v] = 1
        size = 16
        bits = 4
        while size < 2 * len(ctx.simplex_key) + 2:
            size *= 2
            bits += 1
        self.hshift = 64 - bits
        self.hmask = size - 1
        self.hkeys = <int64_t *> malloc(size * sizeof(int64_t))
        self.hvals = <int *> malloc(size * sizeof(int))
        for i in range(size):
            self.hkeys[i] = 0
        for key, val in ctx.simplex_key.items():
            self._insert(key, val)

    cdef void _insert(self, int64_t key, int val):
        cdef int64_t h = <int64_t> ((<uint64_t> key * <uint64_t> 0x9E3779B97F4A7C15ULL) >> self.hshift)
        while self.hkeys[h] != 0:
            h = (h + 1) & self.hmask
        self.hkeys[h] = key
        self.hvals[h] = val

    cdef inline int lookup(self, int64_t key, int *found) nogil:
        cdef int64_t h = <int64_t> ((<uint64_t> key * <uint64_t> 0x9E3779B97F4A7C15ULL) >> self.hshift)
        while self.hkeys[h] != 0:
            if self.hkeys[h] == key:
                found[0] = 1
                return self.hvals[h]
            h = (h + 1) & self.hmask
        found[0] = 0
        return -1


cdef class _Search:
    cdef _Data D
    cdef int *a
    cdef int *bound
    cdef int has_bound
    cdef long *residual
    cdef long *acc
    cdef long *coeffs
    cdef long *mags
    cdef int nc
    cdef long *norms
    cdef char *alive
    cdef long *saved_norms
    cdef char *saved_alive
    cdef int *ch_idx
    cdef int *ch_e
    cdef long budget
    cdef long long nodes, node_limit

    def __cinit__(self):
        self.a = self.bound = NULL
        self.residual = self.acc = self.coeffs = self.mags = self.norms = self.saved_norms = NULL
        self.alive = self.saved_alive = NULL
        self.ch_idx = self.ch_e = NULL

    def __dealloc__(self):
        free(self.a); free(self.bound); free(self.residual); free(self.acc)
        free(self.coeffs); free(self.mags); free(self.norms); free(self.alive)
        free(self.saved_norms); free(self.saved_alive); free(self.ch_idx); free(self.ch_e)

    cdef int rec(self, int pos, bint tight) except -2:
        cdef _Data D = self.D
        cdef int n = D.n, nt = D.nt, d1 = D.d1, nc = self.nc
        cdef int lo, val, u, t, j, i, e, tmp, idx, found, nch, ci, distinct
        cdef int img[MAX_DIM]
        cdef int64_t key
        cdef bint ok, any_alive, degenerate
        cdef long p, cur, old, c
        if pos == n:
            return 0 if tight else 1
        lo = self.bound[pos] if tight else 0
        for val in range(lo, nt):
            self.nodes += 1
            if self.nodes > self.node_limit:
                raise NodeLimit
            ok = True
            for j in range(D.earlier_ptr[pos], D.earlier_ptr[pos + 1]):
                if not D.adj[self.a[D.earlier_idx[j]] * nt + val]:
                    ok = False
                    break
            if not ok:
                continue
            self.a[pos] = val
            nch = 0
            for t in range(D.tops_ptr[pos], D.tops_ptr[pos + 1]):
                e = D.tops_sign[t]
                for j in range(d1):
                    img[j] = self.a[D.tops_verts[t * d1 + j]]
                for i in range(1, d1):
                    j = i
                    while j > 0 and img[j - 1] > img[j]:
                        tmp = img[j - 1]; img[j - 1] = img[j]; img[j] = tmp
                        e = -e
                        j -= 1
                degenerate = False
                distinct = 1
                for i in range(d1 - 1):
                    if img[i] == img[i + 1]:
                        degenerate = True
                    else:
                        distinct += 1
                if degenerate:
                    if distinct >= 3:
                        key = 0
                        for i in range(d1 - 1, -1, -1):
                            if i == d1 - 1 or img[i] != img[i + 1]:
                                key = key * D.base + img[i] + 1
                        D.lookup(key, &found)
                        if not found:
                            ok = False
                            break
                    continue
                key = 0
                for i in range(d1 - 1, -1, -1):
                    key = key * D.base + img[i] + 1
                idx = D.lookup(key, &found)
                if not found or idx < 0:
                    ok = False
                    break
                self.ch_idx[pos * D.max_tops + nch] = idx
                self.ch_e[pos * D.max_tops + nch] = e
                nch += 1
            if not ok:
                continue
            memcpy(&self.saved_norms[pos * nc], self.norms, nc * sizeof(long))
            memcpy(&self.saved_alive[pos * nc], self.alive, nc)
            for j in range(nch):
                idx = self.ch_idx[pos * D.max_tops + j]
                e = self.ch_e[pos * D.max_tops + j]
                p = self.residual[idx]
                cur = self.acc[idx]
                for ci in range(nc):
                    if self.alive[ci]:
                        c = self.coeffs[ci]
                        old = p - c * cur
                        self.norms[ci] += labs(old - c * e) - labs(old)
                self.acc[idx] = cur + e
            any_alive = False
            for ci in range(nc):
                if self.alive[ci]:
                    if self.norms[ci] > self.budget - self.mags[ci] * D.completed[pos]:
                        self.alive[ci] = 0
                    else:
                        any_alive = True
            if any_alive and self.rec(pos + 1, tight and val == lo):
                return 1
            for j in range(nch):
                self.acc[self.ch_idx[pos * D.max_tops + j]] -= self.ch_e[pos * D.max_tops + j]
            memcpy(self.norms, &self.saved_norms[pos * nc], nc * sizeof(long))
            memcpy(self.alive, &self.saved_alive[pos * nc], nc)
        return 0


cdef _Data _data_for(ctx):
    cached = ctx.__dict__.get("_cdata")
    if cached is None:
        cached = _Data()
        (<_Data> cached).build(ctx)
        ctx.__dict__["_cdata"] = cached
    return <_Data> cached


def find_next_map(ctx, bound, rem, residual, coeffs, node_limit):
    if ctx.n_tgt > MAX_TARGET or ctx.d + 1 > MAX_DIM:
        return _py_find(ctx, bound, rem, residual, coeffs, node_limit)
    cdef _Data D = _data_for(ctx)
    cdef _Search S = _Search()
    cdef int i, n = D.n, nc = len(coeffs)
    S.D = D
    S.nc = nc
    S.a = <int *> calloc(n + 1, sizeof(int))
    S.bound = <int *> calloc(n + 1, sizeof(int))
    S.has_bound = bound is not None
    if bound is not None:
        if len(bound) != n:
            raise ValueError("bound has the wrong length")
        for i in range(n):
            S.bound[i] = bound[i]
    S.residual = <long *> calloc(D.n_tt + 1, sizeof(long))
    S.acc = <long *> calloc(D.n_tt + 1, sizeof(long))
    start = 0
    for i in range(D.n_tt):
        S.residual[i] = residual[i]
        start += abs(residual[i])
    S.coeffs = <long *> malloc((nc + 1) * sizeof(long))
    S.mags = <long *> malloc((nc + 1) * sizeof(long))
    S.norms = <long *> malloc((nc + 1) * sizeof(long))
    S.alive = <char *> malloc(nc + 1)
    for i in range(nc):
        S.coeffs[i] = coeffs[i]
        S.mags[i] = abs(coeffs[i])
        S.norms[i] = start
        S.alive[i] = 1
    S.saved_norms = <long *> malloc((n * nc + 1) * sizeof(long))
    S.saved_alive = <char *> malloc(n * nc + 1)
    S.ch_idx = <int *> malloc((n * D.max_tops + 1) * sizeof(int))
    S.ch_e = <int *> malloc((n * D.max_tops + 1) * sizeof(int))
    S.budget = rem * D.n_top
    S.nodes = 0
    S.node_limit = min(node_limit, 1 << 62)
    found = S.rec(0, S.has_bound)
    if not found:
        return None, None, S.nodes
    return tuple(S.a[i] for i in range(n)), [coeffs[i] for i in range(nc) if S.alive[i]], S.nodes
