# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Same enumeration order and results as _pykernels."""

import numpy as np
from libc.stdlib cimport malloc, calloc, free
from libc.stdint cimport int64_t

cdef enum:
    FOUND = 1
    INFEASIBLE = 0
    BUDGET = -1


cdef struct Search:
    int n
    int L
    int maxb
    int64_t *D          # n*n
    int64_t *U          # n*n
    int64_t nodes
    int64_t limit
    int *nblocks        # [depth]
    int *sizes          # [depth][maxb]
    unsigned char *pats  # [depth][n][maxb]
    int *counts         # [depth][maxb]
    int64_t *partial    # [depth][n]
    int64_t *rem        # [depth][maxb + 1]


cdef int _place(Search *s, int k) nogil:
    cdef int nb, b
    cdef int maxb = s.maxb
    if k == s.n:
        return FOUND
    nb = s.nblocks[k]
    cdef int *sizes = s.sizes + k * maxb
    cdef int64_t *rem = s.rem + k * (maxb + 1)
    rem[nb] = 0
    for b in range(nb - 1, -1, -1):
        rem[b] = rem[b + 1] + sizes[b]
    cdef int64_t *partial = s.partial + k * s.n
    for b in range(k):
        partial[b] = 0
    return _enum_block(s, k, 0)


cdef int _enum_block(Search *s, int k, int b) nogil:
    cdef int n = s.n, maxb = s.maxb
    cdef int nb = s.nblocks[k]
    cdef int *sizes = s.sizes + k * maxb
    cdef unsigned char *pats = s.pats + k * n * maxb
    cdef int *counts = s.counts + k * maxb
    cdef int64_t *partial = s.partial + k * n
    cdef int64_t *rem = s.rem + k * (maxb + 1)
    cdef int bb, u, c, sz, part, nb2, r, ok
    cdef int64_t p, contrib, rest
    cdef int *nsizes
    cdef unsigned char *npats

    s.nodes += 1
    if s.nodes > s.limit:
        return BUDGET
    if b == nb:
        nsizes = s.sizes + (k + 1) * maxb
        npats = s.pats + (k + 1) * n * maxb
        nb2 = 0
        for bb in range(nb):
            c = counts[bb]
            sz = sizes[bb]
            part = c
            if part:
                nsizes[nb2] = part
                for u in range(k):
                    npats[u * maxb + nb2] = pats[u * maxb + bb]
                npats[k * maxb + nb2] = 1
                nb2 += 1
            part = sz - c
            if part:
                nsizes[nb2] = part
                for u in range(k):
                    npats[u * maxb + nb2] = pats[u * maxb + bb]
                npats[k * maxb + nb2] = 0
                nb2 += 1
        s.nblocks[k + 1] = nb2
        return _place(s, k + 1)

    sz = sizes[b]
    rest = rem[b + 1]
    for c in range(sz + 1):
        ok = 1
        for u in range(k):
            contrib = (sz - c) if pats[u * maxb + b] else c
            p = partial[u] + contrib
            if p > s.U[u * n + k] or p + rest < s.D[u * n + k]:
                ok = 0
                break
        if not ok:
            continue
        for u in range(k):
            partial[u] += (sz - c) if pats[u * maxb + b] else c
        counts[b] = c
        r = _enum_block(s, k, b + 1)
        for u in range(k):
            partial[u] -= (sz - c) if pats[u * maxb + b] else c
        if r != INFEASIBLE:
            return r
    return INFEASIBLE


def search_rows(D, int length, long long node_limit):
    """See _pykernels.search_rows."""
    cdef int64_t[:, ::1] Dm = np.array(D, dtype=np.int64, order="C")
    cdef int n = Dm.shape[0]
    cdef int u, v, w, b
    cdef int64_t cap, alt
    if n == 1:
        return FOUND, [[0] * length]
    if length == 0:
        return INFEASIBLE, None

    cdef Search s
    s.n = n
    s.L = length
    s.maxb = length
    s.nodes = 0
    s.limit = node_limit
    s.D = <int64_t *> malloc(n * n * sizeof(int64_t))
    s.U = <int64_t *> malloc(n * n * sizeof(int64_t))
    s.nblocks = <int *> calloc(n + 1, sizeof(int))
    s.sizes = <int *> calloc((n + 1) * length, sizeof(int))
    s.pats = <unsigned char *> calloc((n + 1) * n * length, sizeof(unsigned char))
    s.counts = <int *> calloc((n + 1) * length, sizeof(int))
    s.partial = <int64_t *> calloc((n + 1) * n, sizeof(int64_t))
    s.rem = <int64_t *> calloc((n + 1) * (length + 1), sizeof(int64_t))
    try:
        for u in range(n):
            for v in range(n):
                s.D[u * n + v] = Dm[u, v]
        for u in range(n):
            for v in range(n):
                cap = length
                if u != v:
                    for w in range(n):
                        if w != u and w != v:
                            alt = 2 * length - Dm[u, w] - Dm[v, w]
                            if alt < cap:
                                cap = alt
                s.U[u * n + v] = cap
        for u in range(n):
            for v in range(n):
                if u != v and s.D[u * n + v] > s.U[u * n + v]:
                    return INFEASIBLE, None

        s.nblocks[1] = 1
        s.sizes[1 * length + 0] = length
        s.pats[1 * n * length + 0] = 0
        with nogil:
            status = _place(&s, 1)
        if status != FOUND:
            return status, None
        bits = []
        for u in range(n):
            row = []
            for b in range(s.nblocks[n]):
                row += [int(s.pats[n * n * length + u * length + b])] * s.sizes[n * length + b]
            bits.append(row)
        return FOUND, bits
    finally:
        free(s.D)
        free(s.U)
        free(s.nblocks)
        free(s.sizes)
        free(s.pats)
        free(s.counts)
        free(s.partial)
        free(s.rem)


cdef tuple _held_karp(int64_t[:, ::1] D, bint cycle):
    cdef int n = D.shape[0]
    cdef int64_t INF = (<int64_t>1) << 62
    cdef Py_ssize_t full = (1 << n) - 1
    cdef Py_ssize_t mask, nxt
    cdef int i, j, end
    cdef int64_t base, val, best
    dp_arr = np.full((1 << n, n), INF, dtype=np.int64)
    par_arr = np.full((1 << n, n), -1, dtype=np.int8)
    cdef int64_t[:, ::1] dp = dp_arr
    cdef signed char[:, ::1] parent = par_arr
    if cycle:
        dp[1, 0] = 0
    else:
        for j in range(n):
            dp[1 << j, j] = 0
    with nogil:
        for mask in range(1, 1 << n):
            if cycle and not (mask & 1):
                continue
            for i in range(n):
                base = dp[mask, i]
                if base == INF:
                    continue
                for j in range(n):
                    if mask & (1 << j):
                        continue
                    val = base + D[i, j]
                    nxt = mask | (1 << j)
                    if val < dp[nxt, j]:
                        dp[nxt, j] = val
                        parent[nxt, j] = i
    best = INF
    end = -1
    if cycle:
        for j in range(1, n):
            val = dp[full, j] + D[j, 0]
            if val < best:
                best = val
                end = j
    else:
        for j in range(n):
            if dp[full, j] < best:
                best = dp[full, j]
                end = j
    order = []
    mask = full
    cdef int cur = end, prev
    while cur != -1:
        order.append(cur)
        prev = parent[mask, cur]
        mask ^= (1 << cur)
        cur = prev
    order.reverse()
    return int(best), order


def held_karp_path(D):
    cdef int64_t[:, ::1] Dm = np.array(D, dtype=np.int64, order="C")
    if Dm.shape[0] == 1:
        return 0, [0]
    return _held_karp(Dm, False)


def held_karp_cycle(D):
    cdef int64_t[:, ::1] Dm = np.array(D, dtype=np.int64, order="C")
    if Dm.shape[0] == 1:
        return 0, [0]
    if Dm.shape[0] == 2:
        return int(2 * Dm[0, 1]), [0, 1]
    return _held_karp(Dm, True)
