"""Pure-Python kernels. Reference semantics for the compiled versions."""

from __future__ import annotations

import sys

FOUND, INFEASIBLE, BUDGET = 1, 0, -1


def _hamming_caps(D, length):
    # a third vertex w forces h(u,v) <= 2l - d(u,w) - d(v,w)
    n = len(D)
    U = [[length] * n for _ in range(n)]
    for u in range(n):
        for v in range(n):
            if u == v:
                continue
            cap = length
            for w in range(n):
                if w != u and w != v:
                    cap = min(cap, 2 * length - D[u][w] - D[v][w])
            U[u][v] = cap
    return U


def search_rows(D, length, node_limit):
    """Look for rows of ``length`` bits with h(u, v) >= D[u][v].

    Row 0 is fixed to zeros.  Columns are kept in canonical order: columns
    that agree on every placed row form a block, and a new row is 1 on a
    prefix of each block.  So a row is chosen by one count per block, and
    each addressing is visited once up to column permutation.

    Returns ``(status, bits)`` with status FOUND / INFEASIBLE / BUDGET;
    ``bits`` is a list of n lists of 0/1 when found.
    """
    n = len(D)
    D = [[int(x) for x in row] for row in D]
    if n == 1:
        return FOUND, [[0] * length]
    if length == 0:
        return INFEASIBLE, None
    U = _hamming_caps(D, length)
    for u in range(n):
        for v in range(n):
            if u != v and D[u][v] > U[u][v]:
                return INFEASIBLE, None

    nodes = 0
    result = None

    def place(k, sizes, pats):
        # pats[u][b]: bit of placed row u on block b
        nonlocal nodes, result
        if k == n:
            result = (sizes, pats)
            return FOUND
        nb = len(sizes)
        rem = [0] * (nb + 1)
        for b in range(nb - 1, -1, -1):
            rem[b] = rem[b + 1] + sizes[b]
        lo = [D[u][k] for u in range(k)]
        hi = [U[u][k] for u in range(k)]
        partial = [0] * k
        counts = [0] * nb

        def enum_block(b):
            nonlocal nodes
            nodes += 1
            if nodes > node_limit:
                return BUDGET
            if b == nb:
                new_sizes = []
                new_pats = [[] for _ in range(k + 1)]
                for bb in range(nb):
                    c, s = counts[bb], sizes[bb]
                    for part, bit in ((c, 1), (s - c, 0)):
                        if part:
                            new_sizes.append(part)
                            for u in range(k):
                                new_pats[u].append(pats[u][bb])
                            new_pats[k].append(bit)
                return place(k + 1, new_sizes, new_pats)
            s = sizes[b]
            rest = rem[b + 1]
            for c in range(s + 1):
                ok = True
                for u in range(k):
                    p = partial[u] + (s - c if pats[u][b] else c)
                    if p > hi[u] or p + rest < lo[u]:
                        ok = False
                        break
                if not ok:
                    continue
                for u in range(k):
                    partial[u] += s - c if pats[u][b] else c
                counts[b] = c
                r = enum_block(b + 1)
                for u in range(k):
                    partial[u] -= s - c if pats[u][b] else c
                if r != INFEASIBLE:
                    return r
            return INFEASIBLE

        return enum_block(0)

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10000 + 4 * n * (length + 2)))
    try:
        status = place(1, [length], [[0]])
    finally:
        sys.setrecursionlimit(old)
    if status != FOUND:
        return status, None
    sizes, pats = result
    bits = []
    for u in range(n):
        row = []
        for b, s in enumerate(sizes):
            row += [pats[u][b]] * s
        bits.append(row)
    return FOUND, bits


def _held_karp(D, cycle):
    n = len(D)
    if n == 1:
        return 0, [0]
    inf = float("inf")
    full = (1 << n) - 1
    dp = [[inf] * n for _ in range(1 << n)]
    parent = [[-1] * n for _ in range(1 << n)]
    if cycle:
        dp[1][0] = 0
    else:
        for j in range(n):
            dp[1 << j][j] = 0
    for mask in range(1, 1 << n):
        if cycle and not mask & 1:
            continue
        row = dp[mask]
        for i in range(n):
            base = row[i]
            if base == inf:
                continue
            Di = D[i]
            for j in range(n):
                bit = 1 << j
                if mask & bit:
                    continue
                val = base + Di[j]
                nxt = mask | bit
                if val < dp[nxt][j]:
                    dp[nxt][j] = val
                    parent[nxt][j] = i
    if cycle:
        best, end = min((dp[full][j] + D[j][0], j) for j in range(1, n))
    else:
        best, end = min((dp[full][j], j) for j in range(n))
    order = []
    mask, cur = full, end
    while cur != -1:
        order.append(cur)
        prev = parent[mask][cur]
        mask ^= 1 << cur
        cur = prev
    order.reverse()
    return int(best), order


def held_karp_path(D):
    """Minimum-weight Hamilton path of the complete graph D: (weight, vertex order)."""
    return _held_karp([[int(x) for x in row] for row in D], cycle=False)


def held_karp_cycle(D):
    """Minimum-weight Hamilton cycle through vertex 0: (weight, vertex order)."""
    D = [[int(x) for x in row] for row in D]
    if len(D) == 2:
        return 2 * D[0][1], [0, 1]
    return _held_karp(D, cycle=True)
