"""Closed-form lower and upper bounds on c(G, w) and on its fractional value beta.

Every number in a report is exact.  Bounds that would need an
out-of-range computation (Held-Karp above ``held_karp_cap`` vertices) are
left out instead of being approximated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from . import _kernels
from .addressing import hadamard_addressing
from .errors import DisconnectedError
from .graph import DistanceMatrix, WeightedGraph, cycle_weights, log2_ceil

__all__ = [
    "BoundReport",
    "lower_bounds",
    "upper_bounds",
    "bounds",
    "bottleneck_spanning_tree",
    "max_subset_sum",
    "subset_plotkin",
    "SUBSET_CAP",
    "HELD_KARP_CAP",
]

SUBSET_CAP = 6
HELD_KARP_CAP = 16
# keep subset enumeration bounded on large graphs
_SUBSET_BUDGET = 2_000_000


def _fmt(v) -> str:
    return str(v)


@dataclass
class BoundReport:
    """Named bounds on c (integers) and on beta (rationals)."""

    lower: dict[str, int] = field(default_factory=dict)
    upper: dict[str, int] = field(default_factory=dict)
    beta_lower: dict[str, Fraction] = field(default_factory=dict)
    beta_upper: dict[str, Fraction] = field(default_factory=dict)

    @staticmethod
    def _best(d: dict, pick):
        if not d:
            return None, None
        # ties resolved by rule name so output is stable
        rule = pick(sorted(d), key=lambda r: d[r])
        return d[rule], rule

    @property
    def best_lower(self):
        return self._best(self.lower, max)[0]

    @property
    def best_lower_rule(self):
        return self._best(self.lower, max)[1]

    @property
    def best_upper(self):
        return self._best(self.upper, min)[0]

    @property
    def best_upper_rule(self):
        return self._best(self.upper, min)[1]

    @property
    def best_beta_lower(self):
        return self._best(self.beta_lower, max)[0]

    @property
    def best_beta_upper(self):
        return self._best(self.beta_upper, min)[0]

    def merge(self, other: BoundReport) -> BoundReport:
        return BoundReport(
            {**self.lower, **other.lower},
            {**self.upper, **other.upper},
            {**self.beta_lower, **other.beta_lower},
            {**self.beta_upper, **other.beta_upper},
        )

    def items(self):
        """(section, rule, value) in deterministic order."""
        for section, d in (
            ("c.lower", self.lower),
            ("c.upper", self.upper),
            ("beta.lower", self.beta_lower),
            ("beta.upper", self.beta_upper),
        ):
            for rule in sorted(d):
                yield section, rule, d[rule]

    def to_kv(self) -> str:
        lines = [f"{section}.{rule}={_fmt(v)}" for section, rule, v in self.items()]
        if self.lower:
            lines.append(f"c.best_lower={self.best_lower}")
        if self.upper:
            lines.append(f"c.best_upper={self.best_upper}")
        return "\n".join(lines) + "\n"

    def to_table(self) -> str:
        rows = [(section, rule, _fmt(v)) for section, rule, v in self.items()]
        if self.lower:
            rows.append(("c", "best lower", f"{self.best_lower} ({self.best_lower_rule})"))
        if self.upper:
            rows.append(("c", "best upper", f"{self.best_upper} ({self.best_upper_rule})"))
        w0 = max([len("bound")] + [len(r[0]) for r in rows])
        w1 = max([len("rule")] + [len(r[1]) for r in rows])
        out = [f"{'bound':<{w0}}  {'rule':<{w1}}  value", f"{'-' * w0}  {'-' * w1}  -----"]
        out += [f"{a:<{w0}}  {b:<{w1}}  {c}" for a, b, c in rows]
        return "\n".join(out) + "\n"


def _as_dm(g) -> DistanceMatrix:
    if isinstance(g, DistanceMatrix):
        return g
    return g.distances


def max_subset_sum(dm: DistanceMatrix, k: int) -> tuple[int, tuple[int, ...]]:
    """Largest total pairwise distance over k-vertex subsets, with the subset."""
    n = dm.n
    if k > n or k < 2:
        return 0, ()
    d = dm.d
    pairs = list(combinations(range(k), 2))
    best, arg = -1, ()
    it = combinations(range(n), k)
    chunk = 1 << 15
    while True:
        block = np.fromiter((x for c in _take(it, chunk) for x in c), dtype=np.int64)
        if block.size == 0:
            break
        block = block.reshape(-1, k)
        total = np.zeros(len(block), dtype=np.int64)
        for a, b in pairs:
            total += d[block[:, a], block[:, b]]
        i = int(total.argmax())
        if total[i] > best:
            best, arg = int(total[i]), tuple(int(x) for x in block[i])
    return best, arg


def _take(it, k):
    for _ in range(k):
        try:
            yield next(it)
        except StopIteration:
            return


def _effective_cap(n: int, cap: int) -> int:
    total, eff = 0, 1
    for k in range(2, min(cap, n) + 1):
        total += comb(n, k)
        if total > _SUBSET_BUDGET:
            break
        eff = k
    return eff


def subset_plotkin(dm: DistanceMatrix, subset_cap: int = SUBSET_CAP) -> tuple[Fraction, tuple[int, ...]]:
    """max over |B| <= cap of sum_{i<j in B} d(i,j) / floor(|B|^2 / 4)."""
    best, arg = Fraction(0), ()
    for k in range(2, _effective_cap(dm.n, subset_cap) + 1):
        s, sub = max_subset_sum(dm, k)
        val = Fraction(s, k * k // 4)
        if val > best:
            best, arg = val, sub
    return best, arg


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def lower_bounds(g, lam: int = 1, subset_cap: int = SUBSET_CAP) -> BoundReport:
    """Lower bounds on c_lam (and on lam * beta) for a graph or distance matrix."""
    dm = _as_dm(g).scaled(lam)
    n = dm.n
    rep = BoundReport()
    diam = dm.diameter
    rep.lower["diameter"] = diam
    rep.lower["log2_vertices"] = log2_ceil(n)
    rep.beta_lower["diameter"] = Fraction(diam)
    if n >= 3:
        tri, _ = max_subset_sum(dm, 3)
        rep.lower["triangle"] = -(-tri // 2)
        rep.beta_lower["triangle"] = Fraction(tri, 2)
    if n >= 2:
        sp, _ = subset_plotkin(dm, subset_cap)
        rep.lower["subset_plotkin"] = _ceil(sp)
        rep.beta_lower["subset_plotkin"] = sp
        total = int(np.triu(dm.d, 1).sum())
        allp = Fraction(total, n * n // 4)
        rep.lower["plotkin_all"] = _ceil(allp)
        rep.beta_lower["plotkin_all"] = allp
    return rep


def bottleneck_spanning_tree(g: WeightedGraph) -> int:
    """min over spanning trees of the heaviest edge, via Kruskal."""
    g.require_connected()
    if g.n == 1:
        return 0
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    joined = 0
    for u, v, w in sorted(g.edges, key=lambda e: e[2]):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            joined += 1
            if joined == g.n - 1:
                return w
    raise DisconnectedError("graph is not connected")


def upper_bounds(g, lam: int = 1, held_karp_cap: int = HELD_KARP_CAP) -> BoundReport:
    """Upper bounds on c_lam.  Hamilton bounds are taken on the metric closure."""
    graph = g if isinstance(g, WeightedGraph) else None
    base = _as_dm(g)
    dm = base.scaled(lam)
    n = dm.n
    rep = BoundReport()
    if n == 1:
        rep.upper["trivial"] = 0
        rep.beta_upper["trivial"] = Fraction(0)
        return rep

    if n <= held_karp_cap:
        hp, _ = _kernels.held_karp_path(dm.d)
        rep.upper["hamilton_path"] = hp
        hc, _ = _kernels.held_karp_cycle(dm.d)
        rep.upper["hamilton_cycle"] = -(-hc // 2)
        rep.beta_upper["hamilton_cycle"] = Fraction(hc, 2)

    tree_src = graph if graph is not None else base.as_graph()
    t = bottleneck_spanning_tree(tree_src) * lam
    rep.upper["bottleneck_tree"] = t * (n - 1)
    rep.upper["log_times_diameter"] = dm.diameter * log2_ceil(n)
    rep.upper["hadamard"] = hadamard_addressing(base, lam).length
    rep.beta_upper["twice_diameter"] = Fraction(2 * dm.diameter)

    if graph is not None:
        if graph.is_tree():
            rep.upper["tree_edge_sum"] = lam * sum(w for _, _, w in graph.edges)
        cyc = cycle_weights(graph)
        if cyc is not None:
            ws = [lam * w for w in cyc[1]]
            rep.upper["cycle_drop_heaviest"] = sum(ws) - max(ws)
            if all(2 * w <= sum(ws) for w in ws):
                rep.upper["cycle_formula"] = -(-sum(ws) // 2)
                rep.beta_upper["cycle_formula"] = Fraction(sum(ws), 2)
    if n == 4 and base.is_metric():
        tris = [int(dm.d[i, j] + dm.d[j, k] + dm.d[i, k]) for i, j, k in combinations(range(4), 3)]
        rep.upper["four_vertex"] = max(-(-t_ // 2) for t_ in tris)

    best = min(rep.upper.values())
    rep.beta_upper["c_upper"] = Fraction(best)
    return rep


def bounds(g, lam: int = 1, subset_cap: int = SUBSET_CAP, held_karp_cap: int = HELD_KARP_CAP) -> BoundReport:
    return lower_bounds(g, lam, subset_cap).merge(upper_bounds(g, lam, held_karp_cap))
