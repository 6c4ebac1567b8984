"""Weighted graphs, shortest-path distances and Cartesian products.

Graphs are small (tens of vertices) and every quantity is an exact
integer.  The text format is::

    # comment
    n m
    u v w        (m lines, 0-based endpoints, positive integer weight)
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np

from .errors import DisconnectedError, ParseError, ValidationError

__all__ = [
    "WeightedGraph",
    "DistanceMatrix",
    "parse_graph",
    "format_graph",
    "all_pairs_distances",
    "is_weight_minimal",
    "diameter",
    "cartesian_product",
    "metric_closure",
    "path_graph",
    "cycle_graph",
    "complete_graph",
    "path_weights",
    "cycle_weights",
]


@dataclass(frozen=True)
class WeightedGraph:
    n: int
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("graph needs at least one vertex")
        seen = set()
        norm = []
        for e in self.edges:
            u, v, w = (int(x) for x in e)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValidationError(f"edge ({u},{v}) has an endpoint outside 0..{self.n - 1}")
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if w < 1:
                raise ValidationError(f"edge ({u},{v}) has non-positive weight {w}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValidationError(f"duplicate edge ({key[0]},{key[1]})")
            seen.add(key)
            norm.append((u, v, w))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return tuple(tuple(a) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def weight(self, u: int, v: int) -> int | None:
        for x, w in self.adjacency[u]:
            if x == v:
                return w
        return None

    def is_connected(self) -> bool:
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for v, _ in self.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == self.n

    def is_tree(self) -> bool:
        return self.m == self.n - 1 and self.is_connected()

    def is_unit(self) -> bool:
        return all(w == 1 for _, _, w in self.edges)

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    @cached_property
    def distances(self) -> DistanceMatrix:
        return all_pairs_distances(self)

    def require_connected(self) -> None:
        if not self.is_connected():
            raise DisconnectedError("graph is not connected")


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric integer matrix of shortest-path distances (read-only)."""

    d: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = np.array(self.d, dtype=np.int64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValidationError("distance matrix must be square")
        if (np.diag(d) != 0).any():
            raise ValidationError("distance matrix must have a zero diagonal")
        if (d != d.T).any():
            raise ValidationError("distance matrix must be symmetric")
        if (d < 0).any():
            raise ValidationError("distances must be nonnegative")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def __getitem__(self, ij):
        return int(self.d[ij])

    def __eq__(self, other):
        return isinstance(other, DistanceMatrix) and np.array_equal(self.d, other.d)

    def __hash__(self):
        return hash(self.d.tobytes())

    def __repr__(self):
        return f"DistanceMatrix(n={self.n}, diameter={self.diameter})"

    @property
    def diameter(self) -> int:
        return int(self.d.max()) if self.n > 1 else 0

    def scaled(self, lam: int) -> DistanceMatrix:
        return DistanceMatrix(self.d * int(lam))

    def pairs(self):
        """Yield ``(i, j, d_ij)`` for i < j."""
        for i, j in combinations(range(self.n), 2):
            yield i, j, int(self.d[i, j])

    def is_metric(self) -> bool:
        """True iff the triangle inequality holds everywhere and off-diagonal entries are positive."""
        d = self.d
        if self.n > 1 and (d + np.eye(self.n, dtype=np.int64) <= 0).any():
            return False
        via = d[:, :, None] + d[None, :, :]  # via[u, z, v] = d(u,z) + d(z,v)
        return bool((d <= via.min(axis=1)).all())

    def as_graph(self) -> WeightedGraph:
        """The metric closure: complete graph weighted by these distances."""
        return WeightedGraph(self.n, tuple((i, j, w) for i, j, w in self.pairs()))

    def submatrix(self, vertices) -> DistanceMatrix:
        idx = list(vertices)
        return DistanceMatrix(self.d[np.ix_(idx, idx)])


def parse_graph(text: str) -> WeightedGraph:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        lines.append((lineno, s.split()))
    if not lines:
        raise ParseError("empty graph description")
    lineno, head = lines[0]
    if len(head) != 2:
        raise ParseError("header must be 'n m'", lineno)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError("header values must be integers", lineno) from None
    if n < 1 or m < 0:
        raise ParseError("need n >= 1 and m >= 0", lineno)
    body = lines[1:]
    if len(body) != m:
        raise ParseError(f"header announces {m} edges but {len(body)} edge lines follow", lineno)

    edges = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, toks in body:
        if len(toks) != 3:
            raise ParseError("edge line must be 'u v w'", lineno)
        try:
            u, v, w = (int(t) for t in toks)
        except ValueError:
            raise ParseError("edge fields must be integers", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex index out of range 0..{n - 1}", lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        if w < 1:
            raise ParseError(f"weight must be a positive integer, got {w}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge {key[0]}-{key[1]} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        edges.append((u, v, w))
    return WeightedGraph(n, tuple(edges))


def format_graph(g: WeightedGraph) -> str:
    out = [f"{g.n} {g.m}"]
    out += [f"{u} {v} {w}" for u, v, w in g.edges]
    return "\n".join(out) + "\n"


def all_pairs_distances(g: WeightedGraph) -> DistanceMatrix:
    """Floyd-Warshall on the dense integer matrix."""
    g.require_connected()
    n = g.n
    big = np.iinfo(np.int64).max // 4
    d = np.full((n, n), big, dtype=np.int64)
    np.fill_diagonal(d, 0)
    for u, v, w in g.edges:
        d[u, v] = d[v, u] = min(d[u, v], w)
    for k in range(n):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    return DistanceMatrix(d)


def is_weight_minimal(g: WeightedGraph) -> bool:
    d = g.distances.d
    return all(d[u, v] == w for u, v, w in g.edges)


def diameter(g: WeightedGraph) -> int:
    return g.distances.diameter


def metric_closure(g: WeightedGraph) -> WeightedGraph:
    return g.distances.as_graph()


def cartesian_product(g1: WeightedGraph, g2: WeightedGraph) -> WeightedGraph:
    """Vertex (i, j) of the product gets index ``i * g2.n + j``."""
    g1.require_connected()
    g2.require_connected()
    n2 = g2.n
    edges = []
    for u, v, w in g1.edges:
        edges += [(u * n2 + j, v * n2 + j, w) for j in range(n2)]
    for u, v, w in g2.edges:
        edges += [(i * n2 + u, i * n2 + v, w) for i in range(g1.n)]
    edges.sort(key=lambda e: (min(e[0], e[1]), max(e[0], e[1])))
    return WeightedGraph(g1.n * n2, tuple(edges))


# -- standard families -------------------------------------------------------

def path_graph(weights) -> WeightedGraph:
    weights = list(weights)
    return WeightedGraph(len(weights) + 1, tuple((i, i + 1, w) for i, w in enumerate(weights)))


def cycle_graph(weights) -> WeightedGraph:
    weights = list(weights)
    n = len(weights)
    if n < 3:
        raise ValidationError("a cycle needs at least 3 vertices")
    return WeightedGraph(n, tuple((i, (i + 1) % n, w) for i, w in enumerate(weights)))


def complete_graph(n: int, weight: int = 1) -> WeightedGraph:
    return WeightedGraph(n, tuple((i, j, weight) for i, j in combinations(range(n), 2)))


def _walk(g: WeightedGraph, start: int) -> tuple[list[int], list[int]]:
    order, weights = [start], []
    prev, cur = -1, start
    while True:
        nxt = [(v, w) for v, w in g.adjacency[cur] if v != prev]
        if not nxt or nxt[0][0] == start:
            if nxt:
                weights.append(nxt[0][1])
            return order, weights
        v, w = nxt[0]
        order.append(v)
        weights.append(w)
        prev, cur = cur, v


def path_weights(g: WeightedGraph) -> tuple[list[int], list[int]] | None:
    """If g is a path, return (vertex order, consecutive edge weights)."""
    if g.n == 1:
        return [0], []
    if not g.is_tree() or any(g.degree(v) > 2 for v in range(g.n)):
        return None
    start = min(v for v in range(g.n) if g.degree(v) == 1)
    return _walk(g, start)


def cycle_weights(g: WeightedGraph) -> tuple[list[int], list[int]] | None:
    """If g is a cycle, return (vertex order from 0, edge weights around it)."""
    if g.n < 3 or g.m != g.n or any(g.degree(v) != 2 for v in range(g.n)):
        return None
    if not g.is_connected():
        return None
    order, weights = _walk(g, 0)
    return order, weights


def log2_ceil(n: int) -> int:
    """ceil(log2 n) for n >= 1, in exact integer arithmetic."""
    return (n - 1).bit_length()
