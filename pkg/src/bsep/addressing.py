"""Binary addressings and the constructions that produce them.

An addressing gives every vertex an ``l``-bit row; it is valid at scale
``lam`` when every pair of rows is at Hamming distance at least
``lam * d(u, v)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyInput,
    NotATree,
    NotWeightMinimal,
    ParseError,
    TriangleViolation,
    ValidationError,
    WrongSize,
)
from .graph import DistanceMatrix, WeightedGraph

__all__ = [
    "Addressing",
    "hamming_matrix",
    "slack",
    "verify",
    "path_addressing",
    "cycle_addressing",
    "triangle_addressing",
    "tree_addressing",
    "complete_graph_addressing",
    "hadamard_code",
    "hadamard_addressing",
    "k4_addressing",
    "hamilton_path_addressing",
    "hamilton_cycle_addressing",
    "concat",
    "parse_addressing",
    "format_addressing",
]


@dataclass(frozen=True, eq=False)
class Addressing:
    bits: np.ndarray = field(repr=False)

    def __post_init__(self):
        b = np.array(self.bits, dtype=np.uint8)
        if b.ndim == 1 and b.size == 0:
            b = b.reshape(0, 0)
        if b.ndim != 2:
            raise ValidationError("addressing must be a 2-D bit matrix")
        if ((b != 0) & (b != 1)).any():
            raise ValidationError("addressing entries must be 0 or 1")
        b.setflags(write=False)
        object.__setattr__(self, "bits", b)

    @classmethod
    def from_strings(cls, rows, length: int | None = None) -> Addressing:
        rows = list(rows)
        if length is None:
            length = len(rows[0]) if rows else 0
        if any(len(r) != length for r in rows):
            raise ValidationError("all addresses must have the same length")
        return cls(np.array([[int(c) for c in r] for r in rows], dtype=np.uint8).reshape(len(rows), length))

    @property
    def n(self) -> int:
        return self.bits.shape[0]

    @property
    def length(self) -> int:
        return self.bits.shape[1]

    def rows(self) -> list[str]:
        return ["".join("1" if x else "0" for x in row) for row in self.bits]

    def __eq__(self, other):
        return isinstance(other, Addressing) and self.bits.shape == other.bits.shape and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.bits.shape, self.bits.tobytes()))

    def __repr__(self):
        return f"Addressing(n={self.n}, l={self.length}, rows={self.rows()})"


def hamming_matrix(a: Addressing) -> np.ndarray:
    b = a.bits.astype(np.int64)
    # |x - y| summed; (n, n) int64
    return b @ (1 - b).T + (1 - b) @ b.T


def slack(a: Addressing, dm: DistanceMatrix, lam: int = 1) -> int | None:
    """Minimum over pairs of ``hamming - lam * d``; None when there are no pairs."""
    if a.n != dm.n:
        raise DimensionMismatch(f"addressing has {a.n} rows but the graph has {dm.n} vertices")
    if a.n < 2:
        return None
    iu = np.triu_indices(a.n, 1)
    return int((hamming_matrix(a) - int(lam) * dm.d)[iu].min())


def verify(a: Addressing, dm: DistanceMatrix, lam: int = 1) -> bool:
    if lam < 1:
        raise ValueError("lambda must be a positive integer")
    s = slack(a, dm, lam)
    return s is None or s >= 0


def _from_int_rows(codes, length: int) -> Addressing:
    bits = np.zeros((len(codes), length), dtype=np.uint8)
    for i, c in enumerate(codes):
        for k in range(length):
            bits[i, length - 1 - k] = (c >> k) & 1
    return Addressing(bits)


def path_addressing(weights) -> Addressing:
    weights = [int(w) for w in weights]
    if not weights:
        raise EmptyInput("a path needs at least one edge")
    if min(weights) < 1:
        raise ValidationError("weights must be positive")
    total = sum(weights)
    bits = np.zeros((len(weights) + 1, total), dtype=np.uint8)
    s = 0
    for k, w in enumerate(weights, start=1):
        s += w
        bits[k, total - s:] = 1
    return Addressing(bits)


def _rolling_window(position: int, length: int) -> np.ndarray:
    """Row of the unit-cycle scheme: fill with ones from the right, then clear from the left."""
    row = np.zeros(length, dtype=np.uint8)
    if position <= length:
        row[length - position:] = 1
    else:
        row[: 2 * length - position] = 1
    return row


def cycle_addressing(weights) -> Addressing:
    """Subdivide every edge into unit edges and walk the rolling-window code.

    Vertex 0 sits at position 0 (all zeros); vertex k at the prefix sum of
    the first k weights.
    """
    weights = [int(w) for w in weights]
    if len(weights) < 3:
        raise ValidationError("a cycle needs at least 3 edges")
    if min(weights) < 1:
        raise ValidationError("weights must be positive")
    total = sum(weights)
    for w in weights:
        if 2 * w > total:
            raise NotWeightMinimal(f"edge of weight {w} is longer than the rest of the cycle ({total - w})")
    length = -(-total // 2)
    pos = 0
    rows = []
    for w in weights:
        rows.append(_rolling_window(pos, length))
        pos += w
    return Addressing(np.array(rows, dtype=np.uint8).reshape(len(rows), length))


def triangle_addressing(a: int, b: int, c: int) -> Addressing:
    """Rows for (u, v, z) with d(u,v)=c, d(u,z)=b, d(v,z)=a."""
    if not (1 <= a <= b <= c):
        raise ValueError("expected 1 <= a <= b <= c")
    if c > a + b:
        raise TriangleViolation(f"{c} > {a} + {b}")
    k = -(-(a + b + c) // 2)
    bits = np.zeros((3, k), dtype=np.uint8)
    bits[1, :c] = 1
    bits[2, k - b:] = 1
    return Addressing(bits)


def tree_addressing(g: WeightedGraph) -> Addressing:
    """Isometric embedding: one block of w(e) columns per edge, set below the edge."""
    if not g.is_tree():
        raise NotATree("graph is not a tree")
    parent_edge = [-1] * g.n
    order = [0]
    seen = {0}
    for u in order:
        for v, _ in g.adjacency[u]:
            if v not in seen:
                seen.add(v)
                order.append(v)
                parent_edge[v] = next(
                    k for k, (x, y, _) in enumerate(g.edges) if {x, y} == {u, v}
                )
    parent = {}
    for v in range(1, g.n):
        x, y, _ = g.edges[parent_edge[v]]
        parent[v] = x if y == v else y
    offsets = np.cumsum([0] + [w for _, _, w in g.edges])
    bits = np.zeros((g.n, int(offsets[-1])), dtype=np.uint8)
    for v in order[1:]:
        k = parent_edge[v]
        bits[v] = bits[parent[v]]
        bits[v, offsets[k]:offsets[k + 1]] = 1
    return Addressing(bits)


def complete_graph_addressing(n: int) -> Addressing:
    if n < 1:
        raise ValueError("n must be positive")
    length = (n - 1).bit_length()
    return _from_int_rows(range(n), length)


def _sylvester_bits(k: int) -> np.ndarray:
    """Rows of the order-2^k Sylvester matrix as bits: entry (i, j) = parity(i & j)."""
    idx = np.arange(1 << k)
    anded = idx[:, None] & idx[None, :]
    parity = np.zeros_like(anded)
    while anded.any():
        parity ^= anded & 1
        anded >>= 1
    return parity.astype(np.uint8)


def hadamard_code(k: int) -> list[str]:
    """2^(k+1) codewords of length 2^k: the Sylvester rows followed by their complements."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    h = _sylvester_bits(k)
    rows = np.vstack([h, 1 - h])
    return ["".join(map(str, r)) for r in rows]


def hadamard_addressing(dm: DistanceMatrix, lam: int = 1) -> Addressing:
    need = max(dm.n, 2 * int(lam) * dm.diameter)
    k = max(0, (need - 1).bit_length())
    return Addressing(_sylvester_bits(k)[: dm.n])


def _require_metric(dm: DistanceMatrix) -> None:
    if not dm.is_metric():
        raise NotWeightMinimal("distances violate the triangle inequality")


def k4_addressing(dm: DistanceMatrix) -> Addressing:
    """Length max over triangles of ceil(T/2) for a 4-point metric.

    Take the heaviest triangle (u, v, z) and address it as a triangle.  The
    fourth vertex starts at u^v^z, which is at distance h(v,z), h(u,z),
    h(u,v) from u, v, z.  At most one of its true distances exceeds the
    opposite triangle side (say at z, by gamma); flipping gamma bits where
    the start agrees with z fixes that while using the slack on u and v.
    """
    if dm.n != 4:
        raise WrongSize(f"expected 4 vertices, got {dm.n}")
    _require_metric(dm)
    d = dm.d
    tri_weight = {}
    for tri in combinations(range(4), 3):
        i, j, k = tri
        tri_weight[tri] = int(d[i, j] + d[j, k] + d[i, k])
    heavy = max(tri_weight, key=lambda t: (tri_weight[t], t))
    w = next(x for x in range(4) if x not in heavy)
    length = -(-tri_weight[heavy] // 2)

    # gamma for each triangle vertex: excess of d(w, x) over the side opposite x
    def opposite(x):
        a, b = (y for y in heavy if y != x)
        return int(d[a, b])

    excess = {x: int(d[w, x]) - opposite(x) for x in heavy}
    z = max(heavy, key=lambda x: (excess[x], -x))
    u, v = (y for y in heavy if y != z)
    gamma = max(0, excess[z])

    rows = {}
    rows[u] = np.zeros(length, dtype=np.uint8)
    rows[v] = np.zeros(length, dtype=np.uint8)
    rows[v][: int(d[u, v])] = 1
    rows[z] = np.zeros(length, dtype=np.uint8)
    rows[z][length - int(d[u, z]):] = 1
    fourth = rows[u] ^ rows[v] ^ rows[z]
    if gamma:
        agree = np.flatnonzero(fourth == rows[z])
        fourth = fourth.copy()
        fourth[agree[:gamma]] ^= 1
    rows[w] = fourth
    return Addressing(np.array([rows[i] for i in range(4)], dtype=np.uint8))


def hamilton_path_addressing(dm: DistanceMatrix, order) -> Addressing:
    """Path scheme along a Hamilton path of the metric closure; rows follow vertex indices."""
    order = list(order)
    if sorted(order) != list(range(dm.n)):
        raise ValidationError("order must be a permutation of the vertices")
    if dm.n == 1:
        return Addressing(np.zeros((1, 0), dtype=np.uint8))
    along = path_addressing([dm[a, b] for a, b in zip(order, order[1:])])
    bits = np.empty_like(along.bits)
    bits[order] = along.bits
    return Addressing(bits)


def hamilton_cycle_addressing(dm: DistanceMatrix, order) -> Addressing:
    """Cycle scheme along a Hamilton cycle of the metric closure (n >= 3)."""
    order = list(order)
    if sorted(order) != list(range(dm.n)) or dm.n < 3:
        raise ValidationError("order must be a permutation of at least 3 vertices")
    around = cycle_addressing([dm[a, b] for a, b in zip(order, order[1:] + order[:1])])
    bits = np.empty_like(around.bits)
    bits[order] = around.bits
    return Addressing(bits)


def concat(a1: Addressing, a2: Addressing, n2: int | None = None) -> Addressing:
    """Row of product vertex i * n2 + j is row i of a1 followed by row j of a2."""
    if n2 is not None and n2 != a2.n:
        raise DimensionMismatch(f"second factor has {a2.n} rows, pairing expects {n2}")
    left = np.repeat(a1.bits, a2.n, axis=0)
    right = np.tile(a2.bits, (a1.n, 1))
    return Addressing(np.hstack([left, right]))


def parse_addressing(text: str) -> Addressing:
    lines = [(i, s.strip()) for i, s in enumerate(text.splitlines(), start=1)]
    lines = [(i, s) for i, s in lines if s and not s.startswith("#")]
    if not lines:
        raise ParseError("empty addressing")
    lineno, head = lines[0]
    try:
        n, l = (int(t) for t in head.split())
    except ValueError:
        raise ParseError("header must be 'n l'", lineno) from None
    body = lines[1:]
    if len(body) != n:
        raise ParseError(f"header announces {n} rows but {len(body)} follow", lineno)
    rows = []
    for lineno, s in body:
        if l == 0 and s == "-":
            s = ""
        if len(s) != l or set(s) - {"0", "1"}:
            raise ParseError(f"expected {l} characters from {{0,1}}", lineno)
        rows.append(s)
    return Addressing.from_strings(rows, l)


def format_addressing(a: Addressing) -> str:
    rows = [r if r else "-" for r in a.rows()]
    return "\n".join([f"{a.n} {a.length}", *rows]) + "\n"

