"""Cartesian products: concatenated addressings and exactness certificates.

Concatenating factor addressings always gives an upper bound for the
product.  It is exact whenever some lower bound evaluated on the product
reaches it; the functions below (the proper functions) are the lower
bounds tried, each computed on the metric closure of the product.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import comb

import numpy as np

from .addressing import (
    Addressing,
    complete_graph_addressing,
    concat,
    cycle_addressing,
    k4_addressing,
    path_addressing,
    verify,
)
from .bounds import max_subset_sum
from .errors import SizeLimit, ValidationError
from .exact import brute_force_c
from .graph import WeightedGraph, cartesian_product, cycle_weights, log2_ceil, path_weights

__all__ = [
    "ProperFunctionId",
    "LOG_VERTICES",
    "DIAMETER",
    "TRIANGLE_PLOTKIN",
    "subset_plotkin_fn",
    "PROPER_FUNCTIONS",
    "proper_value",
    "product_upper",
    "product_graph",
    "FactorValue",
    "factor_value",
    "ProductCertificate",
    "certify_product_exact",
]

# enumeration budget for subset-based functions
_SUBSET_BUDGET = 5_000_000


@dataclass(frozen=True)
class ProperFunctionId:
    kind: str  # "log_vertices" | "diameter" | "subset_plotkin" | "triangle_plotkin"
    size: int | None = None

    def __post_init__(self):
        if self.kind not in ("log_vertices", "diameter", "subset_plotkin", "triangle_plotkin"):
            raise ValidationError(f"unknown proper function {self.kind!r}")
        if self.kind == "subset_plotkin":
            if self.size is None or self.size % 2 or not 2 <= self.size <= 6:
                raise SizeLimit("subset size must be even and at most 6")

    def __str__(self):
        return f"subset_plotkin({self.size})" if self.kind == "subset_plotkin" else self.kind


LOG_VERTICES = ProperFunctionId("log_vertices")
DIAMETER = ProperFunctionId("diameter")
TRIANGLE_PLOTKIN = ProperFunctionId("triangle_plotkin")


def subset_plotkin_fn(size: int) -> ProperFunctionId:
    return ProperFunctionId("subset_plotkin", size)


PROPER_FUNCTIONS = (LOG_VERTICES, DIAMETER, TRIANGLE_PLOTKIN, subset_plotkin_fn(4), subset_plotkin_fn(6))


def proper_value(f: ProperFunctionId, g: WeightedGraph) -> Fraction:
    """Value of ``f`` on the metric closure of ``g``.

    TrianglePlotkin on a 2-vertex graph uses the triple with a repeated
    vertex (value d); SubsetPlotkin of size s on fewer than s vertices is 0.
    """
    dm = g.distances
    n = dm.n
    if f.kind == "log_vertices":
        return Fraction(log2_ceil(n))
    if f.kind == "diameter":
        return Fraction(dm.diameter)
    if f.kind == "triangle_plotkin":
        if n < 3:
            return Fraction(dm.diameter)
        s, _ = max_subset_sum(dm, 3)
        return Fraction(s, 2)
    size = f.size
    if n < size:
        return Fraction(0)
    if comb(n, size) > _SUBSET_BUDGET:
        raise SizeLimit(f"too many {size}-subsets of {n} vertices to enumerate")
    s, _ = max_subset_sum(dm, size)
    return Fraction(s, size * size // 4)


def product_graph(gs) -> WeightedGraph:
    gs = list(gs)
    if not gs:
        raise ValidationError("need at least one factor")
    return reduce(cartesian_product, gs)


def product_upper(addrs) -> Addressing:
    """Iterated concatenation; product vertex order matches ``product_graph``."""
    addrs = list(addrs)
    if not addrs:
        raise ValidationError("need at least one addressing")
    return reduce(concat, addrs)


@dataclass(frozen=True)
class FactorValue:
    value: int
    witness: Addressing
    family: str
    beta: Fraction | None = None


def factor_value(g: WeightedGraph) -> FactorValue | None:
    """Exact c for a factor from a supported family, else by search when small."""
    g.require_connected()
    dm = g.distances
    if g.n == 1:
        return FactorValue(0, Addressing(np.zeros((1, 0), dtype=np.uint8)), "point", Fraction(0))
    pw = path_weights(g)
    if pw is not None:
        order, ws = pw
        along = path_addressing(ws)
        bits = along.bits.copy()
        bits[order] = along.bits
        return FactorValue(sum(ws), Addressing(bits), "path", Fraction(sum(ws)))
    cw = cycle_weights(g)
    if cw is not None:
        order, ws = cw
        total = sum(ws)
        if all(2 * w <= total for w in ws):
            around = cycle_addressing(ws)
            bits = around.bits.copy()
            bits[order] = around.bits
            return FactorValue(-(-total // 2), Addressing(bits), "cycle", Fraction(total, 2))
    n = g.n
    if g.is_complete() and g.is_unit() and n & (n - 1) == 0:
        return FactorValue(log2_ceil(n), complete_graph_addressing(n), "clique")
    if n == 4:
        a = k4_addressing(dm)
        return FactorValue(a.length, a, "four_vertex")
    if n <= 6:
        r = brute_force_c(dm)
        return FactorValue(r.value, r.witness, "search")
    return None


@dataclass(frozen=True)
class ProductCertificate:
    value: int
    function: ProperFunctionId
    lower_value: Fraction
    addressing: Addressing
    factors: tuple[FactorValue, ...]
    beta: Fraction | None

    def describe(self) -> str:
        parts = " + ".join(str(f.value) for f in self.factors)
        return f"c = {parts} = {self.value} (proven; lower bound = ceil({self.function}) = {self.value})"


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def certify_product_exact(gs) -> ProductCertificate | None:
    """Certificate that c is additive over these factors, or None if unknown."""
    gs = list(gs)
    factors = []
    for g in gs:
        fv = factor_value(g)
        if fv is None:
            return None
        factors.append(fv)
    upper = sum(f.value for f in factors)
    prod = product_graph(gs)
    addr = product_upper([f.witness for f in factors])
    if addr.length != upper or not verify(addr, prod.distances):
        raise AssertionError("concatenated addressing failed on the product")
    beta = None
    if all(f.family == "cycle" for f in factors):
        beta = sum((f.beta for f in factors), Fraction(0))
    for f in PROPER_FUNCTIONS:
        try:
            v = proper_value(f, prod)
        except SizeLimit:
            continue
        if _ceil(v) >= upper:
            return ProductCertificate(upper, f, v, addr, tuple(factors), beta)
    return None
