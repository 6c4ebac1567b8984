"""Certified exact values of c_lam(G, w).

Two independent routes:

* ``brute_force_c`` walks lengths upward from the best closed-form lower
  bound and decides each length with a complete search (compiled kernel).
* ``branch_and_bound_c`` works on the integer cut program, bounding with
  the exact LP relaxation.

A result is only called proven when the search space was exhausted; a
budget hit raises ``BudgetExceeded`` with the bracket known so far.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, ceil

import numpy as np

from . import _kernels
from .addressing import (
    Addressing,
    hadamard_addressing,
    hamilton_cycle_addressing,
    hamilton_path_addressing,
    verify,
)
from .bounds import lower_bounds
from .errors import BudgetExceeded, SizeLimit, ValidationError
from .graph import DistanceMatrix
from .lp import (
    INFEASIBLE,
    PRIMAL_CAP,
    Constraint,
    build_primal,
    cut_masks,
    separates,
    solve_exact,
)

__all__ = [
    "SearchConfig",
    "ExactResult",
    "DEFAULT_NODE_LIMIT",
    "feasible_at_length",
    "brute_force_c",
    "branch_and_bound_c",
    "c_lambda",
    "subadditivity_check",
    "addressing_from_counts",
    "constructive_addressings",
]

DEFAULT_NODE_LIMIT = 10**7
HELD_KARP_CAP = 16


@dataclass(frozen=True)
class SearchConfig:
    """Search settings.

    ``symmetry`` turns on both reductions used by the kernel: row 0 is
    fixed to all zeros and columns are kept in canonical order.  With
    ``symmetry=False`` a plain row-by-row enumeration is used instead;
    it is exponentially slower and exists as an independent check.
    """

    max_length: int | None = None
    symmetry: bool = True
    node_limit: int = DEFAULT_NODE_LIMIT


@dataclass(frozen=True)
class ExactResult:
    value: int
    witness: Addressing
    lower_rule: str
    lam: int = 1
    nodes: int = 0

    def certificate(self) -> str:
        return f"length {self.value} proven optimal (lower bound rule = {self.lower_rule})"


def _check_lambda(lam: int):
    if int(lam) != lam or lam < 1:
        raise ValidationError("lambda must be a positive integer")


def _farthest_first(d: np.ndarray) -> list[int]:
    """Vertex order: a diametral endpoint first, then the most constrained vertex."""
    n = len(d)
    if n <= 1:
        return list(range(n))
    i, j = np.unravel_index(int(np.argmax(d)), d.shape)
    order = [int(min(i, j))]
    rest = set(range(n)) - set(order)
    while rest:
        v = max(sorted(rest), key=lambda x: int(d[x, order].sum()))
        order.append(v)
        rest.remove(v)
    return order


def _plain_search(d: np.ndarray, length: int, node_limit: int):
    """Row-by-row enumeration with no symmetry reduction."""
    n = len(d)
    rows = [None] * n
    nodes = 0
    codes = range(1 << length)

    def place(k):
        nonlocal nodes
        if k == n:
            return _kernels.FOUND
        for code in codes:
            nodes += 1
            if nodes > node_limit:
                return _kernels.BUDGET
            if all(bin(code ^ rows[u]).count("1") >= d[u, k] for u in range(k)):
                rows[k] = code
                r = place(k + 1)
                if r != _kernels.INFEASIBLE:
                    return r
        return _kernels.INFEASIBLE

    status = place(0)
    if status != _kernels.FOUND:
        return status, None
    return status, [[(c >> (length - 1 - b)) & 1 for b in range(length)] for c in rows]


def feasible_at_length(dm: DistanceMatrix, lam: int, length: int, cfg: SearchConfig = SearchConfig()):
    """An addressing of exactly ``length`` bits for lam * d, or None if none exists."""
    _check_lambda(lam)
    if length < 0:
        raise ValidationError("length must be nonnegative")
    d = dm.d * int(lam)
    n = dm.n
    if cfg.symmetry:
        order = _farthest_first(d)
        sub = d[np.ix_(order, order)]
        status, bits = _kernels.search_rows(sub, length, cfg.node_limit)
    else:
        order = list(range(n))
        status, bits = _plain_search(d, length, cfg.node_limit)
    if status == _kernels.BUDGET:
        raise BudgetExceeded(f"search at length {length} hit the node limit {cfg.node_limit}")
    if status == _kernels.INFEASIBLE:
        return None
    out = np.zeros((n, length), dtype=np.uint8)
    for pos, v in enumerate(order):
        out[v] = bits[pos]
    a = Addressing(out)
    assert verify(a, dm, lam)
    return a


def brute_force_c(dm: DistanceMatrix, lam: int = 1, cfg: SearchConfig = SearchConfig()) -> ExactResult:
    """Smallest feasible length, scanning upward from the best closed-form lower bound."""
    _check_lambda(lam)
    rep = lower_bounds(dm, lam)
    start, rule = rep.best_lower, rep.best_lower_rule
    length = start
    lower = start
    while True:
        if cfg.max_length is not None and length > cfg.max_length:
            raise BudgetExceeded(
                f"no addressing up to length {cfg.max_length}", lower=lower, upper=None
            )
        try:
            a = feasible_at_length(dm, lam, length, cfg)
        except BudgetExceeded as exc:
            raise BudgetExceeded(str(exc), lower=lower) from None
        if a is not None:
            return ExactResult(length, a, rule if length == start else "exhaustive search", lam)
        lower = length + 1
        length += 1


# -- branch and bound --------------------------------------------------------

def addressing_from_counts(n: int, counts: dict[int, int]) -> Addressing:
    """Columns: ``counts[mask]`` copies of the indicator of cut ``mask``."""
    cols = []
    for mask in sorted(counts):
        k = counts[mask]
        if k:
            col = [1 if separates(mask, 0, v) else 0 for v in range(n)]
            cols += [col] * k
    if not cols:
        return Addressing(np.zeros((n, 0), dtype=np.uint8))
    return Addressing(np.array(cols, dtype=np.uint8).T)


def constructive_addressings(dm: DistanceMatrix, lam: int = 1) -> list[tuple[str, Addressing]]:
    """Verified (name, addressing) pairs from the Hadamard and Hamilton schemes."""
    scaled = dm.scaled(lam)
    out = [("hadamard", hadamard_addressing(dm, lam))]
    n = dm.n
    if 2 <= n <= HELD_KARP_CAP:
        _, path = _kernels.held_karp_path(scaled.d)
        out.append(("hamilton_path", hamilton_path_addressing(scaled, path)))
        if n >= 3:
            _, cyc = _kernels.held_karp_cycle(scaled.d)
            out.append(("hamilton_cycle", hamilton_cycle_addressing(scaled, cyc)))
    return [(name, a) for name, a in out if verify(a, dm, lam)]


def _ceil_frac(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def branch_and_bound_c(
    dm: DistanceMatrix,
    lam: int = 1,
    node_limit: int = 10_000,
    primal_cap: int = PRIMAL_CAP,
    incumbent: Addressing | None = None,
) -> ExactResult:
    """Optimum of the integer cut program by LP-based branch and bound.

    ``incumbent`` may supply any valid addressing (for example a product
    concatenation); it is checked before use.  ``node_limit`` counts LP
    solves.
    """
    _check_lambda(lam)
    n = dm.n
    if n > primal_cap:
        raise SizeLimit(f"{n} vertices exceeds the LP size cap of {primal_cap}")
    if n == 1:
        return ExactResult(0, Addressing(np.zeros((1, 0), dtype=np.uint8)), "trivial", lam)

    candidates = constructive_addressings(dm, lam)
    if incumbent is not None:
        if not verify(incumbent, dm, lam):
            raise ValidationError("supplied incumbent does not satisfy the distance constraints")
        candidates.append(("supplied", incumbent))
    best = min((a for _, a in candidates), key=lambda a: a.length)

    closed = lower_bounds(dm, lam)
    lower, lower_rule = closed.best_lower, closed.best_lower_rule
    if lower >= best.length:
        return ExactResult(best.length, best, lower_rule, lam)

    base = build_primal(dm, lam, primal_cap)
    masks = list(cut_masks(n))
    stack: list[dict[int, tuple[int, int | None]]] = [{}]
    nodes = 0
    root_bound = None
    while stack:
        fixed = stack.pop()
        nodes += 1
        if nodes > node_limit:
            raise BudgetExceeded(
                f"branch and bound hit its limit of {node_limit} LP solves",
                lower=max(lower, root_bound or 0),
                upper=best.length,
            )
        extra = []
        for j, (lo, hi) in sorted(fixed.items()):
            unit = tuple(1 if k == j else 0 for k in range(len(masks)))
            if lo:
                extra.append(Constraint(unit, ">=", lo, f"lo_{j}"))
            if hi is not None:
                extra.append(Constraint(unit, "<=", hi, f"hi_{j}"))
        sol = solve_exact(base.with_constraints(extra) if extra else base)
        if sol.status == INFEASIBLE:
            continue
        bound = _ceil_frac(sol.value)
        if root_bound is None:
            root_bound = bound
            if bound > lower:
                lower, lower_rule = bound, "lp relaxation"
        if bound >= best.length:
            continue
        x = [sol.assignment[v] for v in base.variables]
        # rounding every coordinate up stays feasible
        rounded = {masks[j]: _ceil_frac(v) for j, v in enumerate(x) if v}
        if sum(rounded.values()) < best.length:
            best = addressing_from_counts(n, rounded)
            if best.length <= lower:
                break
        frac = [j for j, v in enumerate(x) if v.denominator != 1]
        if not frac:
            continue
        j = max(frac, key=lambda k: (min(x[k] - floor(x[k]), ceil(x[k]) - x[k]), -k))
        lo, hi = fixed.get(j, (0, None))
        down = dict(fixed)
        down[j] = (lo, floor(x[j]))
        up = dict(fixed)
        up[j] = (ceil(x[j]), hi)
        stack.append(down)
        stack.append(up)
    assert verify(best, dm, lam)
    rule = lower_rule if best.length == lower else "branch and bound"
    return ExactResult(best.length, best, rule, lam, nodes)


def c_lambda(dm: DistanceMatrix, lam: int = 1, cfg: SearchConfig = SearchConfig()) -> ExactResult:
    """Exact c_lam by the search oracle."""
    return brute_force_c(dm, lam, cfg)


def subadditivity_check(dm: DistanceMatrix, l1: int, l2: int, cfg: SearchConfig = SearchConfig()) -> bool:
    """c_{l1+l2} <= c_{l1} + c_{l2}; the concatenated witnesses are verified too."""
    _check_lambda(l1)
    _check_lambda(l2)
    r1 = brute_force_c(dm, l1, cfg)
    r2 = brute_force_c(dm, l2, cfg)
    r12 = brute_force_c(dm, l1 + l2, cfg)
    joined = Addressing(np.hstack([r1.witness.bits, r2.witness.bits]))
    if not verify(joined, dm, l1 + l2):
        raise AssertionError("concatenated witnesses fail at the summed scale")
    return r12.value <= r1.value + r2.value
