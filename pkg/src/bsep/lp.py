"""The cut LP for binary addressings, solved in exact rational arithmetic.

Primal (LP_lam): one variable S_A per canonical cut A (nonempty, vertex 0
not in A), minimize sum S_A subject to

    sum_{A separates i,j} S_A >= lam * d(i, j)      for every pair i < j.

Dual: one z_ij >= 0 per pair, every cut carries total at most 1,
maximize sum d(i,j) z_ij.

The solver is a two-phase simplex on an integer tableau with a common
denominator (fraction-free pivoting), so no rational is ever rounded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Union

import numpy as np

from .errors import SizeLimit, ValidationError
from .graph import DistanceMatrix, log2_ceil

__all__ = [
    "Rational",
    "Constraint",
    "LinearProgramSpec",
    "LpSolution",
    "PRIMAL_CAP",
    "cut_masks",
    "cut_members",
    "separates",
    "build_primal",
    "build_dual",
    "solve_exact",
    "beta",
    "candidate_mu",
    "integrality_gap",
    "plotkin_dual_point",
    "dual_point_value",
    "to_lp_format",
    "check_solution",
]

Rational = Fraction
Number = Union[int, Fraction]

PRIMAL_CAP = 14

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Number, ...]
    relation: str  # ">=" or "<=" (also "=")
    rhs: Number
    name: str = ""

    def __post_init__(self):
        if self.relation not in (">=", "<=", "="):
            raise ValidationError(f"unknown relation {self.relation!r}")


@dataclass(frozen=True)
class LinearProgramSpec:
    """A linear program over nonnegative variables."""

    variables: tuple[str, ...]
    objective: tuple[Number, ...]
    constraints: tuple[Constraint, ...]
    sense: str = "min"
    name: str = "lp"

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ValidationError(f"unknown sense {self.sense!r}")
        k = len(self.variables)
        if len(self.objective) != k:
            raise ValidationError("objective length differs from variable count")
        for c in self.constraints:
            if len(c.coeffs) != k:
                raise ValidationError(f"constraint {c.name or '?'} has wrong arity")

    def with_constraints(self, extra) -> LinearProgramSpec:
        return LinearProgramSpec(
            self.variables, self.objective, self.constraints + tuple(extra), self.sense, self.name
        )


@dataclass(frozen=True)
class LpSolution:
    status: str
    value: Fraction | None = None
    assignment: dict[str, Fraction] = field(default_factory=dict)
    basis: tuple[str, ...] = ()
    duals: tuple[Fraction, ...] = ()
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


# -- cut bookkeeping ---------------------------------------------------------

def cut_masks(n: int) -> range:
    """Canonical cuts as bit masks over vertices 1..n-1 (bit i-1 = vertex i)."""
    return range(1, 1 << (n - 1)) if n >= 2 else range(0)


def cut_members(mask: int) -> tuple[int, ...]:
    out, v = [], 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def _side(mask: int, v: int) -> int:
    return 0 if v == 0 else (mask >> (v - 1)) & 1


def separates(mask: int, i: int, j: int) -> bool:
    return _side(mask, i) != _side(mask, j)


def _cut_name(mask: int) -> str:
    return "S_" + "_".join(str(v) for v in cut_members(mask))


def _separation_matrix(n: int) -> np.ndarray:
    """Row per pair i<j, column per canonical cut; 1 where the cut separates."""
    masks = np.arange(1, 1 << (n - 1), dtype=np.int64)
    side = np.zeros((n, len(masks)), dtype=np.int64)
    for v in range(1, n):
        side[v] = (masks >> (v - 1)) & 1
    rows = [side[i] ^ side[j] for i, j in combinations(range(n), 2)]
    return np.array(rows, dtype=np.int64).reshape(len(rows), len(masks))


def _check_cap(n: int, primal_cap: int):
    if n > primal_cap:
        raise SizeLimit(
            f"{n} vertices exceeds the LP size cap of {primal_cap} "
            f"({(1 << (n - 1)) - 1} cut variables)"
        )


def build_primal(dm: DistanceMatrix, lam: int = 1, primal_cap: int = PRIMAL_CAP) -> LinearProgramSpec:
    n = dm.n
    _check_cap(n, primal_cap)
    if lam < 1:
        raise ValidationError("lambda must be a positive integer")
    names = tuple(_cut_name(m) for m in cut_masks(n))
    sep = _separation_matrix(n) if n >= 2 else np.zeros((0, 0), dtype=np.int64)
    cons = []
    for row, (i, j, d) in zip(sep.tolist(), dm.pairs()):
        cons.append(Constraint(tuple(row), ">=", lam * d, f"p_{i}_{j}"))
    return LinearProgramSpec(names, (1,) * len(names), tuple(cons), "min", f"primal_lambda{lam}")


def build_dual(dm: DistanceMatrix, primal_cap: int = PRIMAL_CAP) -> LinearProgramSpec:
    n = dm.n
    _check_cap(n, primal_cap)
    pairs = list(dm.pairs())
    names = tuple(f"z_{i}_{j}" for i, j, _ in pairs)
    sep = _separation_matrix(n) if n >= 2 else np.zeros((0, 0), dtype=np.int64)
    cons = tuple(
        Constraint(tuple(col), "<=", 1, "c" + _cut_name(m)[1:])
        for col, m in zip(sep.T.tolist(), cut_masks(n))
    )
    return LinearProgramSpec(names, tuple(d for _, _, d in pairs), cons, "max", "dual")


# -- simplex ---------------------------------------------------------------

class _Tableau:
    """Integer tableau T with common positive denominator D: true entries are T / D.

    Columns: structural | slack/surplus | artificial | rhs.
    """

    def __init__(self, T, basis, D=1):
        self.T = T
        self.basis = basis
        self.D = D
        self.pivots = 0

    def pivot(self, r: int, c: int):
        T = self.T
        p = T[r, c]
        prow = T[r].copy()
        colv = T[:, c].copy()
        colv[r] = 0
        # Bareiss step: every quotient below is exact
        T *= p
        T -= np.outer(colv, prow)
        T //= self.D
        T[r] = prow
        if p < 0:
            T *= -1
            p = -p
        self.D = p
        self.basis[r] = c
        self.pivots += 1


def _row_scale(coeffs, rhs):
    den = lcm(*(Fraction(x).denominator for x in coeffs), Fraction(rhs).denominator)
    return den


def _reduced_costs(tab: _Tableau, cost, ncols):
    # z_j = c_j D - sum_i c_{B_i} T[i, j], stored as an integer row
    T = tab.T
    z = np.array([cost[j] * tab.D for j in range(ncols)] + [0], dtype=object)
    for i, b in enumerate(tab.basis):
        cb = cost[b]
        if cb:
            z -= cb * T[i]
    return z


def _simplex(tab: _Tableau, cost, allowed, rule: str, max_pivots: int):
    """Minimize cost over the tableau.  Returns 'optimal' or 'unbounded'."""
    T = tab.T
    m = T.shape[0]
    ncols = T.shape[1] - 1
    z = _reduced_costs(tab, cost, ncols)
    bland = rule == "bland"
    stalled_at = None
    for _ in range(max_pivots):
        cand = [j for j in allowed if z[j] < 0]
        if not cand:
            return OPTIMAL, z
        if bland or stalled_at is not None:
            col = cand[0]
        else:
            col = min(cand, key=lambda j: (z[j], j))
        best = None
        for i in range(m):
            a = T[i, col]
            if a > 0:
                rhs = T[i, -1]
                if best is None:
                    best = i
                    continue
                lhs_cmp = rhs * T[best, col]
                rhs_cmp = T[best, -1] * a
                if lhs_cmp < rhs_cmp or (lhs_cmp == rhs_cmp and tab.basis[i] < tab.basis[best]):
                    best = i
        if best is None:
            return UNBOUNDED, z
        degenerate = T[best, -1] == 0
        old_obj = Fraction(int(-z[-1]), int(tab.D))
        # update z with the same fraction-free step as the rows
        p = T[best, col]
        zc = z[col]
        z = (z * p - zc * T[best]) // tab.D
        if p < 0:
            z = -z
        tab.pivot(best, col)
        new_obj = Fraction(int(-z[-1]), int(tab.D))
        if rule == "hybrid":
            # Dantzig while the objective moves, Bland's rule through degenerate runs
            if degenerate and new_obj == old_obj:
                stalled_at = stalled_at if stalled_at is not None else old_obj
            elif stalled_at is not None and new_obj != stalled_at:
                stalled_at = None
    raise RuntimeError("pivot limit reached")


def _normalize(lp: LinearProgramSpec):
    """Integer rows, objective in min form scaled by K, and per-row scales."""
    sign = 1 if lp.sense == "min" else -1
    cost_frac = [sign * Fraction(c) for c in lp.objective]
    K = lcm(1, *(c.denominator for c in cost_frac))
    cost_int = [int(c * K) for c in cost_frac]
    rows, scales, kinds = [], [], []
    for con in lp.constraints:
        s = _row_scale(con.coeffs, con.rhs)
        rows.append(([int(Fraction(a) * s) for a in con.coeffs], int(Fraction(con.rhs) * s)))
        scales.append(s)
        kinds.append(con.relation)
    return sign, K, cost_int, rows, scales, kinds


def _finish(lp, tab, z, nv, unit_col, scales, K, sign, check):
    D = int(tab.D)
    x = [Fraction(0)] * nv
    for i, b in enumerate(tab.basis):
        if b < nv:
            x[b] = Fraction(int(tab.T[i, -1]), D)
    value = sum((Fraction(c) * xi for c, xi in zip(lp.objective, x)), Fraction(0))
    # the reduced cost of column e_i is -y_i for the scaled row
    duals = tuple(
        Fraction(-int(z[unit_col[i]]), D) * scales[i] / K * sign for i in range(len(scales))
    )
    sol = LpSolution(
        OPTIMAL,
        value,
        dict(zip(lp.variables, x)),
        tuple(lp.variables[b] for b in tab.basis if b < nv),
        duals,
        tab.pivots,
    )
    if check:
        check_solution(lp, sol)
    return sol


def _dual_simplex(tab: _Tableau, cost, rule: str, max_pivots: int):
    """Dual simplex from a dual-feasible basis.  Returns 'optimal' or 'infeasible'."""
    T = tab.T
    m = T.shape[0]
    ncols = T.shape[1] - 1
    z = _reduced_costs(tab, cost, ncols)
    careful = rule == "bland"
    for _ in range(max_pivots):
        rhs = T[:, -1]
        bad = [i for i in range(m) if rhs[i] < 0]
        if not bad:
            return OPTIMAL, z
        if careful:
            r = min(bad, key=lambda i: tab.basis[i])
        else:
            r = min(bad, key=lambda i: (rhs[i], tab.basis[i]))
        row = T[r]
        col = None
        for j in range(ncols):
            a = row[j]
            if a < 0:
                # minimize z_j / -a
                if col is None or z[j] * -row[col] < z[col] * -a:
                    col = j
        if col is None:
            return INFEASIBLE, z
        p = row[col]
        stalled = z[col] == 0
        zc = z[col]
        z = (z * p - zc * row) // tab.D
        if p < 0:
            z = -z
        tab.pivot(r, col)
        T = tab.T
        if rule == "hybrid":
            # Bland's rule through dual-degenerate stretches
            careful = stalled
    raise RuntimeError("pivot limit reached")


def solve_exact(
    lp: LinearProgramSpec,
    rule: str = "bland",
    method: str = "primal",
    max_pivots: int = 10**6,
    check: bool = True,
) -> LpSolution:
    """Solve ``lp`` exactly.

    ``method="primal"`` runs a two-phase primal simplex.  ``method="dual"``
    runs a dual simplex from the all-slack basis, which needs a
    nonnegative objective in min form and no equality rows.

    ``rule`` is ``"bland"`` (smallest index everywhere) or ``"hybrid"``
    (steepest choice, falling back to Bland's rule whenever a pivot does
    not move the objective).  The answer is re-verified by substitution
    and by its dual certificate when ``check`` is set.
    """
    if rule not in ("bland", "hybrid"):
        raise ValidationError(f"unknown pivot rule {rule!r}")
    if method not in ("primal", "dual"):
        raise ValidationError(f"unknown method {method!r}")
    nv = len(lp.variables)
    sign, K, cost_int, rows, scales, kinds = _normalize(lp)
    if method == "dual":
        if any(c < 0 for c in cost_int) or "=" in kinds:
            raise ValidationError("dual simplex needs a nonnegative min objective and no equality rows")
        return _solve_dual_simplex(lp, rule, max_pivots, check, nv, sign, K, cost_int, rows, scales, kinds)
    return _solve_two_phase(lp, rule, max_pivots, check, nv, sign, K, cost_int, rows, scales, kinds)


def _solve_dual_simplex(lp, rule, max_pivots, check, nv, sign, K, cost_int, rows, scales, kinds):
    m = len(rows)
    T = np.zeros((m, nv + m + 1), dtype=object)
    unit_col = list(range(nv, nv + m))
    for i, ((coeffs, rhs), rel) in enumerate(zip(rows, kinds)):
        if rel == ">=":
            coeffs, rhs = [-a for a in coeffs], -rhs
            scales[i] = -scales[i]
        T[i, :nv] = coeffs
        T[i, nv + i] = 1
        T[i, -1] = rhs
    tab = _Tableau(T, list(unit_col))
    status, z = _dual_simplex(tab, cost_int + [0] * m, rule, max_pivots)
    if status == INFEASIBLE:
        return LpSolution(INFEASIBLE, pivots=tab.pivots)
    return _finish(lp, tab, z, nv, unit_col, scales, K, sign, check)


def _solve_two_phase(lp, rule, max_pivots, check, nv, sign, K, cost_int, rows, scales, kinds):
    norm = []
    for i, ((coeffs, rhs), rel) in enumerate(zip(rows, kinds)):
        if rhs < 0:
            coeffs, rhs = [-a for a in coeffs], -rhs
            scales[i] = -scales[i]
            rel = {">=": "<=", "<=": ">=", "=": "="}[rel]
        norm.append((coeffs, rhs, rel))

    m = len(norm)
    n_slack = sum(1 for *_, rel in norm if rel != "=")
    n_art = sum(1 for *_, rel in norm if rel != "<=")
    ncols = nv + n_slack + n_art
    T = np.zeros((m, ncols + 1), dtype=object)
    basis = [0] * m
    unit_col = [0] * m
    si, ai = nv, nv + n_slack
    for i, (coeffs, rhs, rel) in enumerate(norm):
        T[i, :nv] = coeffs
        T[i, -1] = rhs
        if rel == "<=":
            T[i, si] = 1
            basis[i] = unit_col[i] = si
            si += 1
        else:
            if rel == ">=":
                T[i, si] = -1
                si += 1
            T[i, ai] = 1
            basis[i] = unit_col[i] = ai
            ai += 1
    art = set(range(nv + n_slack, ncols))
    tab = _Tableau(T, basis)

    if art:
        phase1 = [1 if j in art else 0 for j in range(ncols)]
        _, z = _simplex(tab, phase1, list(range(ncols)), rule, max_pivots)
        if z[-1] != 0:
            return LpSolution(INFEASIBLE, pivots=tab.pivots)
        # drive artificials still basic at zero out of the basis
        for r in range(m):
            if tab.basis[r] in art:
                for j in range(nv + n_slack):
                    if tab.T[r, j] != 0:
                        tab.pivot(r, j)
                        break

    allowed = [j for j in range(ncols) if j not in art]
    status, z = _simplex(tab, cost_int + [0] * (ncols - nv), allowed, rule, max_pivots)
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED, pivots=tab.pivots)
    return _finish(lp, tab, z, nv, unit_col, scales, K, sign, check)


def check_solution(lp: LinearProgramSpec, sol: LpSolution) -> None:
    """Verify primal feasibility, dual feasibility and equal objectives, exactly."""
    x = [sol.assignment[v] for v in lp.variables]
    if any(xi < 0 for xi in x):
        raise AssertionError("negative variable in LP solution")
    for con in lp.constraints:
        lhs = sum((Fraction(a) * xi for a, xi in zip(con.coeffs, x) if a), Fraction(0))
        ok = {">=": lhs >= con.rhs, "<=": lhs <= con.rhs, "=": lhs == con.rhs}[con.relation]
        if not ok:
            raise AssertionError(f"constraint {con.name} violated: {lhs} vs {con.rhs}")
    value = sum((Fraction(c) * xi for c, xi in zip(lp.objective, x)), Fraction(0))
    if value != sol.value:
        raise AssertionError("objective does not reproduce the reported value")
    # dual side, in minimization form: y >= 0 on >= rows, <= 0 on <= rows
    sign = 1 if lp.sense == "min" else -1
    y = [sign * yi for yi in sol.duals]
    for yi, con in zip(y, lp.constraints):
        if (con.relation == ">=" and yi < 0) or (con.relation == "<=" and yi > 0):
            raise AssertionError(f"dual sign wrong on {con.name}")
    for j in range(len(lp.variables)):
        red = sign * Fraction(lp.objective[j]) - sum(
            (yi * con.coeffs[j] for yi, con in zip(y, lp.constraints) if con.coeffs[j]), Fraction(0)
        )
        if red < 0:
            raise AssertionError(f"dual infeasible at {lp.variables[j]}")
    dual_obj = sum((yi * Fraction(con.rhs) for yi, con in zip(y, lp.constraints)), Fraction(0))
    if dual_obj != sign * sol.value:
        raise AssertionError("primal and dual objectives differ")


# -- derived quantities ------------------------------------------------------

def beta(dm: DistanceMatrix, primal_cap: int = PRIMAL_CAP) -> Fraction:
    """Optimum of LP_1, the fractional addressing number."""
    if dm.n == 1:
        return Fraction(0)
    return solve_exact(build_primal(dm, 1, primal_cap)).value


def candidate_mu(sol: LpSolution) -> int:
    """LCM of the denominators of the optimal vertex in ``sol``."""
    return lcm(1, *(Fraction(v).denominator for v in sol.assignment.values()))


def integrality_gap(dm: DistanceMatrix, exact_c: int, primal_cap: int = PRIMAL_CAP) -> Fraction:
    b = beta(dm, primal_cap)
    if b <= 0:
        raise ValidationError("integrality gap needs beta > 0")
    gap = Fraction(exact_c) / b
    if not (1 <= gap <= max(1, log2_ceil(dm.n))):
        raise AssertionError(f"integrality gap {gap} outside [1, ceil(log2 n)]")
    return gap


def plotkin_dual_point(dm: DistanceMatrix) -> dict[tuple[int, int], Fraction]:
    """Uniform dual point z_ij = 1 / floor(n^2 / 4)."""
    n = dm.n
    if n < 2:
        return {}
    z = Fraction(1, n * n // 4)
    return {(i, j): z for i, j in combinations(range(n), 2)}


def dual_point_value(dm: DistanceMatrix, z: dict[tuple[int, int], Number]) -> Fraction:
    """Objective of a dual point after checking every cut constraint exactly."""
    n = dm.n
    if any(v < 0 for v in z.values()):
        raise ValidationError("dual point has a negative coordinate")
    for mask in cut_masks(n):
        load = sum((Fraction(v) for (i, j), v in z.items() if separates(mask, i, j)), Fraction(0))
        if load > 1:
            raise ValidationError(f"dual point overloads cut {cut_members(mask)}")
    return sum((Fraction(v) * dm[i, j] for (i, j), v in z.items()), Fraction(0))


# -- export ------------------------------------------------------------------

def _term(coef: int, name: str, first: bool) -> str:
    mag = abs(coef)
    body = name if mag == 1 else f"{mag} {name}"
    if first:
        return ("- " if coef < 0 else "") + body
    return ("- " if coef < 0 else "+ ") + body


def _linear(coeffs, names) -> str:
    terms = []
    for a, v in zip(coeffs, names):
        if a:
            terms.append(_term(a, v, not terms))
    return " ".join(terms) if terms else "0 " + names[0] if names else "0"


def to_lp_format(lp: LinearProgramSpec) -> str:
    """CPLEX LP text.  Rows with fractional data are scaled to integers."""
    out = [f"\\ {lp.name}", "Minimize" if lp.sense == "min" else "Maximize"]
    k = lcm(1, *(Fraction(c).denominator for c in lp.objective))
    obj = [int(Fraction(c) * k) for c in lp.objective]
    prefix = "" if k == 1 else f"\\ objective scaled by {k}\n"
    out.append(prefix + " obj: " + _linear(obj, lp.variables))
    out.append("Subject To")
    for idx, con in enumerate(lp.constraints):
        s = _row_scale(con.coeffs, con.rhs)
        coeffs = [int(Fraction(a) * s) for a in con.coeffs]
        rhs = Fraction(con.rhs) * s
        rel = "=" if con.relation == "=" else con.relation
        out.append(f" {con.name or f'r{idx}'}: {_linear(coeffs, lp.variables)} {rel} {int(rhs)}")
    out.append("Bounds")
    out += [f" {v} >= 0" for v in lp.variables]
    out.append("End")
    return "\n".join(out) + "\n"
