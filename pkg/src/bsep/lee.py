"""Upper bounds on Lee-metric codes through binary cycle embeddings.

A word over Z_q is mapped symbol by symbol to the rows of a binary
addressing of the cycle C_q with all edge weights lam.  That addressing
has length ceil(lam q / 2) and stretches Lee distances by at least lam, so

    A_q^L(n, d) <= A_2(n * ceil(lam q / 2), lam d)

and the right side is bounded with the Plotkin bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .addressing import Addressing, cycle_addressing, hamming_matrix
from .errors import NoApplicableBound, ValidationError

__all__ = [
    "LeeQuery",
    "LeeBound",
    "TableRow",
    "TABLE",
    "plotkin_a2_upper",
    "plotkin_case",
    "lee_upper",
    "reproduce_table",
    "format_table",
    "lee_distance",
    "min_lee_distance",
    "symbol_addressing",
    "substitute",
    "min_hamming_distance",
]


def plotkin_case(n: int, d: int) -> str | None:
    """Which branch of the Plotkin bound applies to A_2(n, d), if any."""
    if d % 2 == 0:
        if 2 * d > n:
            return "even"
        if 2 * d == n:
            return "even-equal"
    else:
        if 2 * d + 1 > n:
            return "odd"
        if 2 * d + 1 == n:
            return "odd-equal"
    return None


def plotkin_a2_upper(n: int, d: int) -> int | None:
    """Plotkin upper bound on A_2(n, d), or None when it does not apply."""
    if n < 1 or d < 1:
        raise ValidationError("need n >= 1 and d >= 1")
    case = plotkin_case(n, d)
    # the strict cases evaluate to 0 exactly when d > n; keep the
    # codeword-pair floor there (the true value is then 1)
    if case == "even":
        return max(2, 2 * (d // (2 * d - n)))
    if case == "even-equal":
        return 4 * d
    if case == "odd":
        return max(2, 2 * ((d + 1) // (2 * d + 1 - n)))
    if case == "odd-equal":
        return 4 * d + 4
    return None


@dataclass(frozen=True)
class LeeQuery:
    q: int
    n: int
    d: int
    lambda_max: int = 4

    def __post_init__(self):
        if self.q < 2:
            raise ValidationError("alphabet size q must be at least 2")
        if self.n < 1 or self.d < 1 or self.lambda_max < 1:
            raise ValidationError("n, d and lambda_max must be positive")


@dataclass(frozen=True)
class LeeBound:
    value: int
    witness_lambda: int
    binary_params: tuple[int, int]
    plotkin_case: str

    def describe(self) -> str:
        bn, bd = self.binary_params
        return f"A^L ≤ {self.value} via A_2({bn},{bd}), lambda={self.witness_lambda}"


def _binary_params(q: int, n: int, d: int, lam: int) -> tuple[int, int]:
    return n * (-(-lam * q // 2)), lam * d


def lee_upper(qr: LeeQuery) -> LeeBound:
    """Best Plotkin bound over lam = 1..lambda_max; ties go to the smallest lam."""
    best = None
    for lam in range(1, qr.lambda_max + 1):
        bn, bd = _binary_params(qr.q, qr.n, qr.d, lam)
        v = plotkin_a2_upper(bn, bd)
        if v is None:
            continue
        v = max(v, 1)
        if best is None or v < best.value:
            best = LeeBound(v, lam, (bn, bd), plotkin_case(bn, bd))
    if best is None:
        raise NoApplicableBound(
            f"no lambda in 1..{qr.lambda_max} gives binary parameters inside the Plotkin range"
        )
    return best


# (q, n, d, stated weight, previous bound, improved bound)
TABLE = (
    (5, 10, 17, 2, 3, 2),
    (6, 8, 14, 1, 7, 6),
    (6, 9, 20, 1, 3, 2),
    (17, 3, 18, 1, 3, 2),
    (17, 3, 19, 1, 3, 2),
    (17, 4, 19, 2, 11, 8),
    (17, 4, 20, 2, 8, 6),
    (17, 4, 21, 2, 6, 4),
    (17, 4, 23, 2, 3, 2),
    (17, 4, 24, 2, 3, 2),
    (17, 5, 23, 2, 15, 12),
    (17, 5, 24, 2, 11, 8),
    (17, 5, 25, 2, 8, 6),
    (17, 5, 26, 2, 6, 4),
    (17, 5, 27, 2, 5, 4),
    (17, 5, 29, 2, 3, 2),
    (17, 5, 30, 2, 3, 2),
    (17, 5, 31, 2, 3, 2),
    (17, 6, 27, 2, 20, 18),
    (17, 6, 28, 2, 14, 10),
    (17, 6, 29, 2, 10, 8),
    (17, 6, 30, 2, 7, 6),
    (17, 6, 31, 2, 6, 4),
)


@dataclass(frozen=True)
class TableRow:
    q: int
    n: int
    d: int
    stated_weight: int
    previous: int
    expected: int
    bound: LeeBound
    at_stated_weight: int | None
    flag: str

    @property
    def matches(self) -> bool:
        return self.bound.value == self.expected


def _flag(q, n, d, weight, expected) -> tuple[int | None, str]:
    bn, bd = _binary_params(q, n, d, weight)
    at_weight = plotkin_a2_upper(bn, bd)
    notes = []
    if at_weight != expected:
        shown = "no Plotkin bound" if at_weight is None else f"gives {at_weight}"
        notes.append(f"stated weight {weight} {shown} for A_2({bn},{bd})")
    elif plotkin_case(bn, bd) in ("odd", "odd-equal"):
        notes.append(f"stated weight {weight} needs the odd-d Plotkin case for A_2({bn},{bd})")
    return at_weight, "; ".join(notes)


def reproduce_table(lambda_max: int = 4) -> list[TableRow]:
    rows = []
    for q, n, d, weight, prev, expected in TABLE:
        bound = lee_upper(LeeQuery(q, n, d, lambda_max))
        at_weight, flag = _flag(q, n, d, weight, expected)
        rows.append(TableRow(q, n, d, weight, prev, expected, bound, at_weight, flag))
    return rows


def format_table(rows: list[TableRow], fmt: str = "table") -> str:
    if fmt == "kv":
        out = []
        for r in rows:
            key = f"q{r.q}.n{r.n}.d{r.d}"
            out += [
                f"{key}.bound={r.bound.value}",
                f"{key}.lambda={r.bound.witness_lambda}",
                f"{key}.binary={r.bound.binary_params[0]},{r.bound.binary_params[1]}",
                f"{key}.expected={r.expected}",
                f"{key}.match={'yes' if r.matches else 'no'}",
            ]
            if r.flag:
                out.append(f"{key}.flag={r.flag}")
        return "\n".join(out) + "\n"
    head = ("q", "n", "d", "weight", "previous", "expected", "bound", "lambda", "A_2 params", "match", "flag")
    body = [
        (
            str(r.q), str(r.n), str(r.d), str(r.stated_weight), str(r.previous), str(r.expected),
            str(r.bound.value), str(r.bound.witness_lambda),
            f"({r.bound.binary_params[0]},{r.bound.binary_params[1]})",
            "yes" if r.matches else "NO", r.flag,
        )
        for r in rows
    ]
    widths = [max(len(h), *(len(b[i]) for b in body)) for i, h in enumerate(head)]
    line = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    return "\n".join([line(head), line(["-" * w for w in widths])] + [line(b) for b in body]) + "\n"


# -- the reduction itself ----------------------------------------------------

def lee_distance(x, y, q: int) -> int:
    diff = np.abs(np.asarray(x, dtype=np.int64) - np.asarray(y, dtype=np.int64)) % q
    return int(np.minimum(diff, q - diff).sum())


def min_lee_distance(code, q: int) -> int | None:
    code = [tuple(c) for c in code]
    if len(code) < 2:
        return None
    return min(lee_distance(a, b, q) for a, b in combinations(code, 2))


def symbol_addressing(q: int, lam: int = 1) -> Addressing:
    """Rows for the symbols 0..q-1: an addressing of C_q with edge weight lam."""
    if q == 2:
        # Z_2 with the Lee metric is one edge of weight 1
        return Addressing(np.array([[0] * lam, [1] * lam], dtype=np.uint8))
    return cycle_addressing([lam] * q)


def substitute(code, q: int, lam: int = 1) -> Addressing:
    """Binary image of a Lee code: each symbol replaced by its cycle address."""
    rows = symbol_addressing(q, lam).bits
    words = np.asarray([tuple(c) for c in code], dtype=np.int64)
    if words.ndim != 2:
        raise ValidationError("code must be a list of equal-length words")
    return Addressing(np.hstack([rows[words[:, k]] for k in range(words.shape[1])]))


def min_hamming_distance(a: Addressing) -> int | None:
    if a.n < 2:
        return None
    h = hamming_matrix(a)
    return int(h[np.triu_indices(a.n, 1)].min())
