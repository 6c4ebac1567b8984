"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import random
import time
from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest

from bsep.addressing import (
    Addressing,
    complete_graph_addressing,
    concat,
    cycle_addressing,
    hadamard_addressing,
    hamilton_cycle_addressing,
    hamilton_path_addressing,
    path_addressing,
    tree_addressing,
    verify,
)
from bsep.errors import NoApplicableBound
from bsep.exact import branch_and_bound_c, brute_force_c
from bsep.graph import (
    WeightedGraph,
    cartesian_product,
    complete_graph,
    cycle_graph,
    log2_ceil,
    path_graph,
)
from bsep.lee import (
    LeeQuery,
    lee_distance,
    lee_upper,
    min_hamming_distance,
    min_lee_distance,
    reproduce_table,
    substitute,
)
from bsep.lp import beta, build_primal, dual_point_value, plotkin_dual_point, solve_exact
from bsep.products import factor_value, product_upper

from conftest import ACCEPTANCE_LINES, random_connected_graph, weight_minimal, weight_minimal_cycles


def report(k: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {title}" + (f" ({detail})" if detail else "")
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def _ceil_half(x: int) -> int:
    return -(-x // 2)


def test_01_weighted_cycles():
    t = time.time()
    bad, count = [], 0
    for n in (3, 4, 5):
        for ws in weight_minimal_cycles(n, 11):
            count += 1
            dm = cycle_graph(ws).distances
            want = _ceil_half(sum(ws))
            a = cycle_addressing(ws)
            if brute_force_c(dm).value != want or a.length != want or not verify(a, dm):
                bad.append(ws)
    report(1, "weighted cycle exactness", not bad, f"{count} cycles, {time.time() - t:.1f}s, failures {bad[:3]}")


def test_02_unit_cycles():
    bad = []
    for n in range(3, 9):
        dm = cycle_graph([1] * n).distances
        want = _ceil_half(n)
        if branch_and_bound_c(dm).value != want:
            bad.append(("bnb", n))
        if n <= 6 and brute_force_c(dm).value != want:
            bad.append(("search", n))
    report(2, "unit cycles c = ceil(n/2)", not bad, f"n = 3..8, failures {bad}")


def _paths(max_n, max_total):
    for n in range(2, max_n + 1):
        for ws in product(range(1, max_total + 1), repeat=n - 1):
            if sum(ws) <= max_total:
                yield list(ws)


def test_03_paths():
    bad, count = [], 0
    for ws in _paths(5, 10):
        count += 1
        g = path_graph(ws)
        r = brute_force_c(g.distances)
        if r.value != g.distances.diameter or path_addressing(ws).length != r.value:
            bad.append(ws)
    report(3, "weighted paths c = diameter", not bad, f"{count} paths, failures {bad[:3]}")


def test_04_cliques():
    bad = []
    for n in (2, 3, 4, 5):
        if brute_force_c(complete_graph(n).distances).value != log2_ceil(n):
            bad.append(n)
    dm8 = complete_graph(8).distances
    a = complete_graph_addressing(8)
    # a 2-bit code has only 4 distinct words, so 8 vertices need 3
    if not (verify(a, dm8) and a.length == 3 and log2_ceil(8) == 3):
        bad.append(8)
    report(4, "cliques c = ceil(log2 n)", not bad, f"n in 2,3,4,5,8, failures {bad}")


def test_05_beta_values():
    t = time.time()
    got = {}
    got["K4"] = solve_exact(build_primal(complete_graph(4).distances)).value
    got["C3"] = solve_exact(build_primal(cycle_graph([1] * 3).distances)).value
    ok = got["K4"] == Fraction(3, 2) and got["C3"] == Fraction(3, 2)
    for n in range(3, 9):
        v = solve_exact(build_primal(cycle_graph([1] * n).distances)).value
        ok &= isinstance(v, Fraction) and v == Fraction(n, 2)
    elapsed = time.time() - t
    report(5, "exact beta values", ok and elapsed < 30, f"K4 = {got['K4']}, C3 = {got['C3']}, {elapsed:.1f}s")


def test_06_lambda_ladder():
    dm = cycle_graph([1, 1, 1]).distances
    c = {lam: brute_force_c(dm, lam).value for lam in (1, 2, 3)}
    ok = c[2] == 3 and c[3] == 5 and all(Fraction(c[l], l) >= Fraction(3, 2) for l in c)
    report(6, "lambda scaling on the triangle", ok, f"c_1..c_3 = {c[1]}, {c[2]}, {c[3]}")


def _fifty_graphs():
    rng = random.Random(2718)
    return [weight_minimal(random_connected_graph(rng, rng.randint(2, 6), max_w=5)) for _ in range(50)]


@pytest.fixture(scope="module")
def fifty():
    out = []
    for g in _fifty_graphs():
        dm = g.distances
        out.append((g, beta(dm), brute_force_c(dm).value))
    return out


def test_07_weak_duality(fifty):
    bad = []
    for g, b, c in fifty:
        dm = g.distances
        plotkin = dual_point_value(dm, plotkin_dual_point(dm))
        total = Fraction(int(np.triu(dm.d, 1).sum()), g.n * g.n // 4)
        if not (plotkin == total and plotkin <= b <= c):
            bad.append(g)
    report(7, "Plotkin point <= beta <= c", not bad, f"50 graphs, {len(bad)} failures")


def test_08_integrality_gap(fifty):
    bad = [g for g, b, c in fifty if not (1 <= Fraction(c) / b <= max(1, log2_ceil(g.n)))]
    worst = max(Fraction(c) / b for _, b, c in fifty)
    report(8, "integrality gap in [1, ceil(log2 n)]", not bad, f"largest gap {worst}")


def test_09_products():
    t = time.time()
    cases = [
        ("C3 x C4", [cycle_graph([1] * 3), cycle_graph([1] * 4)], 4),
        ("C5 x P(2)", [cycle_graph([1] * 5), path_graph([2])], 5),
        ("K4 x K2", [complete_graph(4), complete_graph(2)], 3),
    ]
    details, ok = [], True
    for name, fs, want in cases:
        g = cartesian_product(*fs)
        r = branch_and_bound_c(g.distances, node_limit=10**5)
        witness = product_upper([factor_value(f).witness for f in fs])
        ok &= r.value == want and witness.length == want and verify(witness, g.distances)
        details.append(f"{name} = {r.value}")
    elapsed = time.time() - t
    report(9, "product values", ok and elapsed < 300, ", ".join(details) + f", {elapsed:.0f}s")


def test_10_lee_table():
    t = time.time()
    rows = reproduce_table()
    elapsed = time.time() - t
    flagged = {(r.q, r.n, r.d) for r in rows if r.flag}
    ok = len(rows) == 23 and all(r.matches for r in rows) and flagged == {(17, 3, 18), (17, 3, 19)}
    report(10, "Lee bounds table", ok and elapsed < 1, f"{sum(r.matches for r in rows)}/23 rows, flagged {sorted(flagged)}")


def _max_lee_code(q, n, d):
    nx = pytest.importorskip("networkx")
    words = list(product(range(q), repeat=n))
    G = nx.Graph()
    G.add_nodes_from(range(len(words)))
    G.add_edges_from(
        (i, j) for i, j in combinations(range(len(words)), 2) if lee_distance(words[i], words[j], q) >= d
    )
    return max(len(c) for c in nx.find_cliques(G))


def test_11_reduction():
    bad, checked = [], 0
    for q in (3, 4, 5):
        for n in (2, 3):
            for d in range(1, n * (q // 2) + 1):
                try:
                    bound = lee_upper(LeeQuery(q, n, d)).value
                except NoApplicableBound:
                    continue
                checked += 1
                if _max_lee_code(q, n, d) > bound:
                    bad.append((q, n, d))
    rng = random.Random(161)
    for _ in range(100):
        q, n, lam = rng.choice((3, 4, 5, 6, 7)), rng.randint(1, 4), rng.randint(1, 3)
        code = sorted({tuple(rng.randrange(q) for _ in range(n)) for _ in range(rng.randint(2, 8))})
        if len(code) < 2:
            continue
        if min_hamming_distance(substitute(code, q, lam)) < lam * min_lee_distance(code, q):
            bad.append(("substitution", q, n, lam))
    report(11, "Lee reduction", not bad, f"{checked} exhaustive (q, n, d) checks, failures {bad[:3]}")


def _pairwise_ok(bits, d, lam):
    n = len(bits)
    return all(
        int(np.count_nonzero(bits[u] != bits[v])) >= lam * int(d[u, v]) for u in range(n) for v in range(u + 1, n)
    )


def _schemes(g, dm, lam, rng):
    out = [hadamard_addressing(dm, lam)]
    scaled = dm.scaled(lam)
    if g.n >= 2:
        order = list(range(g.n))
        rng.shuffle(order)
        out.append(hamilton_path_addressing(scaled, order))
        if g.n >= 3:
            out.append(hamilton_cycle_addressing(scaled, order))
    if g.is_tree():
        out.append(tree_addressing(WeightedGraph(g.n, tuple((u, v, lam * w) for u, v, w in g.edges))))
    return out


def test_12_verifier_soundness():
    rng = random.Random(1000)
    triples = rejected = 0
    bad = []
    while triples < 1000:
        g = random_connected_graph(rng, rng.randint(2, 8), max_w=4, p=rng.choice((0.0, 0.3, 0.7)))
        dm = g.distances
        lam = rng.randint(1, 3)
        a = rng.choice(_schemes(g, dm, lam, rng))
        triples += 1
        if not verify(a, dm, lam) or not _pairwise_ok(a.bits, dm.d, lam):
            bad.append(("scheme", g, lam))
            continue
        bits = a.bits.copy()
        if bits.size == 0:
            continue
        u, k = rng.randrange(a.n), rng.randrange(a.length)
        bits[u, k] ^= 1
        broken = not _pairwise_ok(bits, dm.d, lam)
        rejected += broken
        if verify(Addressing(bits), dm, lam) == broken:
            bad.append(("corruption", g, lam))
    report(12, "verifier soundness", not bad, f"{triples} triples, {rejected} corruptions rejected")
