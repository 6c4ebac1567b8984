import random
from itertools import combinations

import pytest
from hypothesis import strategies as st

from bsep.graph import WeightedGraph, cycle_graph


def random_connected_graph(rng: random.Random, n: int, max_w: int = 4, p: float = 0.5) -> WeightedGraph:
    """Random spanning tree plus extra edges, so it is always connected."""
    order = list(range(n))
    rng.shuffle(order)
    edges = {}
    for k in range(1, n):
        u, v = order[k], order[rng.randrange(k)]
        edges[(min(u, v), max(u, v))] = rng.randint(1, max_w)
    for u, v in combinations(range(n), 2):
        if (u, v) not in edges and rng.random() < p:
            edges[(u, v)] = rng.randint(1, max_w)
    return WeightedGraph(n, tuple((u, v, w) for (u, v), w in sorted(edges.items())))


def weight_minimal(g: WeightedGraph) -> WeightedGraph:
    """Replace every edge weight by the distance between its endpoints."""
    d = g.distances
    return WeightedGraph(g.n, tuple((u, v, d[u, v]) for u, v, _ in g.edges))


def weight_minimal_cycles(n: int, max_total: int):
    """Every weight-minimal cycle weight vector of length n with sum <= max_total."""
    from itertools import product

    for ws in product(range(1, max_total + 1), repeat=n):
        total = sum(ws)
        if total <= max_total and all(2 * w <= total for w in ws):
            yield list(ws)


@st.composite
def graphs(draw, min_n=1, max_n=6, max_w=4):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    p = draw(st.sampled_from([0.0, 0.3, 0.6, 1.0]))
    return random_connected_graph(random.Random(seed), n, max_w, p)


@pytest.fixture
def rng():
    return random.Random(20241016)


@pytest.fixture
def c6():
    return cycle_graph([1] * 6)


# acceptance lines are collected here and repeated in the terminal summary,
# so they show up even when output capture is on
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
