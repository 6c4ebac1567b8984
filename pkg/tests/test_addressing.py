import random
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bsep.addressing import (
    Addressing,
    complete_graph_addressing,
    concat,
    cycle_addressing,
    format_addressing,
    hadamard_addressing,
    hadamard_code,
    hamilton_cycle_addressing,
    hamilton_path_addressing,
    hamming_matrix,
    k4_addressing,
    parse_addressing,
    path_addressing,
    slack,
    tree_addressing,
    triangle_addressing,
    verify,
)
from bsep.errors import (
    DimensionMismatch,
    NotATree,
    NotWeightMinimal,
    ParseError,
    TriangleViolation,
    ValidationError,
    WrongSize,
)
from bsep.graph import (
    DistanceMatrix,
    WeightedGraph,
    cartesian_product,
    complete_graph,
    cycle_graph,
    path_graph,
)

from conftest import random_connected_graph, weight_minimal_cycles


K4_CODE = Addressing.from_strings(["000", "110", "101", "011"])


class TestBasics:
    def test_from_strings(self):
        a = Addressing.from_strings(["01", "10"])
        assert a.n == 2 and a.length == 2 and a.rows() == ["01", "10"]

    def test_rejects_ragged_and_bad_symbols(self):
        with pytest.raises(ValidationError):
            Addressing.from_strings(["01", "1"])
        with pytest.raises(ValidationError):
            Addressing.from_strings(["02"])

    def test_hamming(self):
        h = hamming_matrix(K4_CODE)
        assert (h[np.triu_indices(4, 1)] == 2).all()

    def test_verify_k4(self):
        dm = complete_graph(4).distances
        assert verify(K4_CODE, dm, 1)
        assert verify(K4_CODE, dm, 2)
        assert not verify(K4_CODE, dm, 3)
        assert slack(K4_CODE, dm, 1) == 1 and slack(K4_CODE, dm, 3) == -1

    def test_verify_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            verify(K4_CODE, complete_graph(3).distances)

    def test_parse_round_trip(self):
        assert parse_addressing(format_addressing(K4_CODE)) == K4_CODE
        empty = Addressing(np.zeros((1, 0), dtype=np.uint8))
        assert parse_addressing(format_addressing(empty)) == empty

    @pytest.mark.parametrize(
        "text", ["", "2 2\n01\n", "2 2\n01\n1\n", "2 2\n01\n12\n", "x\n"]
    )
    def test_parse_rejects(self, text):
        with pytest.raises(ParseError):
            parse_addressing(text)


class TestPath:
    def test_example(self):
        assert path_addressing([2, 3]).rows() == ["00000", "00011", "11111"]

    def test_is_isometric(self, rng):
        for _ in range(20):
            ws = [rng.randint(1, 5) for _ in range(rng.randint(1, 6))]
            a = path_addressing(ws)
            assert np.array_equal(hamming_matrix(a), path_graph(ws).distances.d)

    def test_empty(self):
        with pytest.raises(ValidationError):
            path_addressing([])


class TestCycle:
    def test_unit_cycles(self):
        for n in range(3, 12):
            a = cycle_addressing([1] * n)
            assert a.length == -(-n // 2)
            assert verify(a, cycle_graph([1] * n).distances)

    def test_all_small_weight_minimal(self):
        for n in (3, 4, 5):
            for ws in weight_minimal_cycles(n, 9):
                a = cycle_addressing(ws)
                assert a.length == -(-sum(ws) // 2)
                assert verify(a, cycle_graph(ws).distances), ws

    def test_rejects_heavy_edge(self):
        with pytest.raises(NotWeightMinimal):
            cycle_addressing([1, 1, 3])


class TestTriangle:
    def test_examples(self):
        assert triangle_addressing(2, 3, 4).rows() == ["00000", "11110", "00111"]
        assert triangle_addressing(1, 1, 2).rows() == ["00", "11", "01"]

    def test_exhaustive(self):
        for a in range(1, 8):
            for b in range(a, 8):
                for c in range(b, a + b + 1):
                    t = triangle_addressing(a, b, c)
                    assert t.length == -(-(a + b + c) // 2)
                    h = hamming_matrix(t)
                    assert h[0, 1] >= c and h[0, 2] >= b and h[1, 2] >= a

    def test_rejects(self):
        with pytest.raises(TriangleViolation):
            triangle_addressing(1, 1, 3)
        with pytest.raises(ValueError):
            triangle_addressing(3, 2, 1)


class TestTree:
    def test_spider(self):
        g = WeightedGraph(4, ((0, 1, 1), (0, 2, 1), (2, 3, 2)))
        a = tree_addressing(g)
        assert a.length == 4
        assert np.array_equal(hamming_matrix(a), g.distances.d)

    def test_random_trees_isometric(self, rng):
        for _ in range(20):
            g = random_connected_graph(rng, rng.randint(1, 10), max_w=4, p=0.0)
            a = tree_addressing(g)
            assert a.length == sum(w for _, _, w in g.edges)
            assert np.array_equal(hamming_matrix(a), g.distances.d)

    def test_not_tree(self):
        with pytest.raises(NotATree):
            tree_addressing(cycle_graph([1, 1, 1]))


class TestComplete:
    def test_k5(self):
        a = complete_graph_addressing(5)
        assert a.length == 3 and verify(a, complete_graph(5).distances)

    def test_lengths(self):
        for n in range(1, 20):
            a = complete_graph_addressing(n)
            assert a.length == (n - 1).bit_length()
            assert len(set(a.rows())) == n


class TestHadamard:
    def test_code_distances(self):
        for k in range(0, 5):
            code = Addressing.from_strings(hadamard_code(k))
            assert code.n == 2 ** (k + 1) and code.length == 2**k
            h = hamming_matrix(code)
            off = h[np.triu_indices(code.n, 1)]
            if k:
                assert off.min() == 2 ** (k - 1)

    def test_examples(self):
        assert hadamard_addressing(complete_graph(4).distances).length == 4
        assert hadamard_addressing(cycle_graph([1, 1, 1]).distances, 2).length == 4

    def test_always_valid(self, rng):
        for _ in range(30):
            g = random_connected_graph(rng, rng.randint(1, 9), max_w=3)
            lam = rng.randint(1, 3)
            a = hadamard_addressing(g.distances, lam)
            assert verify(a, g.distances, lam)


class TestFourVertex:
    def test_p4(self):
        a = k4_addressing(path_graph([1, 1, 1]).distances)
        assert a.length == 3

    def test_exhaustive_small_metrics(self):
        seen = 0
        for w in np.ndindex(*(5,) * 6):
            vals = [x + 1 for x in w]
            d = np.zeros((4, 4), dtype=np.int64)
            for (i, j), v in zip(combinations(range(4), 2), vals):
                d[i, j] = d[j, i] = v
            dm = DistanceMatrix(d)
            if not dm.is_metric():
                continue
            seen += 1
            a = k4_addressing(dm)
            heavy = max(int(d[i, j] + d[j, k] + d[i, k]) for i, j, k in combinations(range(4), 3))
            assert a.length == -(-heavy // 2)
            assert verify(a, dm), vals
        assert seen > 1000

    def test_rejects(self):
        with pytest.raises(WrongSize):
            k4_addressing(complete_graph(3).distances)
        bad = DistanceMatrix([[0, 1, 1, 5], [1, 0, 1, 1], [1, 1, 0, 1], [5, 1, 1, 0]])
        with pytest.raises(NotWeightMinimal):
            k4_addressing(bad)


class TestHamilton:
    def test_path_and_cycle(self):
        dm = cycle_graph([1] * 6).distances
        order = [0, 1, 2, 3, 4, 5]
        assert hamilton_path_addressing(dm, order).length == 5
        assert hamilton_cycle_addressing(dm, order).length == 3
        assert verify(hamilton_cycle_addressing(dm, order), dm)

    def test_any_order_valid(self, rng):
        for _ in range(20):
            g = random_connected_graph(rng, rng.randint(3, 8))
            dm = g.distances
            order = list(range(g.n))
            rng.shuffle(order)
            assert verify(hamilton_path_addressing(dm, order), dm)
            assert verify(hamilton_cycle_addressing(dm, order), dm)

    def test_bad_order(self):
        with pytest.raises(ValidationError):
            hamilton_path_addressing(complete_graph(3).distances, [0, 0, 1])


class TestConcat:
    def test_product_valid(self, rng):
        for _ in range(15):
            g1 = random_connected_graph(rng, rng.randint(1, 5))
            g2 = random_connected_graph(rng, rng.randint(1, 5))
            a1 = hadamard_addressing(g1.distances)
            a2 = hadamard_addressing(g2.distances)
            a = concat(a1, a2)
            assert a.length == a1.length + a2.length
            assert verify(a, cartesian_product(g1, g2).distances)

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            concat(K4_CODE, K4_CODE, n2=3)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=3, max_size=7))
def test_cycle_scheme_property(ws):
    if any(2 * w > sum(ws) for w in ws):
        with pytest.raises(NotWeightMinimal):
            cycle_addressing(ws)
    else:
        assert verify(cycle_addressing(ws), cycle_graph(ws).distances)
