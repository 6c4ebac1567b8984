"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from bsep import _kernels
from bsep._kernels import _pykernels
from bsep.exact import _farthest_first
from bsep.graph import cartesian_product, cycle_graph


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def _ordered(dm):
    # the vertex order used by the exact search
    order = _farthest_first(dm.d)
    return dm.d[np.ix_(order, order)]


def cases():
    c5c5 = _ordered(cartesian_product(cycle_graph([1] * 5), cycle_graph([1] * 5)).distances)
    c7c3 = _ordered(cartesian_product(cycle_graph([1] * 7), cycle_graph([1] * 3)).distances)
    c14 = _ordered(cycle_graph([1] * 14).distances)
    rng = np.random.default_rng(0)
    dense = rng.integers(1, 20, size=(13, 13))
    dense = np.triu(dense, 1) + np.triu(dense, 1).T
    yield "search C5xC5, length 5 (infeasible)", "search_rows", (c5c5, 5, 10**9)
    yield "search C5xC5, length 6", "search_rows", (c5c5, 6, 10**9)
    yield "search C7xC3, length 5 (infeasible)", "search_rows", (c7c3, 5, 10**9)
    yield "search C14, length 7", "search_rows", (c14, 7, 10**9)
    yield "held-karp path, n=13", "held_karp_path", (dense,)
    yield "held-karp cycle, n=13", "held_karp_cycle", (dense,)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels.compiled is None:
        print("compiled kernels are not built; only the Python fallback is timed")
    print(f"backend in use: {_kernels.BACKEND}")
    print(f"{'case':<38} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for label, name, fn_args in cases():
        tp = _time(lambda: getattr(_pykernels, name)(*fn_args), args.repeat)
        if _kernels.compiled is None:
            print(f"{label:<38} {tp:>10.4f} {'-':>10} {'-':>8}")
            continue
        tc = _time(lambda: getattr(_kernels.compiled, name)(*fn_args), args.repeat)
        print(f"{label:<38} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
