"""Benchmark the numba kernels against their pure-numpy fallbacks.

Runs both implementations of each hot kernel on identical inputs and prints
a timing table. The numba side includes a warmup call so compilation time is
excluded from the timed loops.

Usage: python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from odg import ComparisonGraph, graph_system, rank_of
from odg._kernels import (
    NUMBA_ENABLED,
    eigh_sym_jacobi,
    eigh_sym_numpy,
    grid_scan_jacobi,
    grid_scan_numpy,
)


def time_call(fn, repeats=1):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_eigh(rng):
    print("symmetric eigensolver (1000 matrices per size)")
    print(f"{'n':>4} {'jacobi':>12} {'numpy':>12} {'ratio':>8}")
    for n in (4, 8, 16, 28):
        mats = [x @ x.T for x in rng.standard_normal((1000, n, n))]
        eigh_sym_jacobi(mats[0])  # warmup / compile

        def run_jacobi():
            for m in mats:
                eigh_sym_jacobi(m)

        def run_numpy():
            for m in mats:
                eigh_sym_numpy(m)

        tj = time_call(run_jacobi, repeats=3)
        tn = time_call(run_numpy, repeats=3)
        print(f"{n:>4} {tj * 1e3:>10.1f}ms {tn * 1e3:>10.1f}ms {tn / tj:>8.2f}")


def bench_grid():
    # triangle plus pendant, the densest acceptance-scale scan
    graph = ComparisonGraph(4, ((0, 1), (1, 2), (2, 0), (0, 3)))
    system = graph_system(graph)
    gram = system.q @ system.q.T
    rank = rank_of(system)
    n = 200  # step 0.005 -> about 1.3 million lattice designs
    print(f"\nlattice scan, v=4, n={n} (~1.3e6 designs)")
    print(f"{'criterion':>12} {'jacobi':>12} {'numpy':>12} {'ratio':>8}")
    grid_scan_jacobi(gram, rank, 20, 4, 2, 0.0)  # warmup / compile
    for label, mode, qexp in (("determinant", 0, 0.0), ("trace", 1, 1.0), ("largest", 2, 0.0)):
        tj = time_call(lambda: grid_scan_jacobi(gram, rank, n, 4, mode, qexp))
        tn = time_call(lambda: grid_scan_numpy(gram, rank, n, 4, mode, qexp))
        print(f"{label:>12} {tj:>11.2f}s {tn:>11.2f}s {tn / tj:>8.2f}")


def main():
    print(f"numba available and enabled: {NUMBA_ENABLED}")
    if not NUMBA_ENABLED:
        print("('jacobi' columns below run as plain Python; expect them to be slow)")
    rng = np.random.default_rng(0)
    bench_eigh(rng)
    bench_grid()


if __name__ == "__main__":
    main()
