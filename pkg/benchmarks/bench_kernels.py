"""Benchmark the compiled graph kernels against their interpreted bodies.

The package ships three hot loops (capped BFS, parallel peeling, and the
weak-reachability sweep) that are jitted with numba when it is available
and fall back to plain numpy/Python otherwise (``BEXPKIT_NO_NUMBA=1``
forces the fallback).  Both variants are importable side by side, so this
script times them in one process and prints a speedup table.

Run with ``python benchmarks/bench_kernels.py [--n N] [--repeat K]``.
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from bexpkit._kernels import (USE_NUMBA, bfs_capped, bfs_capped_py,
                              peel_rounds, peel_rounds_py, wreach_sweep,
                              wreach_sweep_py)
from bexpkit.degeneracy import greedy_degeneracy_ordering
from bexpkit.graphs import Graph


def random_degenerate_graph(n: int, d: int, seed: int) -> Graph:
    """Build each vertex on top of <= d random earlier neighbours."""
    rng = random.Random(seed)
    edges = []
    for v in range(1, n):
        for u in rng.sample(range(v), min(v, rng.randint(0, d))):
            edges.append((u, v))
    return Graph.from_edges(n, edges)


def time_call(fn, args, repeat: int) -> float:
    """Median wall time in seconds over `repeat` runs on fresh buffers."""
    samples = []
    for _ in range(repeat):
        fresh = [a.copy() if isinstance(a, np.ndarray) else a for a in args]
        t0 = time.perf_counter()
        fn(*fresh)
        samples.append(time.perf_counter() - t0)
    samples.sort()
    return samples[len(samples) // 2]


def bfs_workload(G: Graph, sources: int, seed: int):
    indptr, indices = G.csr()
    rng = random.Random(seed)
    picks = [rng.randrange(G.n) for _ in range(sources)]
    allowed = np.ones(G.n, dtype=np.int8)
    dist = np.full(G.n, -1, dtype=np.int64)
    queue = np.empty(G.n, dtype=np.int64)

    def run(fn):
        for s in picks:
            dist.fill(-1)
            fn(indptr, indices, s, 8, allowed, dist, queue)

    return run


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=50_000, help="vertex count")
    ap.add_argument("--d", type=int, default=3, help="degeneracy target")
    ap.add_argument("--repeat", type=int, default=5, help="timing repeats")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    G = random_degenerate_graph(args.n, args.d, args.seed)
    indptr, indices = G.csr()
    sigma, dgn = greedy_degeneracy_ordering(G)
    order = np.asarray(sigma.order, dtype=np.int64)
    print(f"graph: n={G.n} m={G.m} degeneracy={dgn} "
          f"numba={'on' if USE_NUMBA else 'off'}")
    if not USE_NUMBA:
        print("numba unavailable or disabled; timing the fallback only")

    cap = 4 * G.m * (2 ** 3)
    rows = [
        ("peel_rounds",
         peel_rounds, peel_rounds_py,
         (indptr, indices, 2 * args.d, np.zeros(G.n, dtype=np.int64))),
        ("wreach_sweep",
         wreach_sweep, wreach_sweep_py,
         (indptr, indices, order, 3,
          np.empty(cap, dtype=np.int64), np.empty(cap, dtype=np.int64))),
    ]

    print(f"{'kernel':<14} {'jit (ms)':>10} {'python (ms)':>12} {'speedup':>8}")
    for name, fast, slow, kargs in rows:
        if USE_NUMBA:
            fast(*[a.copy() if isinstance(a, np.ndarray) else a
                   for a in kargs])  # trigger compilation outside the timer
            t_fast = time_call(fast, kargs, args.repeat)
        else:
            t_fast = float("nan")
        t_slow = time_call(slow, kargs, args.repeat)
        ratio = t_slow / t_fast if USE_NUMBA else float("nan")
        print(f"{name:<14} {1e3 * t_fast:>10.2f} {1e3 * t_slow:>12.2f} "
              f"{ratio:>7.1f}x")

    run_fast = bfs_workload(G, 200, args.seed)
    run_slow = bfs_workload(G, 200, args.seed)
    if USE_NUMBA:
        run_fast(bfs_capped)
        t_fast = time_call(lambda: run_fast(bfs_capped), (), args.repeat)
    else:
        t_fast = float("nan")
    t_slow = time_call(lambda: run_slow(bfs_capped_py), (), args.repeat)
    ratio = t_slow / t_fast if USE_NUMBA else float("nan")
    print(f"{'bfs_capped':<14} {1e3 * t_fast:>10.2f} {1e3 * t_slow:>12.2f} "
          f"{ratio:>7.1f}x")


if __name__ == "__main__":
    main()
