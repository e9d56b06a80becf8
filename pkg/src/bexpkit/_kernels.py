"""Hot loops shared by the graph algorithms.

Every kernel is written as a plain function over numpy arrays that numba can
compile in nopython mode.  When numba is unavailable, or when the environment
variable ``BEXPKIT_NO_NUMBA=1`` is set, the interpreted bodies are used
directly.  Both variants stay importable (``*_py`` names) so the benchmark
script can compare them on identical inputs.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is normally installed
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and os.environ.get("BEXPKIT_NO_NUMBA", "") != "1"


def build_csr(n, adj):
    """Flatten adjacency lists into (indptr, indices) int64 arrays."""
    indptr = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        indptr[v + 1] = indptr[v] + len(adj[v])
    indices = np.empty(indptr[n], dtype=np.int64)
    for v in range(n):
        start = indptr[v]
        for i, w in enumerate(adj[v]):
            indices[start + i] = w
    return indptr, indices


def bfs_capped_py(indptr, indices, source, cap, allowed, dist, queue):
    """Breadth-first search from `source` over `allowed` vertices, stopping
    at distance `cap`.

    `dist` must arrive filled with -1 and is written in place; `queue` is
    scratch of length >= n.  Returns the number of visited vertices, which
    occupy queue[:count].  The caller is responsible for resetting the
    touched entries of `dist` (they are exactly dist[queue[:count]]).
    """
    if allowed[source] == 0:
        return 0
    dist[source] = 0
    queue[0] = source
    head = 0
    tail = 1
    while head < tail:
        v = queue[head]
        head += 1
        dv = dist[v]
        if dv >= cap:
            continue
        for e in range(indptr[v], indptr[v + 1]):
            w = indices[e]
            if allowed[w] != 0 and dist[w] < 0:
                dist[w] = dv + 1
                queue[tail] = w
                tail += 1
    return tail


def peel_rounds_py(indptr, indices, threshold, round_of):
    """Repeatedly delete, in parallel rounds, every remaining vertex whose
    current degree is <= threshold.

    round_of must arrive filled with -1; it receives the 0-based round in
    which each vertex was deleted.  Returns (rounds, leftover): leftover > 0
    means a round deleted nothing while vertices remained.
    """
    n = indptr.shape[0] - 1
    deg = np.empty(n, dtype=np.int64)
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
    remaining = n
    rounds = 0
    batch = np.empty(n, dtype=np.int64)
    while remaining > 0:
        count = 0
        for v in range(n):
            if round_of[v] < 0 and deg[v] <= threshold:
                batch[count] = v
                count += 1
        if count == 0:
            return rounds, remaining
        for i in range(count):
            round_of[batch[i]] = rounds
        for i in range(count):
            v = batch[i]
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                if round_of[w] < 0:
                    deg[w] -= 1
        remaining -= count
        rounds += 1
    return rounds, 0


def wreach_sweep_py(indptr, indices, order, r, out_lo, out_hi):
    """Enumerate all weak-reachability pairs for the given ordering.

    Sweeps vertices in ascending `order` position; for position i with
    vertex u, a capped BFS restricted to vertices at positions >= i finds
    every v with u in WReach_r[v].  Pairs (u, v) -- including (u, u) -- are
    written to out_lo/out_hi while capacity lasts.  Returns the total number
    of pairs; if it exceeds the buffer length the caller must retry with a
    larger buffer.
    """
    n = order.shape[0]
    capacity = out_lo.shape[0]
    allowed = np.ones(n, dtype=np.uint8)
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    total = 0
    for i in range(n):
        u = order[i]
        dist[u] = 0
        queue[0] = u
        head = 0
        tail = 1
        while head < tail:
            v = queue[head]
            head += 1
            dv = dist[v]
            if dv >= r:
                continue
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                if allowed[w] != 0 and dist[w] < 0:
                    dist[w] = dv + 1
                    queue[tail] = w
                    tail += 1
        for q in range(tail):
            v = queue[q]
            if total < capacity:
                out_lo[total] = u
                out_hi[total] = v
            total += 1
            dist[v] = -1
        allowed[u] = 0
    return total


if USE_NUMBA:
    bfs_capped = njit(cache=True)(bfs_capped_py)
    peel_rounds = njit(cache=True)(peel_rounds_py)
    wreach_sweep = njit(cache=True)(wreach_sweep_py)
else:
    bfs_capped = bfs_capped_py
    peel_rounds = peel_rounds_py
    wreach_sweep = wreach_sweep_py
