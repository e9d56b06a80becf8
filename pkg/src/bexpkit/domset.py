"""Distance-r dominating sets via weak-reachability minima.

Ordering the vertices by the admissibility decomposition at radius 2r and
mapping every vertex u to the smallest member of its weak r-reachability
set yields a dominating set whose size is at most wcol_{2r}(G, sigma)
times the optimum.  Validity never depends on the promise; the ratio is
reported against the measured weak coloring number.
"""

from __future__ import annotations

from itertools import combinations

from . import wcol
from .graphs import ClassParams, Graph, VertexOrdering, bounded_distances
from .wcol import BconnConfig


def domset_approx(G: Graph, r: int, params: ClassParams, cfg: BconnConfig, sigma=None):
    """Distance-r dominating set D = { d(u) : u in V } where d(u) is the
    sigma-minimum of WReach_r[G, sigma, u].

    sigma defaults to wcol_ordering at radius 2r with params.d; a custom
    ordering may be injected.  Returns (D as a sorted list, sigma,
    measured wcol_{2r}(G, sigma)).
    """
    if r < 1:
        raise ValueError("radius must be >= 1")
    if G.n == 0:
        return [], VertexOrdering([]), 0
    if sigma is None:
        sigma, _ = wcol.wcol_ordering(
            G, ClassParams(r=2 * r, d=params.d, p=params.p), cfg
        )
    pos = sigma.pos
    lo, hi = wcol._wreach_pairs(G, sigma, r)
    best = [-1] * G.n
    for u, v in zip(lo.tolist(), hi.tolist()):
        if best[v] < 0 or pos[u] < pos[best[v]]:
            best[v] = u
    D = sorted(set(best))
    measured = wcol.wcol_measure(G, sigma, 2 * r)
    return D, sigma, measured


def is_dominating(G: Graph, D, r: int) -> bool:
    """Every vertex within distance r of some member of D."""
    covered = [False] * G.n
    for s in D:
        dist = bounded_distances(G, s, r)
        for v in range(G.n):
            if dist[v] >= 0:
                covered[v] = True
    return all(covered)


def domset_exact(G: Graph, r: int) -> int:
    """Smallest distance-r dominating set size, by subset enumeration with
    coverage pruning; n <= 20."""
    if G.n > 20:
        raise ValueError("too large for exact oracle")
    if G.n == 0:
        return 0
    full = (1 << G.n) - 1
    cover = []
    for v in range(G.n):
        dist = bounded_distances(G, v, r)
        mask = 0
        for w in range(G.n):
            if dist[w] >= 0:
                mask |= 1 << w
        cover.append(mask)
    for size in range(1, G.n + 1):
        for subset in combinations(range(G.n), size):
            acc = 0
            for v in subset:
                acc |= cover[v]
            if acc == full:
                return size
    return G.n
