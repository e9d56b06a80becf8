"""Back-connectivity, admissibility block orderings, and weak reachability.

The centerpiece is adm_block_ordering: repeatedly extract every vertex
whose back-connectivity to the remaining set is below the 6r^2 d^3
threshold.  Flattening the resulting blocks gives an ordering whose weak
r-coloring number is bounded by g(r, d) whenever the input satisfies the
density promise.  Back-connectivity itself is decided exactly on small
neighborhoods and by seeded color-coding with witness verification
elsewhere.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels, degeneracy
from ._util import derive_seed
from .graphs import (
    BlockOrdering,
    ClassParams,
    Graph,
    OracleOverflow,
    PromiseViolation,
    RoundLedger,
    VertexOrdering,
    bounded_distances,
)

TRIALS_CAP = 10**6


@dataclass(frozen=True)
class BconnConfig:
    """How bconn_at_least decides its queries.

    mode "exact" always computes ground truth; "mc" uses seeded color
    coding with `trials` attempts (None picks ceil(k^(rk) * ln 100), capped
    at 10^6).  Instances whose radius-r ball has at most exact_cutoff
    vertices are decided exactly even in mc mode.
    """

    mode: str = "exact"
    trials: int | None = None
    seed: int = 0
    exact_cutoff: int = 64

    def __post_init__(self):
        if self.mode not in ("exact", "mc"):
            raise ValueError(f"unknown bconn mode {self.mode!r}")
        if self.trials is not None and self.trials < 1:
            raise ValueError("trials must be >= 1")


def default_trials(r: int, k: int) -> int:
    """ceil(k^(rk) * ln 100), capped at 10^6 (computed in log space)."""
    if k <= 1:
        return math.ceil(math.log(100))
    if r * k * math.log(k) + math.log(math.log(100)) >= math.log(TRIALS_CAP):
        return TRIALS_CAP
    return min(TRIALS_CAP, math.ceil(k ** (r * k) * math.log(100)))


def _enumerate_paths(G: Graph, S, u: int, r: int, max_paths: int):
    """All simple paths u -> S\\{u} of length <= r with internal vertices
    outside S, as (endpoint, frozenset of internals) pairs, deduplicated.

    Raises OracleOverflow when more than max_paths raw paths exist.
    """
    found = set()
    work = 0
    stack = [(u, ())]
    while stack:
        v, internals = stack.pop()
        if len(internals) + 1 > r:
            continue
        for w in G.neighbors(v):
            if w == u:
                continue
            work += 1
            if work > max_paths:
                raise OracleOverflow(
                    f"exact oracle overflow: more than {max_paths} path extensions"
                )
            if w in S:
                found.add((w, frozenset(internals)))
            elif w not in internals:
                stack.append((w, internals + (w,)))
    return found


def _max_packing(paths) -> int:
    """Maximum number of paths pairwise sharing no endpoint or internal
    vertex, by branch and bound over endpoints."""
    by_endpoint = {}
    for endpoint, internals in paths:
        by_endpoint.setdefault(endpoint, []).append(internals)
    options = sorted(
        (sorted(opts, key=len) for opts in by_endpoint.values()), key=len
    )
    best = 0
    used = set()

    def walk(idx: int, count: int):
        nonlocal best
        if count > best:
            best = count
        if idx == len(options) or count + (len(options) - idx) <= best:
            return
        for internals in options[idx]:
            if used.isdisjoint(internals):
                used.update(internals)
                walk(idx + 1, count + 1)
                used.difference_update(internals)
        walk(idx + 1, count)

    walk(0, 0)
    return best


def bconn_exact(G: Graph, S, u: int, r: int, max_paths: int = 200_000) -> int:
    """Exact back-connectivity: the maximum size of a family of length-<=r
    paths from u to S\\{u}, internal vertices outside S, pairwise sharing
    only u.

    Exponential in the worst case; guarded by max_paths (raises
    OracleOverflow beyond it).
    """
    S = frozenset(S)
    if u not in S:
        raise ValueError("u must belong to S")
    if r < 1:
        raise ValueError("radius must be >= 1")
    if r == 1:
        return sum(1 for w in G.neighbors(u) if w in S)
    paths = _enumerate_paths(G, S, u, r, max_paths)
    if not paths:
        return 0
    return _max_packing(paths)


def _ball(G: Graph, u: int, r: int):
    """Vertices within distance r of u (plain BFS, no restriction)."""
    dist = bounded_distances(G, u, r)
    return [v for v in range(G.n) if dist[v] >= 0]


def _color_class_endpoints(G: Graph, S, u, r, color, want):
    """Endpoints in S\\{u} reachable from u within r steps using only
    internal vertices of the given color."""
    reached = set()
    dist = {u: 0}
    frontier = [u]
    while frontier:
        nxt = []
        for v in frontier:
            dv = dist[v]
            if dv >= r:
                continue
            for w in G.neighbors(v):
                if w == u:
                    continue
                if w in S:
                    reached.add(w)
                elif w not in dist and color.get(w) == want:
                    dist[w] = dv + 1
                    nxt.append(w)
        frontier = nxt
    return reached


def _bipartite_matching_size(options) -> int:
    """Kuhn's algorithm: options[i] = iterable of right-nodes usable by
    left-node i; returns maximum matching size."""
    match_right = {}

    def try_assign(i, seen):
        for right in options[i]:
            if right in seen:
                continue
            seen.add(right)
            if right not in match_right or try_assign(match_right[right], seen):
                match_right[right] = i
                return True
        return False

    size = 0
    for i in range(len(options)):
        if try_assign(i, set()):
            size += 1
    return size


def bconn_at_least(G: Graph, S, u: int, r: int, k: int, cfg: BconnConfig) -> bool:
    """Decide bconn_r(S, u) >= k.

    Exact mode is ground truth.  Monte-carlo mode is one-sided: `true`
    answers come with a verified witness (k vertex-disjoint colored paths
    with distinct endpoints), `false` may be wrong with probability at most
    (1 - k^(-rk))^trials per query.
    """
    S = frozenset(S)
    if u not in S:
        raise ValueError("u must belong to S")
    if k < 1:
        raise ValueError("threshold k must be >= 1")
    if r < 1:
        raise ValueError("radius must be >= 1")
    # Paths leave u along distinct first edges, so bconn <= deg(u).
    if G.degree(u) < k:
        return False
    ball = _ball(G, u, r)
    if cfg.mode == "exact" or len(ball) <= cfg.exact_cutoff:
        try:
            return bconn_exact(G, S, u, r) >= k
        except OracleOverflow:
            if cfg.mode == "exact":
                raise
    trials = cfg.trials if cfg.trials is not None else default_trials(r, k)
    internals = [v for v in ball if v not in S]
    for t in range(trials):
        rng = random.Random(derive_seed(cfg.seed, "bconn", u, t))
        color = {v: rng.randrange(k) for v in internals}
        per_color = []
        ok = True
        for i in range(k):
            endpoints = _color_class_endpoints(G, S, u, r, color, i)
            if not endpoints:
                ok = False
                break
            per_color.append(endpoints)
        if ok and _bipartite_matching_size(per_color) == k:
            # Witness: color classes are disjoint, so picking one path per
            # class with matched distinct endpoints gives k paths sharing
            # only u.
            return True
    return False


def adm_block_ordering(G: Graph, params: ClassParams, cfg: BconnConfig):
    """Extract, round by round, every vertex of the remaining set S whose
    back-connectivity bconn_r(S, v) is at most 6 r^2 d^3; emit the peeled
    sets last-extracted-first.

    For r = 1 this delegates to the degeneracy block ordering with bound
    2d (the density promise at depth 0 bounds degeneracy by 2d).  Raises
    PromiseViolation when a round extracts nothing.
    """
    r, d = params.r, params.d
    if r == 1:
        tau, _ = degeneracy.block_ordering(G, 2 * d)
        ledger = RoundLedger()
        ledger.add("adm-blocks", len(tau.blocks))
        return tau, ledger
    if G.n == 0:
        raise ValueError("graph must have at least one vertex")
    threshold = 6 * r * r * d**3
    remaining = set(range(G.n))
    extracted_sets = []
    round_idx = 0
    while remaining:
        cfg_round = replace(cfg, seed=derive_seed(cfg.seed, "adm-round", round_idx))
        batch = []
        for v in sorted(remaining):
            # bconn <= deg(v), so low-degree vertices skip the query.
            if G.degree(v) <= threshold or not bconn_at_least(
                G, remaining, v, r, threshold + 1, cfg_round
            ):
                batch.append(v)
        if not batch:
            raise PromiseViolation(
                "promise violated: every remaining vertex has back-connectivity "
                f"above {threshold}"
            )
        extracted_sets.append(batch)
        remaining.difference_update(batch)
        round_idx += 1
    blocks = list(reversed(extracted_sets))
    ledger = RoundLedger()
    ledger.add("adm-blocks", len(blocks))
    return BlockOrdering(blocks), ledger


def _wreach_pairs(G: Graph, sigma: VertexOrdering, r: int):
    """All (u, v) pairs with u in WReach_r[G, sigma, v], including (v, v)."""
    indptr, indices = G.csr()
    order = np.array(sigma.order, dtype=np.int64)
    capacity = max(64, 8 * G.n)
    while True:
        out_lo = np.empty(capacity, dtype=np.int64)
        out_hi = np.empty(capacity, dtype=np.int64)
        total = _kernels.wreach_sweep(indptr, indices, order, r, out_lo, out_hi)
        if total <= capacity:
            return out_lo[:total], out_hi[:total]
        capacity = total


def wreach_set(G: Graph, sigma: VertexOrdering, v: int, r: int):
    """WReach_r[G, sigma, v]: vertices u <=_sigma v at distance <= r from v
    inside the subgraph induced by {w : w >=_sigma u}."""
    if not (0 <= v < G.n):
        raise ValueError(f"vertex {v} out of range")
    if r < 0:
        raise ValueError("radius must be >= 0")
    lo, hi = _wreach_pairs(G, sigma, r)
    return frozenset(int(u) for u, w in zip(lo, hi) if w == v)


def wcol_measure(G: Graph, sigma: VertexOrdering, r: int) -> int:
    """max_v |WReach_r[G, sigma, v]|."""
    if G.n == 0:
        return 0
    _, hi = _wreach_pairs(G, sigma, r)
    return int(np.bincount(hi, minlength=G.n).max())


def weak_reachability_graph(G: Graph, sigma: VertexOrdering, r: int) -> Graph:
    """Graph joining u <_sigma v whenever u is weakly r-reachable from v."""
    lo, hi = _wreach_pairs(G, sigma, r)
    keep = lo != hi
    return Graph.from_edges(G.n, zip(lo[keep].tolist(), hi[keep].tolist()))


def g_bound(r: int, d: int) -> int:
    """g(r, d) = sum_{i=0}^{r} c^i with c = 6 r^2 d^3, as an exact int."""
    if r < 1 or d < 1:
        raise ValueError("g_bound requires r >= 1 and d >= 1")
    c = 6 * r * r * d**3
    if c < 2:
        raise ValueError("threshold 6 r^2 d^3 must be >= 2")
    return sum(c**i for i in range(r + 1))


def wcol_ordering(G: Graph, params: ClassParams, cfg: BconnConfig):
    """Flattened admissibility block ordering; under the density promise
    with exact bconn, wcol_r of the result is at most g_bound(r, d)."""
    tau, ledger = adm_block_ordering(G, params, cfg)
    return tau.flatten(), ledger
