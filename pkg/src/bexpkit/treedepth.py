"""Separation forests for bounded-treedepth graphs.

dfs_forest builds a DFS forest level by level: roots are the smallest
vertex of each component, and each round attaches, per component of the
unplaced remainder, the smallest frontier vertex below its smallest
last-level neighbor.  All connectivity tests inside rounds are
distance-capped at 2^h, which is sound exactly when the treedepth promise
holds; the output is always verified to be a separation forest before it
is returned.
"""

from __future__ import annotations

import numpy as np

from . import _kernels, degeneracy, wcol
from .graphs import (
    ClassParams,
    Graph,
    GraphFormatError,
    PromiseViolation,
    RoundLedger,
)
from .wcol import BconnConfig


class RootedForest:
    """Forest over nodes 0..n-1 given by optional parents; root depth = 1."""

    __slots__ = ("parent", "depth_of")

    def __init__(self, parent):
        parent = tuple(None if p is None else int(p) for p in parent)
        n = len(parent)
        depth = [0] * n

        def resolve(v):
            chain = []
            while depth[v] == 0:
                chain.append(v)
                depth[v] = -1  # cycle sentinel
                p = parent[v]
                if p is None:
                    depth[v] = 1
                    chain.pop()
                    break
                if not (0 <= p < n):
                    raise ValueError(f"parent {p} of node {v} out of range")
                if depth[p] == -1:
                    raise ValueError(f"cycle through node {v}")
                v = p
            for u in reversed(chain):
                depth[u] = depth[parent[u]] + 1

        for v in range(n):
            resolve(v)
        self.parent = parent
        self.depth_of = tuple(depth)

    @property
    def n(self) -> int:
        return len(self.parent)

    @property
    def depth(self) -> int:
        return max(self.depth_of, default=0)

    def roots(self):
        return [v for v, p in enumerate(self.parent) if p is None]

    def children(self):
        """Per-node sorted child lists."""
        out = [[] for _ in range(self.n)]
        for v, p in enumerate(self.parent):
            if p is not None:
                out[p].append(v)
        return out

    def ancestors_of(self, v: int):
        """Path from v to its root, inclusive, nearest first."""
        chain = [v]
        while self.parent[chain[-1]] is not None:
            chain.append(self.parent[chain[-1]])
        return chain

    def ancestor_of(self, a: int, b: int) -> bool:
        """True iff a lies on the root path of b (reflexive)."""
        v = b
        da = self.depth_of[a]
        while self.depth_of[v] > da:
            v = self.parent[v]
        return v == a

    def __eq__(self, other):
        if not isinstance(other, RootedForest):
            return NotImplemented
        return self.parent == other.parent

    def __repr__(self):
        return f"RootedForest(n={self.n}, depth={self.depth})"


def serialize_forest(F: RootedForest) -> str:
    lines = []
    for v, p in enumerate(F.parent):
        lines.append(f"node {v} parent {'none' if p is None else p}")
    return "\n".join(lines) + "\n"


def parse_forest(text: str) -> RootedForest:
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4 or parts[0] != "node" or parts[2] != "parent":
            raise GraphFormatError(lineno, "expected 'node <v> parent <u|none>'")
        try:
            v = int(parts[1])
            p = None if parts[3] == "none" else int(parts[3])
        except ValueError:
            raise GraphFormatError(lineno, f"bad token in {line!r}") from None
        if v in entries:
            raise GraphFormatError(lineno, f"duplicate node {v}")
        entries[v] = p
    n = len(entries)
    if sorted(entries) != list(range(n)):
        raise GraphFormatError(1, "nodes must be exactly 0..n-1")
    return RootedForest([entries[v] for v in range(n)])


def check_separation_forest(G: Graph, F: RootedForest) -> bool:
    """True iff every edge of G joins an ancestor-descendant pair of F."""
    if F.n != G.n:
        raise ValueError("forest is not over V(G)")
    for u, v in G.edges():
        a, b = (u, v) if F.depth_of[u] <= F.depth_of[v] else (v, u)
        if not F.ancestor_of(a, b):
            return False
    return True


def dfs_forest(G: Graph, h: int):
    """DFS forest of a graph promised to have treedepth <= h.

    Levels are built in rounds: the frontier M consists of unplaced
    vertices adjacent to the previous level X, each remembering its
    smallest X-neighbor as parent; per component of the unplaced remainder
    the smallest M-vertex is placed.  Connectivity sweeps are BFS capped at
    2^h.  Returns (RootedForest, RoundLedger with the number of levels
    built); raises PromiseViolation if a round stalls, the depth limit
    2^h - 1 is hit with vertices unplaced, or the result fails the
    separation-forest check.
    """
    if h < 1:
        raise ValueError("h must be >= 1")
    n = G.n
    ledger = RoundLedger()
    if n == 0:
        ledger.add("dfs-levels", 0)
        return RootedForest([]), ledger
    cap = 2**h
    max_levels = cap - 1
    indptr, indices = G.csr()
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    placed = np.zeros(n, dtype=np.uint8)
    parent = [None] * n

    # Level 1: the smallest vertex of each component roots a tree.
    all_allowed = np.ones(n, dtype=np.uint8)
    seen = np.zeros(n, dtype=np.uint8)
    X = []
    for v in range(n):
        if seen[v]:
            continue
        count = _kernels.bfs_capped(indptr, indices, v, cap, all_allowed, dist, queue)
        for q in queue[:count]:
            seen[q] = 1
            dist[q] = -1
        X.append(v)
    for v in X:
        placed[v] = 1
    unplaced_count = n - len(X)
    levels = 1

    while unplaced_count > 0:
        if levels >= max_levels:
            raise PromiseViolation(
                f"promise violated: forest depth would reach {cap} with "
                f"{unplaced_count} vertices unplaced"
            )
        frontier_parent = {}
        for x in sorted(X):
            for w in G.neighbors(x):
                if not placed[w] and w not in frontier_parent:
                    frontier_parent[w] = x
        if not frontier_parent:
            raise PromiseViolation("promise violated: round stalled with no frontier")
        allowed = (1 - placed).astype(np.uint8)
        marked = np.zeros(n, dtype=np.uint8)
        Y = []
        for m in sorted(frontier_parent):
            if marked[m]:
                continue
            count = _kernels.bfs_capped(indptr, indices, m, cap, allowed, dist, queue)
            for q in queue[:count]:
                marked[q] = 1
                dist[q] = -1
            Y.append(m)
        for y in Y:
            parent[y] = frontier_parent[y]
            placed[y] = 1
        unplaced_count -= len(Y)
        X = Y
        levels += 1

    forest = RootedForest(parent)
    for v, p in enumerate(forest.parent):
        if p is not None and not G.has_edge(v, p):
            raise PromiseViolation("promise violated: parent edge missing from G")
    if not check_separation_forest(G, forest):
        raise PromiseViolation("promise violated: output is not a separation forest")
    ledger.add("dfs-levels", levels)
    return forest, ledger


def ancestor_closure(F: RootedForest, max_depth: int, ledger=None) -> np.ndarray:
    """Reflexive ancestor matrix anc[a, b] = (a is an ancestor of b),
    computed by repeatedly squaring the parent-or-self relation
    ceil(log2 max_depth) times."""
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    if F.depth > max_depth:
        raise ValueError(f"depth exceeds maxDepth: {F.depth} > {max_depth}")
    n = F.n
    A = np.eye(n, dtype=np.float32)
    for v, p in enumerate(F.parent):
        if p is not None:
            A[p, v] = 1.0
    rounds = (max_depth - 1).bit_length()
    for _ in range(rounds):
        A = (A @ A > 0.5).astype(np.float32)
    if ledger is not None:
        ledger.add("ancestor-closure", rounds)
    return A > 0.5


def treedepth_exact(G: Graph) -> int:
    """Exact treedepth by memoized vertex-deletion recursion; n <= 12."""
    if G.n > 12:
        raise ValueError("too large for exact oracle")
    if G.n == 0:
        return 0
    adj_mask = [0] * G.n
    for u, v in G.edges():
        adj_mask[u] |= 1 << v
        adj_mask[v] |= 1 << u
    memo = {}

    def comp_split(mask):
        comps = []
        rest = mask
        while rest:
            start = rest & -rest
            comp = start
            frontier = start
            while frontier:
                v = frontier & -frontier
                frontier &= frontier - 1
                grow = adj_mask[v.bit_length() - 1] & mask & ~comp
                comp |= grow
                frontier |= grow
            comps.append(comp)
            rest &= ~comp
        return comps

    def td(mask):
        count = bin(mask).count("1")
        if count <= 1:
            return count
        if mask in memo:
            return memo[mask]
        comps = comp_split(mask)
        if len(comps) > 1:
            out = max(td(c) for c in comps)
        else:
            out = count
            m = mask
            while m:
                v = m & -m
                m &= m - 1
                out = min(out, 1 + td(mask & ~v))
        memo[mask] = out
        return out

    return td((1 << G.n) - 1)


def low_treedepth_coloring(G: Graph, params: ClassParams, cfg: BconnConfig):
    """Coloring in which every union of i <= p color classes induces a
    subgraph of treedepth at most i.

    Pipeline: order the vertices by the admissibility decomposition at
    radius 2^p - 2 (radius 1 when p = 1), build the weak-reachability
    graph at that radius, and color it by the degenerate-graph pipeline at
    its measured degeneracy.  The radius guarantees that in any union of
    q <= p classes the smallest vertex of a connected subgraph sees every
    same-color repetition within weak-reachability range, which forces the
    treedepth bound class by class.
    """
    p, d = params.p, params.d
    radius = 1 if p == 1 else 2**p - 2
    sigma, ledger = wcol.wcol_ordering(G, ClassParams(r=radius, d=d, p=p), cfg)
    H = wcol.weak_reachability_graph(G, sigma, radius)
    _, d_used = degeneracy.greedy_degeneracy_ordering(H)
    coloring, led2 = degeneracy.color_degenerate(H, d_used)
    ledger.extend(led2)
    return coloring, ledger
