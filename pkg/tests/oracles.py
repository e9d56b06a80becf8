"""Brute-force reference implementations.

Everything here recomputes answers from first principles over plain
adjacency lists or parent arrays, independently of the package's
algorithms and data layouts.  Tests feed both sides the same instance
and compare.  All routines are exponential or cubic and meant for tiny
inputs only.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np


def adjacency(G) -> list[set[int]]:
    """Package Graph -> plain list of neighbor sets."""
    return [set(G.neighbors(v)) for v in range(G.n)]


def bfs_distances(adj, source, allowed=None):
    """Plain BFS; unreachable vertices get None."""
    n = len(adj)
    ok = (lambda v: True) if allowed is None else (lambda v: v in allowed)
    dist = [None] * n
    if not ok(source):
        return dist
    dist[source] = 0
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if dist[v] is None and ok(v):
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


def brute_degeneracy(adj) -> int:
    """Max over elimination steps of the current minimum degree."""
    alive = {v for v in range(len(adj))}
    deg = {v: len(adj[v]) for v in alive}
    worst = 0
    while alive:
        v = min(alive, key=lambda u: (deg[u], u))
        worst = max(worst, deg[v])
        alive.remove(v)
        for u in adj[v]:
            if u in alive:
                deg[u] -= 1
    return worst


def ordering_degeneracy(adj, order) -> int:
    """Largest number of earlier neighbors under the given total order."""
    pos = {v: i for i, v in enumerate(order)}
    return max((sum(1 for u in adj[v] if pos[u] < pos[v]) for v in order),
               default=0)


def elimination_threshold(adj, c) -> bool:
    """Does repeatedly deleting degree-<=c vertices empty the graph?"""
    alive = set(range(len(adj)))
    deg = {v: len(adj[v]) for v in alive}
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            if deg[v] <= c:
                alive.remove(v)
                for u in adj[v]:
                    if u in alive:
                        deg[u] -= 1
                changed = True
    return not alive


def is_proper(adj, color) -> bool:
    return all(color[u] != color[v]
               for u in range(len(adj)) for v in adj[u] if u < v)


def brute_wreach(adj, order, v, r) -> set[int]:
    """Weak reachability by its definition: u is weakly r-reachable from
    v when some path of length <= r from v to u never visits a vertex
    placed before u."""
    pos = {w: i for i, w in enumerate(order)}
    out = set()
    for u in range(len(adj)):
        if pos[u] > pos[v]:
            continue
        allowed = {w for w in range(len(adj)) if pos[w] >= pos[u]}
        dist = bfs_distances(adj, v, allowed)
        if dist[u] is not None and dist[u] <= r:
            out.add(u)
    return out


def brute_treedepth(adj) -> int:
    """td(G) = 1 + min over v of td(G - v), split over components."""
    n = len(adj)
    masks = [sum(1 << u for u in adj[v]) for v in range(n)]

    @lru_cache(maxsize=None)
    def td(mask: int) -> int:
        if mask == 0:
            return 0
        comps = []
        seen = 0
        m = mask
        while m:
            v = (m & -m).bit_length() - 1
            comp = 1 << v
            frontier = comp
            while frontier:
                grow = 0
                f = frontier
                while f:
                    u = (f & -f).bit_length() - 1
                    f &= f - 1
                    grow |= masks[u] & mask & ~comp
                comp |= grow
                frontier = grow
            comps.append(comp)
            seen |= comp
            m = mask & ~seen
        if len(comps) > 1:
            return max(td(c) for c in comps)
        best = n
        m = mask
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            best = min(best, td(mask & ~(1 << v)))
        return 1 + best

    return td((1 << n) - 1)


def bounded_paths(adj, S, u, r):
    """All simple paths of length <= r from u to S - {u} whose internal
    vertices avoid S, reported as vertex tuples starting at u."""
    S = set(S)
    out = []

    def grow(path):
        last = path[-1]
        for w in sorted(adj[last]):
            if w in path:
                continue
            if w in S and w != u:
                out.append(path + (w,))
            elif w not in S and len(path) < r:
                grow(path + (w,))

    if r >= 1:
        grow((u,))
    return out


def brute_bconn(adj, S, u, r) -> int:
    """Maximum family of the above paths pairwise sharing only u."""
    paths = bounded_paths(adj, S, u, r)
    bodies = [frozenset(p[1:]) for p in paths]
    bodies = sorted(set(bodies), key=sorted)
    best = 0

    def extend(i, used, count):
        nonlocal best
        best = max(best, count)
        if count + (len(bodies) - i) <= best:
            return
        for j in range(i, len(bodies)):
            if not (bodies[j] & used):
                extend(j + 1, used | bodies[j], count + 1)

    extend(0, frozenset(), 0)
    return best


def brute_adm(adj, order, r) -> int:
    """Exact r-admissibility: per vertex, back-connectivity into the set
    of vertices placed no later than it."""
    worst = 0
    for i, v in enumerate(order):
        prefix = set(order[:i + 1])
        worst = max(worst, brute_bconn(adj, prefix, v, r))
    return worst


def brute_domset(adj, r) -> int:
    """Smallest distance-r dominating set by subset enumeration."""
    n = len(adj)
    balls = []
    for v in range(n):
        dist = bfs_distances(adj, v)
        balls.append(sum(1 << u for u in range(n)
                         if dist[u] is not None and dist[u] <= r))
    full = (1 << n) - 1
    for size in range(0, n + 1):
        for combo in itertools.combinations(range(n), size):
            cover = 0
            for v in combo:
                cover |= balls[v]
            if cover == full:
                return size
    return n


def forest_depth_lcd(parent):
    """Per-node depth and pairwise common-ancestor counts of a forest
    given as a parent list (None marks roots)."""
    n = len(parent)
    chains = []
    for v in range(n):
        chain = []
        w = v
        while w is not None:
            chain.append(w)
            w = parent[w]
        chains.append(frozenset(chain))
    depth = np.array([len(c) for c in chains], dtype=np.int64)
    lcd = np.zeros((n, n), dtype=np.int64)
    for u in range(n):
        for v in range(u, n):
            lcd[u, v] = lcd[v, u] = len(chains[u] & chains[v])
    return depth, lcd


def type_tensor(typ, parent, node_labels) -> np.ndarray:
    """Boolean tensor of shape (n,)*k marking the tuples that realize an
    exact label-and-lca-depth description over the given forest."""
    n = len(parent)
    depth, lcd = forest_depth_lcd(parent)
    k = typ.k
    out = np.ones((n,) * k, dtype=bool)
    for i in range(k):
        shape = [1] * k
        shape[i] = n
        fits = np.array([(node_labels[v] & typ.labels) == typ.gamma[i]
                         for v in range(n)])
        out &= fits.reshape(shape)
        out &= (depth == typ.delta[i][i]).reshape(shape)
    for i in range(k):
        for j in range(i + 1, k):
            shape = [1] * k
            shape[i] = shape[j] = n
            axes = sorted((i, j))
            mat = lcd if axes == [i, j] else lcd.T
            out &= (mat == typ.delta[i][j]).reshape(shape)
    return out


def lcd_tensor(f, xs, n, node_labels, lcd_by_rel, depth_by_rel) -> np.ndarray:
    """Evaluate a quantifier-free lcd formula on every tuple at once.

    `xs` fixes the axis order; atoms over other variables are an error.
    Implements the semantics directly: a unary atom is a label test, an
    lcd atom compares the common-ancestor count in the named forest
    against its value, equality is the identity relation.
    """
    from bexpkit.logic import And, Atom, Eq, FALSE, LcdAtom, Not, Or, TRUE

    k = len(xs)
    axis = {x: i for i, x in enumerate(xs)}

    def shaped(vec, i):
        shape = [1] * k
        shape[i] = n
        return vec.reshape(shape)

    def rec(node) -> np.ndarray:
        if node is TRUE:
            return np.ones((1,) * k, dtype=bool)
        if node is FALSE:
            return np.zeros((1,) * k, dtype=bool)
        if isinstance(node, Atom):
            (x,) = node.args
            vec = np.array([node.rel in node_labels[v] for v in range(n)])
            return shaped(vec, axis[x])
        if isinstance(node, Eq):
            i, j = axis[node.left], axis[node.right]
            if i == j:
                return np.ones((1,) * k, dtype=bool)
            shape = [1] * k
            shape[i] = shape[j] = n
            eye = np.eye(n, dtype=bool)
            return (eye if i < j else eye.T).reshape(shape)
        if isinstance(node, LcdAtom):
            lcd = lcd_by_rel[node.rel]
            i, j = axis[node.left], axis[node.right]
            if i == j:
                return shaped(depth_by_rel[node.rel] == node.value, i)
            shape = [1] * k
            shape[i] = shape[j] = n
            mat = lcd if i < j else lcd.T
            return (mat == node.value).reshape(shape)
        if isinstance(node, Not):
            return ~rec(node.sub)
        if isinstance(node, And):
            out = np.ones((1,) * k, dtype=bool)
            for s in node.subs:
                out = out & rec(s)
            return out
        if isinstance(node, Or):
            out = np.zeros((1,) * k, dtype=bool)
            for s in node.subs:
                out = out | rec(s)
            return out
        raise TypeError(f"not a quantifier-free lcd formula: {node!r}")

    return np.broadcast_to(rec(f), (n,) * k)


def eval_gates(gates, output):
    """Per-gate values of an input-free circuit by topological sweep."""
    value = {}
    indeg = {g: len(ins) for g, (_, ins) in gates.items()}
    consumers = {g: [] for g in gates}
    for g, (_, ins) in gates.items():
        for i in ins:
            consumers[i].append(g)
    ready = [g for g, d in indeg.items() if d == 0]
    while ready:
        g = ready.pop()
        kind, ins = gates[g]
        vals = [value[i] for i in ins]
        if kind == "TRUE":
            value[g] = True
        elif kind == "FALSE":
            value[g] = False
        elif kind == "AND":
            value[g] = all(vals)
        elif kind == "OR":
            value[g] = any(vals)
        elif kind == "NOT":
            value[g] = not vals[0]
        else:
            raise ValueError(f"unassigned gate kind {kind}")
        for c in consumers[g]:
            indeg[c] -= 1
            if indeg[c] == 0:
                ready.append(c)
    if len(value) != len(gates):
        raise ValueError("cycle in circuit")
    return value
