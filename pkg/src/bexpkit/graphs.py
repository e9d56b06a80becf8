"""Graph substrate: immutable simple graphs, orderings, and the round ledger.

Vertices are dense integers 0..n-1.  Graphs are undirected and simple;
adjacency lists are kept sorted so every algorithm downstream is
deterministic under ascending-id tie-breaking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels

UNREACHED = -1
"""Distance value reported for vertices beyond the cap (or unreachable)."""


class GraphFormatError(ValueError):
    """Parse error in one of the line-based text formats; carries the
    1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class PromiseViolation(RuntimeError):
    """An input promise (degeneracy, density, or treedepth bound) was
    observed to fail during an algorithm run."""


class OracleOverflow(RuntimeError):
    """An exact oracle exceeded its configured size guard."""


class Graph:
    """Immutable simple undirected graph.

    Construct via :meth:`from_edges` or :func:`parse_graph`.  Instances are
    treated as immutable after construction; do not mutate the adjacency
    tuples.
    """

    __slots__ = ("n", "_adj", "_csr", "_m")

    def __init__(self, n: int, adj: tuple):
        self.n = n
        self._adj = adj
        self._csr = None
        self._m = sum(len(a) for a in adj) // 2

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        if n < 0:
            raise ValueError("vertex count must be >= 0")
        seen = set()
        lists = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                continue
            seen.add(key)
            lists[u].append(v)
            lists[v].append(u)
        return cls(n, tuple(tuple(sorted(a)) for a in lists))

    @property
    def m(self) -> int:
        return self._m

    def neighbors(self, v: int) -> tuple:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        a = self._adj[u]
        lo, hi = 0, len(a)
        while lo < hi:
            mid = (lo + hi) // 2
            if a[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(a) and a[lo] == v

    def edges(self):
        """Iterate edges as (u, v) with u < v, ascending."""
        for u in range(self.n):
            for v in self._adj[u]:
                if u < v:
                    yield (u, v)

    def csr(self):
        if self._csr is None:
            self._csr = _kernels.build_csr(self.n, self._adj)
        return self._csr

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._adj == other._adj

    def __hash__(self):
        return hash((self.n, self._adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def parse_graph(text: str) -> Graph:
    """Parse the line-based graph format.

    Format: header ``graph <n>``, then ``e <u> <v>`` lines.  ``#`` starts a
    comment; blank lines are ignored.  Edges are symmetrized and
    deduplicated.  Raises :class:`GraphFormatError` naming the offending
    line.
    """
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "graph" or len(parts) != 2:
                raise GraphFormatError(lineno, "expected header 'graph <n>'")
            try:
                n = int(parts[1])
            except ValueError:
                raise GraphFormatError(lineno, f"bad vertex count {parts[1]!r}") from None
            if n < 0:
                raise GraphFormatError(lineno, "vertex count must be >= 0")
            continue
        if parts[0] != "e" or len(parts) != 3:
            raise GraphFormatError(lineno, f"expected 'e <u> <v>', got {line!r}")
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise GraphFormatError(lineno, f"bad vertex id in {line!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(lineno, f"vertex id out of range in {line!r}")
        if u == v:
            raise GraphFormatError(lineno, f"self-loop at vertex {u}")
        edges.append((u, v))
    if n is None:
        raise GraphFormatError(1, "missing 'graph <n>' header")
    return Graph.from_edges(n, edges)


def serialize_graph(G: Graph) -> str:
    lines = [f"graph {G.n}"]
    lines.extend(f"e {u} {v}" for u, v in G.edges())
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class IdMap:
    """Vertex renaming produced by induced_subgraph: original id <-> sub id."""

    to_sub: dict
    to_orig: tuple

    def __len__(self):
        return len(self.to_orig)


def induced_subgraph(G: Graph, keep) -> tuple:
    """Subgraph induced by `keep`, plus the id map in both directions.

    Vertices of the subgraph are renumbered 0..|keep|-1 in ascending
    original id.  An empty `keep` yields the empty graph.
    """
    kept = sorted(set(keep))
    for v in kept:
        if not (0 <= v < G.n):
            raise ValueError(f"vertex {v} out of range")
    to_sub = {v: i for i, v in enumerate(kept)}
    lists = []
    for v in kept:
        lists.append(tuple(to_sub[w] for w in G.neighbors(v) if w in to_sub))
    sub = Graph(len(kept), tuple(lists))
    return sub, IdMap(to_sub=to_sub, to_orig=tuple(kept))


def _allowed_mask(G: Graph, allowed) -> np.ndarray:
    if allowed is None:
        return np.ones(G.n, dtype=np.uint8)
    mask = np.zeros(G.n, dtype=np.uint8)
    if callable(allowed):
        for v in range(G.n):
            if allowed(v):
                mask[v] = 1
    elif isinstance(allowed, np.ndarray) and allowed.dtype == bool:
        mask[allowed] = 1
    else:
        for v in allowed:
            mask[int(v)] = 1
    return mask


def bounded_distances(G: Graph, source: int, cap: int, allowed=None, ledger=None) -> np.ndarray:
    """BFS distances from `source`, restricted to `allowed` vertices and
    truncated at `cap`; vertices farther than `cap` get UNREACHED.

    `allowed` may be None (all), a vertex container, a boolean mask, or a
    predicate.  When a ledger is given, the phase cost ceil(log2(cap+1)) is
    recorded (the doubling depth such a distance computation needs).
    """
    if not (0 <= source < G.n):
        raise ValueError(f"source {source} out of range")
    if cap < 0:
        raise ValueError("cap must be >= 0")
    mask = _allowed_mask(G, allowed)
    if mask[source] == 0:
        raise ValueError("source vertex is not allowed")
    indptr, indices = G.csr()
    dist = np.full(G.n, UNREACHED, dtype=np.int64)
    queue = np.empty(G.n, dtype=np.int64)
    _kernels.bfs_capped(indptr, indices, source, cap, mask, dist, queue)
    if ledger is not None:
        ledger.add("bounded-distances", int(cap).bit_length())
    return dist


def components(G: Graph) -> np.ndarray:
    """Per-vertex component id; ids are assigned 0,1,... by ascending
    smallest member."""
    comp = np.full(G.n, -1, dtype=np.int64)
    if G.n == 0:
        return comp
    indptr, indices = G.csr()
    mask = np.ones(G.n, dtype=np.uint8)
    dist = np.full(G.n, -1, dtype=np.int64)
    queue = np.empty(G.n, dtype=np.int64)
    next_id = 0
    for v in range(G.n):
        if comp[v] >= 0:
            continue
        count = _kernels.bfs_capped(indptr, indices, v, G.n, mask, dist, queue)
        for q in queue[:count]:
            comp[q] = next_id
            dist[q] = -1
        next_id += 1
    return comp


class VertexOrdering:
    """A total order on the vertices: order[i] is the i-th (smallest)
    vertex, pos[v] its position."""

    __slots__ = ("order", "pos")

    def __init__(self, order):
        order = tuple(int(v) for v in order)
        n = len(order)
        pos = np.full(n, -1, dtype=np.int64)
        for i, v in enumerate(order):
            if not (0 <= v < n) or pos[v] >= 0:
                raise ValueError("ordering is not a permutation of 0..n-1")
            pos[v] = i
        self.order = order
        self.pos = pos

    def pos_of(self, v: int) -> int:
        return int(self.pos[v])

    def __len__(self):
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def __getitem__(self, i):
        return self.order[i]

    def __eq__(self, other):
        if not isinstance(other, VertexOrdering):
            return NotImplemented
        return self.order == other.order

    def __repr__(self):
        return f"VertexOrdering({list(self.order)!r})"


class BlockOrdering:
    """An ordered partition of the vertex set into blocks."""

    __slots__ = ("blocks", "block_index", "n")

    def __init__(self, blocks):
        blocks = tuple(tuple(sorted(int(v) for v in b)) for b in blocks)
        if not blocks:
            raise ValueError("block ordering needs at least one block")
        n = sum(len(b) for b in blocks)
        index = np.full(n, -1, dtype=np.int64)
        for i, block in enumerate(blocks):
            for v in block:
                if not (0 <= v < n) or index[v] >= 0:
                    raise ValueError("blocks do not partition 0..n-1")
                index[v] = i
        self.blocks = blocks
        self.block_index = index
        self.n = n

    def block_of(self, v: int) -> int:
        return int(self.block_index[v])

    def flatten(self) -> VertexOrdering:
        """Total order: blocks in order, ascending vertex id inside each."""
        order = []
        for block in self.blocks:
            order.extend(block)
        return VertexOrdering(order)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __eq__(self, other):
        if not isinstance(other, BlockOrdering):
            return NotImplemented
        return self.blocks == other.blocks

    def __repr__(self):
        return f"BlockOrdering({[list(b) for b in self.blocks]!r})"


def serialize_blocks(tau: BlockOrdering) -> str:
    lines = []
    for i, block in enumerate(tau.blocks):
        ids = " ".join(str(v) for v in block)
        lines.append(f"block {i}: {ids}")
    return "\n".join(lines) + "\n"


def parse_blocks(text: str) -> BlockOrdering:
    blocks = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "block" or len(parts) < 2 or not parts[1].endswith(":"):
            raise GraphFormatError(lineno, "expected 'block <idx>: <ids...>'")
        try:
            idx = int(parts[1][:-1])
            ids = [int(p) for p in parts[2:]]
        except ValueError:
            raise GraphFormatError(lineno, f"bad token in {line!r}") from None
        if idx != len(blocks):
            raise GraphFormatError(lineno, f"expected block index {len(blocks)}, got {idx}")
        blocks.append(ids)
    if not blocks:
        raise GraphFormatError(1, "no blocks found")
    return BlockOrdering(blocks)


class RoundLedger:
    """Append-only record of (phase name, round count) pairs.

    Each entry counts the while-loop iterations of one staged algorithm
    phase, so tests can compare observed round counts with the promised
    logarithmic bounds.
    """

    __slots__ = ("phases",)

    def __init__(self):
        self.phases = []

    def add(self, name: str, rounds: int):
        if rounds < 0:
            raise ValueError("round count must be >= 0")
        self.phases.append((name, int(rounds)))

    def extend(self, other: "RoundLedger"):
        self.phases.extend(other.phases)

    def rounds_of(self, name: str) -> int:
        """Total rounds recorded under phases with this exact name."""
        return sum(r for p, r in self.phases if p == name)

    def total(self) -> int:
        return sum(r for _, r in self.phases)

    def lines(self):
        return [f"phase {name} rounds {r}" for name, r in self.phases]

    def __iter__(self):
        return iter(self.phases)

    def __len__(self):
        return len(self.phases)

    def __repr__(self):
        return f"RoundLedger({self.phases!r})"


@dataclass(frozen=True)
class ClassParams:
    """Sparsity-class parameters carried by the decomposition algorithms.

    r is the radius, d the promised density bound for shallow minors at
    depth r-1, and p the treedepth-coloring parameter.
    """

    r: int = 1
    d: int = 1
    p: int = 1

    def __post_init__(self):
        if self.r < 1 or self.d < 1 or self.p < 1:
            raise ValueError("ClassParams requires r >= 1, d >= 1, p >= 1")
