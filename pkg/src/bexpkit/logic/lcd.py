"""Labeled forests of bounded depth and lowest-common-ancestor-depth logic.

A formula in this fragment is a boolean tree whose atoms either test a
label on a variable or test that the lca depth of two variables equals a
constant.  ``lcd(u, u)`` is the depth of ``u`` itself (roots have depth 1)
and ``lcd(u, v) = 0`` when the two nodes lie in different trees.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .syntax import (
    And,
    Atom,
    FFalse,
    Formula,
    FTrue,
    LcdAtom,
    Not,
    Or,
    atom,
    free_vars,
    land,
    lcd,
    lnot,
)
from ..treedepth import RootedForest
from .._util import deep

__all__ = [
    "LabeledForest",
    "is_lcd_formula",
    "eval_lcd_formula",
    "LcdType",
    "shape_from_delta",
    "lcd_types_enum",
    "lcd_normalize",
    "FOREST_REL",
]

# Single-forest formulas do not care which forest relation name their lcd
# atoms mention; this is the conventional one.
FOREST_REL = "f"


class LabeledForest:
    """A rooted forest of depth <= d whose nodes carry sets of labels."""

    __slots__ = ("forest", "labels")

    def __init__(self, forest: RootedForest, labels):
        labels = tuple(frozenset(s) for s in labels)
        if len(labels) != forest.n:
            raise ValueError("one label set per node required")
        self.forest = forest
        self.labels = labels

    @property
    def n(self) -> int:
        return self.forest.n

    @property
    def depth(self) -> int:
        return self.forest.depth

    def depth_of(self, v: int) -> int:
        return self.forest.depth_of[v]

    def ancestor_at(self, v: int, depth: int) -> int | None:
        """The node of the given depth on v's root path, if any."""
        dv = self.forest.depth_of[v]
        if depth > dv or depth < 1:
            return None
        while dv > depth:
            v = self.forest.parent[v]
            dv -= 1
        return v

    def lcd_value(self, u: int, v: int) -> int:
        du, dv = self.forest.depth_of[u], self.forest.depth_of[v]
        while du > dv:
            u = self.forest.parent[u]
            du -= 1
        while dv > du:
            v = self.forest.parent[v]
            dv -= 1
        while u != v:
            pu, pv = self.forest.parent[u], self.forest.parent[v]
            if pu is None or pv is None:
                return 0
            u, v, du = pu, pv, du - 1
        return du

    def label_universe(self) -> frozenset[str]:
        return frozenset().union(*self.labels) if self.labels else frozenset()

    def with_labels(self, labels) -> "LabeledForest":
        return LabeledForest(self.forest, labels)

    def __eq__(self, other):
        if not isinstance(other, LabeledForest):
            return NotImplemented
        return self.forest == other.forest and self.labels == other.labels

    def __repr__(self):
        return f"LabeledForest(n={self.n}, depth={self.depth})"


def is_lcd_formula(phi: Formula) -> bool:
    """Boolean combinations of unary label atoms and lcd atoms only."""
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, (FTrue, FFalse, LcdAtom)):
            continue
        if isinstance(node, Atom):
            if len(node.args) != 1:
                return False
            continue
        if isinstance(node, Not):
            stack.append(node.sub)
        elif isinstance(node, (And, Or)):
            stack.extend(node.subs)
        else:
            return False
    return True


@deep
def eval_lcd_formula(T: LabeledForest, phi: Formula,
                     assignment: dict[str, int]) -> bool:
    memo: dict[int, bool] = {}

    def ev(node: Formula) -> bool:
        got = memo.get(id(node))
        if got is not None:
            return got
        if isinstance(node, FTrue):
            val = True
        elif isinstance(node, FFalse):
            val = False
        elif isinstance(node, Atom):
            val = node.rel in T.labels[assignment[node.args[0]]]
        elif isinstance(node, LcdAtom):
            val = T.lcd_value(assignment[node.left],
                              assignment[node.right]) == node.value
        elif isinstance(node, Not):
            val = not ev(node.sub)
        elif isinstance(node, And):
            val = all(ev(s) for s in node.subs)
        elif isinstance(node, Or):
            val = any(ev(s) for s in node.subs)
        else:
            raise ValueError(f"not an lcd formula node: {node!r}")
        memo[id(node)] = val
        return val

    return ev(phi)


@dataclass(frozen=True)
class LcdType:
    """Complete description of a k-tuple over a labeled forest: exact label
    pattern per variable and exact lca depth per variable pair.  Two
    variables may name the same node, which shows as
    delta[i][j] == delta[i][i] == delta[j][j]."""

    labels: frozenset[str]
    gamma: tuple[frozenset[str], ...]
    delta: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.gamma)

    def merged_with(self, j: int) -> int | None:
        """Smallest i < j naming the same node as variable j, if any."""
        d = self.delta
        for i in range(j):
            if d[i][j] == d[i][i] == d[j][j]:
                return i
        return None

    def restrict(self, indices) -> "LcdType":
        idx = tuple(indices)
        return LcdType(
            self.labels,
            tuple(self.gamma[i] for i in idx),
            tuple(tuple(self.delta[i][j] for j in idx) for i in idx),
        )

    def formula(self, var_names, rel: str = FOREST_REL) -> Formula:
        """The characteristic lcd formula of this type."""
        names = tuple(var_names)
        if len(names) != self.k:
            raise ValueError(f"need {self.k} variable names, got {len(names)}")
        parts = []
        for i, x in enumerate(names):
            for c in sorted(self.labels):
                a = atom(c, x)
                parts.append(a if c in self.gamma[i] else lnot(a))
        for i in range(self.k):
            for j in range(i, self.k):
                parts.append(lcd(rel, self.delta[i][j], names[i], names[j]))
        return land(*parts)

    def matches(self, T: LabeledForest, nodes, labels=None) -> bool:
        """Does the node tuple realize this type?  Label patterns are read
        relative to this type's label universe."""
        universe = self.labels if labels is None else frozenset(labels)
        for i, v in enumerate(nodes):
            if T.labels[v] & universe != self.gamma[i]:
                return False
        for i in range(self.k):
            for j in range(i, self.k):
                if T.lcd_value(nodes[i], nodes[j]) != self.delta[i][j]:
                    return False
        return True


def shape_from_delta(delta, d: int) -> RootedForest | None:
    """Reconstruct a forest realizing the given lca-depth matrix with the
    variables as pairwise distinct nodes, or None when unsatisfiable.

    Node ids: variable i becomes node i; shared ancestors that are not
    variable nodes follow, ordered by (depth, smallest variable below).
    """
    delta = tuple(tuple(int(x) for x in row) for row in delta)
    k = len(delta)
    if any(len(row) != k for row in delta):
        raise ValueError("delta must be square")
    if d < 1:
        raise ValueError("depth bound must be positive")
    for i in range(k):
        for j in range(k):
            if delta[i][j] != delta[j][i]:
                raise ValueError("delta must be symmetric")
            if not 0 <= delta[i][j] <= d:
                raise ValueError(f"delta value {delta[i][j]} outside [0, {d}]")
    for i in range(k):
        if delta[i][i] < 1:
            return None
        for j in range(k):
            if i == j:
                continue
            if delta[i][j] > min(delta[i][i], delta[j][j]):
                return None  # an lca is never deeper than either node
            if delta[i][j] == delta[i][i] == delta[j][j]:
                return None  # both at their lca: the same node, not distinct
    # two smallest of any triple must agree, else no tree realizes it
    for i in range(k):
        for j in range(k):
            for l in range(k):
                if delta[i][j] < min(delta[i][l], delta[l][j]):
                    return None

    def cls(i: int, t: int) -> frozenset[int]:
        return frozenset(j for j in range(k)
                         if delta[j][j] >= t and delta[i][j] >= t)

    var_node = {i: (delta[i][i], cls(i, delta[i][i])) for i in range(k)}
    ids: dict[tuple[int, frozenset[int]], int] = {}
    for i in range(k):
        node = var_node[i]
        if node in ids:
            return None  # distinct variables collapsed onto one node
        ids[node] = i
    extra = sorted(
        {(t, cls(i, t)) for i in range(k) for t in range(1, delta[i][i])}
        - set(ids),
        key=lambda node: (node[0], min(node[1])),
    )
    for node in extra:
        ids[node] = len(ids)
    parent: list[int | None] = [None] * len(ids)
    for (t, c), v in ids.items():
        if t > 1:
            up = (t - 1, cls(min(c), t - 1))
            parent[v] = ids[up]
    return RootedForest(parent)


def _delta_realizable(delta, d: int) -> bool:
    """Realizability allowing repeated nodes: quotient variables that sit
    on one node, then ask for a forest over the representatives."""
    k = len(delta)
    for i in range(k):
        if not 1 <= delta[i][i] <= d:
            return False
    for i in range(k):
        for j in range(k):
            if i != j and delta[i][j] > min(delta[i][i], delta[j][j]):
                return False
            for l in range(k):
                if delta[i][j] < min(delta[i][l], delta[l][j]):
                    return False
    reps = []
    rep_of = {}
    for i in range(k):
        for r in reps:
            if delta[i][r] == delta[i][i] == delta[r][r]:
                rep_of[i] = r
                break
        else:
            rep_of[i] = i
            reps.append(i)
    sub = tuple(tuple(delta[i][j] for j in reps) for i in reps)
    return shape_from_delta(sub, d) is not None


def _merge_classes(delta) -> list[list[int]]:
    k = len(delta)
    classes: list[list[int]] = []
    for i in range(k):
        for c in classes:
            r = c[0]
            if delta[i][r] == delta[i][i] == delta[r][r]:
                c.append(i)
                break
        else:
            classes.append([i])
    return classes


_enum_cache: dict = {}


def lcd_types_enum(k: int, d: int, labels) -> tuple[LcdType, ...]:
    """All realizable lcd types of k-tuples over depth-d forests labeled
    from the given universe.  Deterministic order; cached."""
    labels = frozenset(labels)
    if k < 1:
        raise ValueError("need at least one variable")
    if d < 1:
        raise ValueError("depth bound must be positive")
    key = (k, d, labels)
    got = _enum_cache.get(key)
    if got is not None:
        return got

    lab_sorted = sorted(labels)
    subsets = []
    for bits in range(1 << len(lab_sorted)):
        subsets.append(frozenset(c for p, c in enumerate(lab_sorted) if bits >> p & 1))

    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    out = []
    for diag in itertools.product(range(1, d + 1), repeat=k):
        ranges = [range(min(diag[i], diag[j]) + 1) for i, j in pairs]
        for off in itertools.product(*ranges):
            delta = [[0] * k for _ in range(k)]
            for i in range(k):
                delta[i][i] = diag[i]
            for (i, j), v in zip(pairs, off):
                delta[i][j] = delta[j][i] = v
            delta = tuple(tuple(row) for row in delta)
            if not _delta_realizable(delta, d):
                continue
            classes = _merge_classes(delta)
            for gammas in itertools.product(subsets, repeat=k):
                if any(gammas[i] != gammas[c[0]] for c in classes for i in c[1:]):
                    continue  # one node cannot carry two label patterns
                out.append(LcdType(labels, gammas, delta))
    result = tuple(out)
    _enum_cache[key] = result
    return result


_normalize_cache: dict = {}


def lcd_normalize(phi: Formula, k: int, d: int, labels,
                  var_order=None) -> tuple[LcdType, ...]:
    """Rewrite an lcd formula as the disjunction of the complete types it
    admits.  Variables map to type positions via var_order (default: the
    sorted free variables, padded with placeholders up to k)."""
    if not is_lcd_formula(phi):
        raise ValueError("not an lcd formula")
    labels = frozenset(labels)
    fv = sorted(free_vars(phi))
    if var_order is None:
        if len(fv) > k:
            raise ValueError(f"{len(fv)} free variables but k = {k}")
        pads = []
        i = 0
        while len(fv) + len(pads) < k:
            name = f"_pad{i}"
            if name not in fv:
                pads.append(name)
            i += 1
        var_order = tuple(fv) + tuple(pads)
    else:
        var_order = tuple(var_order)
        if len(var_order) != k:
            raise ValueError(f"var_order must list exactly {k} names")
        if not set(fv) <= set(var_order):
            raise ValueError("var_order misses free variables of the formula")
    key = (id(phi), k, d, labels, var_order)
    got = _normalize_cache.get(key)
    if got is not None:
        return got

    index = {x: i for i, x in enumerate(var_order)}

    def ev(node: Formula, typ: LcdType) -> bool:
        if isinstance(node, FTrue):
            return True
        if isinstance(node, FFalse):
            return False
        if isinstance(node, Atom):
            if node.rel not in labels:
                raise ValueError(f"label {node.rel!r} outside the given universe")
            return node.rel in typ.gamma[index[node.args[0]]]
        if isinstance(node, LcdAtom):
            return typ.delta[index[node.left]][index[node.right]] == node.value
        if isinstance(node, Not):
            return not ev(node.sub, typ)
        if isinstance(node, And):
            return all(ev(s, typ) for s in node.subs)
        if isinstance(node, Or):
            return any(ev(s, typ) for s in node.subs)
        raise ValueError(f"not an lcd formula node: {node!r}")

    result = tuple(t for t in lcd_types_enum(k, d, labels) if ev(phi, t))
    _normalize_cache[key] = result
    return result
