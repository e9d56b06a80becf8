"""Skeletons: labeled universes whose binary structure is a family of
bounded-depth forests, queried only through lca-depth atoms.

Forest membership is partial: an element can be a non-node of any given
forest (parent entry NON_NODE), a root (PARENT_ROOT), or a child.  The lcd
of a pair involving a non-node, or of nodes in different trees, is 0.
Every node automatically carries a depth marker label ``dep/<rel>/<m>`` so
that depths stay expressible after the forest itself is forgotten.
"""

from __future__ import annotations

import numpy as np

from .lcd import is_lcd_formula
from .._util import deep
from .structures import Structure
from .syntax import (
    FALSE,
    TRUE,
    And,
    Atom,
    Eq,
    Exists,
    FFalse,
    Forall,
    Formula,
    FTrue,
    LcdAtom,
    Not,
    Or,
    atom,
    eq,
    exists,
    free_vars,
    land,
    lcd,
    lnot,
    lor,
    prenexify,
)

__all__ = [
    "NON_NODE",
    "PARENT_ROOT",
    "Skeleton",
    "eval_lcd",
    "encode_substructure",
    "lcd_to_existential",
    "depth_label",
]

NON_NODE = -2
PARENT_ROOT = -1


def depth_label(rel: str, depth: int) -> str:
    return f"dep/{rel}/{depth}"


def _resolve_depths(parent: np.ndarray, rel: str, d: int) -> np.ndarray:
    n = len(parent)
    depth = np.zeros(n, dtype=np.int64)
    state = np.zeros(n, dtype=np.int8)  # 0 fresh, 1 on stack, 2 done
    for start in range(n):
        if state[start] == 2:
            continue
        chain = []
        v = start
        while True:
            if parent[v] == NON_NODE:
                depth[v] = 0
                state[v] = 2
                break
            if parent[v] == PARENT_ROOT:
                depth[v] = 1
                state[v] = 2
                break
            if state[v] == 2:
                break
            if state[v] == 1:
                raise ValueError(f"forest {rel!r} has a parent cycle through {v}")
            state[v] = 1
            chain.append(v)
            v = int(parent[v])
        for u in reversed(chain):
            p = int(parent[u])
            if depth[p] == 0:
                raise ValueError(f"forest {rel!r}: parent of {u} is a non-node")
            depth[u] = depth[p] + 1
            state[u] = 2
    dmax = int(depth.max(initial=0))
    if dmax > d:
        raise ValueError(f"forest {rel!r} has depth {dmax}, bound is {d}")
    return depth


class Skeleton:
    """n elements, label sets, and named parent-pointer forests of depth
    at most d."""

    __slots__ = ("n", "d", "labels", "forests", "depths")

    def __init__(self, n: int, labels, forests: dict, d: int):
        if d < 1:
            raise ValueError("depth bound must be positive")
        labels = tuple(frozenset(s) for s in labels)
        if len(labels) != n:
            raise ValueError("one label set per element required")
        self.n = n
        self.d = d
        self.forests = {}
        self.depths = {}
        for rel, parent in forests.items():
            arr = np.asarray(parent, dtype=np.int64)
            if arr.shape != (n,):
                raise ValueError(f"forest {rel!r} must assign every element")
            bad = (arr < NON_NODE) | (arr >= n)
            if bad.any():
                raise ValueError(f"forest {rel!r}: parent out of range")
            self.forests[rel] = arr
            self.depths[rel] = _resolve_depths(arr, rel, d)
        marked = []
        for v in range(n):
            extra = {depth_label(rel, int(self.depths[rel][v]))
                     for rel in self.forests if self.depths[rel][v] > 0}
            marked.append(labels[v] | extra)
        self.labels = tuple(marked)

    def depth_of(self, rel: str, v: int) -> int:
        return int(self.depths[rel][v])

    def ancestor_at(self, rel: str, v: int, depth: int) -> int | None:
        dv = int(self.depths[rel][v])
        if depth < 1 or depth > dv:
            return None
        parent = self.forests[rel]
        while dv > depth:
            v = int(parent[v])
            dv -= 1
        return v

    def lcd_value(self, rel: str, u: int, v: int) -> int:
        parent = self.forests[rel]
        depth = self.depths[rel]
        du, dv = int(depth[u]), int(depth[v])
        if du == 0 or dv == 0:
            return 0
        while du > dv:
            u = int(parent[u])
            du -= 1
        while dv > du:
            v = int(parent[v])
            dv -= 1
        while u != v:
            if parent[u] == PARENT_ROOT or parent[v] == PARENT_ROOT:
                return 0
            u, v, du = int(parent[u]), int(parent[v]), du - 1
        return du

    def label_universe(self) -> frozenset[str]:
        return frozenset().union(*self.labels) if self.labels else frozenset()

    def with_labels(self, labels) -> "Skeleton":
        return Skeleton(self.n, labels, self.forests, self.d)

    def add_labels(self, extra) -> "Skeleton":
        """Union per-element label sets into a new skeleton."""
        return self.with_labels(tuple(self.labels[v] | frozenset(extra[v])
                                      for v in range(self.n)))

    def to_structure(self) -> Structure:
        unary: dict[str, set[int]] = {}
        for v, ls in enumerate(self.labels):
            for c in ls:
                unary.setdefault(c, set()).add(v)
        binary = {}
        for rel, parent in self.forests.items():
            binary[rel] = frozenset((v, int(parent[v]))
                                    for v in range(self.n) if parent[v] >= 0)
        return Structure(self.n,
                         {c: frozenset(vs) for c, vs in unary.items()},
                         binary)

    def __repr__(self):
        return (f"Skeleton(n={self.n}, d={self.d}, "
                f"forests={sorted(self.forests)})")


@deep
def eval_lcd(B: Skeleton, phi: Formula,
             assignment: dict[str, int] | None = None) -> bool:
    """Evaluate a formula over a skeleton.  Unary atoms test labels,
    binary structure is reachable only through lcd atoms; quantifiers
    range over the whole universe."""
    env = dict(assignment or {})
    missing = free_vars(phi) - env.keys()
    if missing:
        raise ValueError(f"unassigned free variables: {sorted(missing)}")
    memo: dict[tuple, bool] = {}

    def ev(node: Formula, env: dict[str, int]) -> bool:
        key = (id(node), tuple(env[v] for v in sorted(free_vars(node))))
        got = memo.get(key)
        if got is not None:
            return got
        if isinstance(node, FTrue):
            val = True
        elif isinstance(node, FFalse):
            val = False
        elif isinstance(node, Atom):
            if len(node.args) != 1:
                raise ValueError("skeletons carry no plain binary relations")
            val = node.rel in B.labels[env[node.args[0]]]
        elif isinstance(node, Eq):
            val = env[node.left] == env[node.right]
        elif isinstance(node, LcdAtom):
            if node.rel not in B.forests:
                raise ValueError(f"skeleton lacks forest {node.rel!r}")
            val = B.lcd_value(node.rel, env[node.left],
                              env[node.right]) == node.value
        elif isinstance(node, Not):
            val = not ev(node.sub, env)
        elif isinstance(node, And):
            val = all(ev(s, env) for s in node.subs)
        elif isinstance(node, Or):
            val = any(ev(s, env) for s in node.subs)
        elif isinstance(node, Exists):
            val = any(ev(node.sub, {**env, node.var: e}) for e in range(B.n))
        elif isinstance(node, Forall):
            val = all(ev(node.sub, {**env, node.var: e}) for e in range(B.n))
        else:
            raise TypeError(f"not a formula node: {node!r}")
        memo[key] = val
        return val

    return ev(phi, env)


def encode_substructure(A: Structure, B: Skeleton, rel: str,
                        label_prefix: str = ""):
    """Push a structure's relations into skeleton labels along one forest.

    Requires every related pair of A to be vertical in B.forests[rel]
    (one endpoint an ancestor of the other).  Unary relations become
    labels of the same name.  A pair (u, v) with the shallower endpoint at
    depth i is recorded as label <prefix>enc/<R>/up<i> on u when v is the
    ancestor and <prefix>enc/<R>/dn<i> on v when u is; the prefix keeps
    encodings along different forests apart.  Returns (skeleton with the
    labels added, {R: builder}) where builder(x, y) is an lcd formula
    equivalent to R(x, y) over the relabeled skeleton.
    """
    if A.n != B.n:
        raise ValueError("structure and skeleton universes differ")
    extra: list[set[str]] = [set() for _ in range(B.n)]
    for name, members in A.unary.items():
        for v in members:
            extra[v].add(name)
    builders = {}
    for R, pairs in A.binary.items():
        for u, v in pairs:
            i = B.lcd_value(rel, u, v)
            du, dv = B.depth_of(rel, u), B.depth_of(rel, v)
            if i == 0 or (i != du and i != dv):
                raise ValueError(
                    f"pair ({u}, {v}) of {R!r} is not vertical in forest {rel!r}")
            if i == dv:
                extra[u].add(f"{label_prefix}enc/{R}/up{i}")
            else:
                extra[v].add(f"{label_prefix}enc/{R}/dn{i}")

        def builder(x: str, y: str, R: str = R) -> Formula:
            parts = []
            for i in range(1, B.d + 1):
                at = lcd(rel, i, x, y)
                parts.append(land(at, atom(depth_label(rel, i), y),
                                  atom(f"{label_prefix}enc/{R}/up{i}", x)))
                parts.append(land(at, atom(depth_label(rel, i), x),
                                  atom(f"{label_prefix}enc/{R}/dn{i}", y)))
            return lor(*parts)

        builders[R] = builder
    return B.add_labels(extra), builders


@deep
def lcd_to_existential(phi: Formula, d: int) -> Formula:
    """Compile an lcd formula over forest relations of depth <= d into an
    existential first-order formula over the raw parent edges plus labels.
    Sound over any structure shaped like Skeleton.to_structure output:
    R holds of (child, parent) and dep/<R>/<m> marks exact depths.
    """
    if not is_lcd_formula(phi):
        raise ValueError("not an lcd formula")
    counter = [0]
    used = set(free_vars(phi))

    def fresh() -> str:
        while True:
            name = f"w{counter[0]}"
            counter[0] += 1
            if name not in used:
                used.add(name)
                return name

    def chain(rel: str, top: str, var: str, m: int, i: int):
        """var sits at depth m and its depth-i ancestor is top; returns
        (new binder names, link atoms, name of the depth-(i+1) ancestor)."""
        if m == i:
            # the depth-i ancestor of a depth-i node is the node itself
            return [], [eq(var, top)], None
        names = [fresh() for _ in range(m - i - 1)]
        nodes = [top] + names + [var]
        links = [atom(rel, nodes[t + 1], nodes[t]) for t in range(len(nodes) - 1)]
        return names, links, nodes[1]

    def encode_eq(rel: str, i: int, x: str, y: str) -> Formula:
        return land(atom(depth_label(rel, i), x), atom(depth_label(rel, i), y),
                    eq(x, y))

    def positive(rel: str, i: int, x: str, y: str) -> Formula:
        if i == 0:
            off_x = land(*(lnot(atom(depth_label(rel, m), x)) for m in range(1, d + 1)))
            off_y = land(*(lnot(atom(depth_label(rel, m), y)) for m in range(1, d + 1)))
            split = []
            for mx in range(1, d + 1):
                for my in range(1, d + 1):
                    rx, ry = fresh(), fresh()
                    bx, lx, _ = chain(rel, rx, x, mx, 1)
                    by, ly, _ = chain(rel, ry, y, my, 1)
                    body = land(*lx, *ly, lnot(eq(rx, ry)),
                                atom(depth_label(rel, mx), x),
                                atom(depth_label(rel, my), y))
                    for v in reversed([rx, ry] + bx + by):
                        body = exists(v, body)
                    split.append(body)
            return lor(off_x, off_y, *split)
        parts = []
        for mx in range(i, d + 1):
            for my in range(i, d + 1):
                if mx == i and my == i:
                    if x == y:
                        parts.append(atom(depth_label(rel, i), x))
                    else:
                        parts.append(encode_eq(rel, i, x, y))
                    continue
                if x == y:
                    continue  # one node at two depths, or diverging from itself
                pins = [atom(depth_label(rel, mx), x), atom(depth_label(rel, my), y)]
                if mx == i:
                    names, links, _ = chain(rel, x, y, my, i)
                    body = land(*links, *pins)
                    for v in reversed(names):
                        body = exists(v, body)
                    parts.append(body)
                elif my == i:
                    names, links, _ = chain(rel, y, x, mx, i)
                    body = land(*links, *pins)
                    for v in reversed(names):
                        body = exists(v, body)
                    parts.append(body)
                else:
                    w = fresh()
                    nx, lx, below_x = chain(rel, w, x, mx, i)
                    ny, ly, below_y = chain(rel, w, y, my, i)
                    body = land(*lx, *ly, lnot(eq(below_x, below_y)), *pins)
                    for v in reversed([w] + nx + ny):
                        body = exists(v, body)
                    parts.append(body)
        return lor(*parts)

    def go(node: Formula, neg: bool) -> Formula:
        if isinstance(node, FTrue):
            return FALSE if neg else TRUE
        if isinstance(node, FFalse):
            return TRUE if neg else FALSE
        if isinstance(node, Atom):
            return lnot(node) if neg else node
        if isinstance(node, Not):
            return go(node.sub, not neg)
        if isinstance(node, And):
            parts = tuple(go(s, neg) for s in node.subs)
            return lor(*parts) if neg else land(*parts)
        if isinstance(node, Or):
            parts = tuple(go(s, neg) for s in node.subs)
            return land(*parts) if neg else lor(*parts)
        if isinstance(node, LcdAtom):
            if node.value > d:
                return TRUE if neg else FALSE  # depths never exceed the bound
            if not neg:
                return positive(node.rel, node.value, node.left, node.right)
            return lor(*(positive(node.rel, j, node.left, node.right)
                         for j in range(0, d + 1) if j != node.value))
        raise ValueError(f"not an lcd formula node: {node!r}")

    return prenexify(go(phi, False))
