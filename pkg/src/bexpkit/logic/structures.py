"""Finite relational structures and brute-force formula evaluation."""

from __future__ import annotations

from .syntax import (
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
    Vocabulary,
    free_vars,
)
from ..graphs import Graph, GraphFormatError
from .._util import deep

__all__ = [
    "Structure",
    "parse_structure",
    "serialize_structure",
    "gaifman_graph",
    "naive_eval",
]


class Structure:
    """A finite universe 0..n-1 with named unary and binary relations."""

    __slots__ = ("n", "unary", "binary")

    def __init__(self, n: int,
                 unary: dict[str, frozenset[int]] | None = None,
                 binary: dict[str, frozenset[tuple[int, int]]] | None = None):
        if n < 0:
            raise ValueError("universe size must be nonnegative")
        self.n = n
        self.unary = {name: frozenset(vs) for name, vs in (unary or {}).items()}
        self.binary = {name: frozenset(ps) for name, ps in (binary or {}).items()}
        for name, vs in self.unary.items():
            for v in vs:
                if not 0 <= v < n:
                    raise ValueError(f"relation {name!r}: element {v} out of range")
        for name in self.binary:
            if name in self.unary:
                raise ValueError(f"relation {name!r} used with two arities")
            for u, v in self.binary[name]:
                if not (0 <= u < n and 0 <= v < n):
                    raise ValueError(f"relation {name!r}: pair ({u}, {v}) out of range")

    def vocabulary(self) -> Vocabulary:
        return Vocabulary(frozenset(self.unary), frozenset(self.binary))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Structure):
            return NotImplemented
        return (self.n == other.n and self.unary == other.unary
                and self.binary == other.binary)

    def __hash__(self) -> int:
        return hash((self.n,
                     tuple(sorted((k, tuple(sorted(v))) for k, v in self.unary.items())),
                     tuple(sorted((k, tuple(sorted(v))) for k, v in self.binary.items()))))

    def __repr__(self) -> str:
        return (f"Structure(n={self.n}, unary={sorted(self.unary)}, "
                f"binary={sorted(self.binary)})")


def parse_structure(text: str) -> Structure:
    n = None
    unary: dict[str, set[int]] = {}
    binary: dict[str, set[tuple[int, int]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "structure":
                if n is not None:
                    raise ValueError("duplicate structure header")
                n = int(parts[1])
            elif n is None:
                raise ValueError("first line must be 'structure <n>'")
            elif kind == "unary":
                name = parts[1]
                if name in unary or name in binary:
                    raise ValueError(f"duplicate relation {name!r}")
                unary[name] = {int(x) for x in parts[2:]}
                current = None
            elif kind == "binary":
                if len(parts) != 2:
                    raise ValueError("binary header takes exactly one name")
                name = parts[1]
                if name in unary or name in binary:
                    raise ValueError(f"duplicate relation {name!r}")
                binary[name] = set()
                current = name
            elif kind == "p":
                if current is None:
                    raise ValueError("'p' line outside a binary relation")
                if len(parts) != 3:
                    raise ValueError("'p' line takes two elements")
                binary[current].add((int(parts[1]), int(parts[2])))
            else:
                raise ValueError(f"unknown directive {kind!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError(lineno, str(exc) or "malformed line") from None
    if n is None:
        raise GraphFormatError(0, "missing 'structure <n>' header")
    try:
        return Structure(n,
                         {k: frozenset(v) for k, v in unary.items()},
                         {k: frozenset(v) for k, v in binary.items()})
    except ValueError as exc:
        raise GraphFormatError(0, str(exc)) from None


def serialize_structure(A: Structure) -> str:
    out = [f"structure {A.n}"]
    for name in sorted(A.unary):
        row = " ".join(str(v) for v in sorted(A.unary[name]))
        out.append(f"unary {name} {row}".rstrip())
    for name in sorted(A.binary):
        out.append(f"binary {name}")
        for u, v in sorted(A.binary[name]):
            out.append(f"p {u} {v}")
    return "\n".join(out) + "\n"


def gaifman_graph(A: Structure) -> Graph:
    """Vertices are the universe; u, v adjacent when some binary relation
    holds of (u, v) or (v, u) with u != v."""
    edges = set()
    for pairs in A.binary.values():
        for u, v in pairs:
            if u != v:
                edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(A.n, edges)


@deep
def naive_eval(A: Structure, phi: Formula,
               assignment: dict[str, int] | None = None) -> bool:
    """Direct recursive evaluation; exponential in quantifier depth.
    Only suitable as an oracle on small structures."""
    env = dict(assignment or {})
    missing = free_vars(phi) - env.keys()
    if missing:
        raise ValueError(f"unassigned free variables: {sorted(missing)}")
    for v, e in env.items():
        if not 0 <= e < A.n:
            raise ValueError(f"assignment for {v!r} out of range")

    def ev(node: Formula, env: dict[str, int]) -> bool:
        if isinstance(node, FTrue):
            return True
        if isinstance(node, FFalse):
            return False
        if isinstance(node, Atom):
            if len(node.args) == 1:
                rel = A.unary.get(node.rel)
                if rel is None:
                    raise ValueError(f"structure lacks unary relation {node.rel!r}")
                return env[node.args[0]] in rel
            rel2 = A.binary.get(node.rel)
            if rel2 is None:
                raise ValueError(f"structure lacks binary relation {node.rel!r}")
            return (env[node.args[0]], env[node.args[1]]) in rel2
        if isinstance(node, Eq):
            return env[node.left] == env[node.right]
        if isinstance(node, LcdAtom):
            raise ValueError("lcd atoms are not evaluable over plain structures")
        if isinstance(node, Not):
            return not ev(node.sub, env)
        if isinstance(node, And):
            return all(ev(s, env) for s in node.subs)
        if isinstance(node, Or):
            return any(ev(s, env) for s in node.subs)
        if isinstance(node, Exists):
            return any(ev(node.sub, {**env, node.var: e}) for e in range(A.n))
        if isinstance(node, Forall):
            return all(ev(node.sub, {**env, node.var: e}) for e in range(A.n))
        raise TypeError(f"not a formula node: {node!r}")

    return ev(phi, env)
