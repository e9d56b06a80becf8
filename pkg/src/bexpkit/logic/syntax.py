"""First-order formulas over finite relational vocabularies.

The AST is hash-consed: constructors intern nodes, so structurally equal
formulas are the same object and ``==`` / ``hash`` are O(1).  All rewriting
stages downstream lean on this for DAG sharing, which is why the node
classes use identity equality (``eq=False``) and must never be mutated.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator
from .._util import deep

__all__ = [
    "Vocabulary",
    "Formula",
    "FTrue",
    "FFalse",
    "Atom",
    "Eq",
    "LcdAtom",
    "Not",
    "And",
    "Or",
    "Exists",
    "Forall",
    "TRUE",
    "FALSE",
    "atom",
    "eq",
    "lcd",
    "lnot",
    "land",
    "lor",
    "exists",
    "forall",
    "free_vars",
    "subformulas",
    "substitute",
    "FormulaParseError",
    "parse_formula",
    "serialize_formula",
    "prenexify",
    "prenex_decompose",
]


@dataclass(frozen=True)
class Vocabulary:
    """Relation symbols split by arity.  Names must not overlap."""

    unary: frozenset[str]
    binary: frozenset[str]

    def __post_init__(self) -> None:
        clash = self.unary & self.binary
        if clash:
            raise ValueError(f"relation used with two arities: {sorted(clash)}")

    @staticmethod
    def make(unary=(), binary=()) -> "Vocabulary":
        return Vocabulary(frozenset(unary), frozenset(binary))

    def arity(self, name: str) -> int | None:
        if name in self.unary:
            return 1
        if name in self.binary:
            return 2
        return None


# ---------------------------------------------------------------------------
# AST nodes.  eq=False keeps identity semantics; interning supplies
# structural sharing.


@dataclass(frozen=True, eq=False)
class Formula:
    __slots__ = ()


@dataclass(frozen=True, eq=False)
class FTrue(Formula):
    __slots__ = ()


@dataclass(frozen=True, eq=False)
class FFalse(Formula):
    __slots__ = ()


@dataclass(frozen=True, eq=False)
class Atom(Formula):
    __slots__ = ("rel", "args")
    rel: str
    args: tuple[str, ...]


@dataclass(frozen=True, eq=False)
class Eq(Formula):
    __slots__ = ("left", "right")
    left: str
    right: str


@dataclass(frozen=True, eq=False)
class LcdAtom(Formula):
    """Asserts that the lowest common ancestor depth of ``left`` and
    ``right`` in forest relation ``rel`` equals ``value`` exactly."""

    __slots__ = ("rel", "value", "left", "right")
    rel: str
    value: int
    left: str
    right: str


@dataclass(frozen=True, eq=False)
class Not(Formula):
    __slots__ = ("sub",)
    sub: Formula


@dataclass(frozen=True, eq=False)
class And(Formula):
    __slots__ = ("subs",)
    subs: tuple[Formula, ...]


@dataclass(frozen=True, eq=False)
class Or(Formula):
    __slots__ = ("subs",)
    subs: tuple[Formula, ...]


@dataclass(frozen=True, eq=False)
class Exists(Formula):
    __slots__ = ("var", "sub")
    var: str
    sub: Formula


@dataclass(frozen=True, eq=False)
class Forall(Formula):
    __slots__ = ("var", "sub")
    var: str
    sub: Formula


_intern: dict = {}


def _mk(cls, *fields):
    key = (cls, fields)
    node = _intern.get(key)
    if node is None:
        node = cls(*fields)
        _intern[key] = node
    return node


TRUE: FTrue = _mk(FTrue)
FALSE: FFalse = _mk(FFalse)


def atom(rel: str, *args: str) -> Atom:
    if not 1 <= len(args) <= 2:
        raise ValueError(f"atom arity must be 1 or 2, got {len(args)}")
    return _mk(Atom, rel, tuple(args))


def eq(left: str, right: str) -> Formula:
    if left == right:
        return TRUE
    return _mk(Eq, left, right)


def lcd(rel: str, value: int, left: str, right: str) -> LcdAtom:
    if value < 0:
        raise ValueError("lcd depth is never negative")
    return _mk(LcdAtom, rel, value, left, right)


def lnot(f: Formula) -> Formula:
    if f is TRUE:
        return FALSE
    if f is FALSE:
        return TRUE
    if isinstance(f, Not):
        return f.sub
    return _mk(Not, f)


def _assoc(cls, absorb, unit, fs) -> Formula:
    flat: list[Formula] = []
    seen: set[int] = set()
    for f in fs:
        if f is unit:
            continue
        if f is absorb:
            return absorb
        parts = f.subs if isinstance(f, cls) else (f,)
        for p in parts:
            if id(p) not in seen:
                seen.add(id(p))
                flat.append(p)
    if not flat:
        return unit
    if len(flat) == 1:
        return flat[0]
    return _mk(cls, tuple(flat))


def land(*fs: Formula) -> Formula:
    return _assoc(And, FALSE, TRUE, fs)


def lor(*fs: Formula) -> Formula:
    return _assoc(Or, TRUE, FALSE, fs)


def exists(var: str, f: Formula) -> Formula:
    if f is TRUE or f is FALSE:
        return f
    return _mk(Exists, var, f)


def forall(var: str, f: Formula) -> Formula:
    if f is TRUE or f is FALSE:
        return f
    return _mk(Forall, var, f)


_free_cache: dict[int, frozenset[str]] = {}


def free_vars(f: Formula) -> frozenset[str]:
    got = _free_cache.get(id(f))
    if got is not None:
        return got
    if isinstance(f, (FTrue, FFalse)):
        out = frozenset()
    elif isinstance(f, Atom):
        out = frozenset(f.args)
    elif isinstance(f, Eq):
        out = frozenset((f.left, f.right))
    elif isinstance(f, LcdAtom):
        out = frozenset((f.left, f.right))
    elif isinstance(f, Not):
        out = free_vars(f.sub)
    elif isinstance(f, (And, Or)):
        out = frozenset().union(*(free_vars(s) for s in f.subs))
    elif isinstance(f, (Exists, Forall)):
        out = free_vars(f.sub) - {f.var}
    else:
        raise TypeError(f"not a formula node: {f!r}")
    _free_cache[id(f)] = out
    return out


def subformulas(f: Formula) -> Iterator[Formula]:
    """Each distinct node once, children before parents."""
    seen: set[int] = set()
    stack = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in seen:
            continue
        if expanded:
            seen.add(id(node))
            yield node
            continue
        stack.append((node, True))
        if isinstance(node, Not):
            stack.append((node.sub, False))
        elif isinstance(node, (And, Or)):
            stack.extend((s, False) for s in node.subs)
        elif isinstance(node, (Exists, Forall)):
            stack.append((node.sub, False))


def substitute(f: Formula, mapping: dict[str, str]) -> Formula:
    """Rename free variables.  Targets must not be captured by a binder."""
    if not mapping:
        return f
    memo: dict[tuple[int, tuple], Formula] = {}

    def go(node: Formula, m: tuple[tuple[str, str], ...]) -> Formula:
        if not m:
            return node
        key = (id(node), m)
        got = memo.get(key)
        if got is not None:
            return got
        md = dict(m)
        if isinstance(node, (FTrue, FFalse)):
            out = node
        elif isinstance(node, Atom):
            out = atom(node.rel, *(md.get(a, a) for a in node.args))
        elif isinstance(node, Eq):
            out = eq(md.get(node.left, node.left), md.get(node.right, node.right))
        elif isinstance(node, LcdAtom):
            out = lcd(node.rel, node.value,
                      md.get(node.left, node.left), md.get(node.right, node.right))
        elif isinstance(node, Not):
            out = lnot(go(node.sub, m))
        elif isinstance(node, And):
            out = land(*(go(s, m) for s in node.subs))
        elif isinstance(node, Or):
            out = lor(*(go(s, m) for s in node.subs))
        elif isinstance(node, (Exists, Forall)):
            inner = tuple((a, b) for a, b in m if a != node.var)
            if any(b == node.var for _, b in inner):
                raise ValueError(f"substitution would capture {node.var!r}")
            sub = go(node.sub, inner)
            out = exists(node.var, sub) if isinstance(node, Exists) else forall(node.var, sub)
        else:
            raise TypeError(f"not a formula node: {node!r}")
        memo[key] = out
        return out

    items = tuple(sorted((a, b) for a, b in mapping.items() if a != b))
    return go(f, items)


# ---------------------------------------------------------------------------
# Parsing


class FormulaParseError(ValueError):
    def __init__(self, pos: int, message: str):
        super().__init__(f"at position {pos}: {message}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([().,|&!=])|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            break
        if m.group(3):
            raise FormulaParseError(m.start(3), f"unexpected character {m.group(3)!r}")
        if m.group(1):
            toks.append(("name", m.group(1), m.start(1)))
        elif m.group(2):
            toks.append(("sym", m.group(2), m.start(2)))
        i = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, vocab: Vocabulary):
        self.toks = _tokenize(text)
        self.vocab = vocab
        self.i = 0

    def peek(self, ahead: int = 0):
        j = min(self.i + ahead, len(self.toks) - 1)
        return self.toks[j]

    def take(self) -> tuple[str, str, int]:
        t = self.toks[self.i]
        if t[0] != "end":
            self.i += 1
        return t

    def expect(self, value: str) -> None:
        kind, val, pos = self.take()
        if val != value:
            raise FormulaParseError(pos, f"expected {value!r}, found {val or 'end of input'!r}")

    def formula(self) -> Formula:
        kind, val, pos = self.peek()
        if kind == "name" and val in ("E", "A"):
            k2, v2, _ = self.peek(1)
            k3, v3, _ = self.peek(2)
            if k2 == "name" and v3 == ".":
                self.take()
                _, var, _ = self.take()
                self.expect(".")
                body = self.formula()
                return exists(var, body) if val == "E" else forall(var, body)
        return self.disj()

    def disj(self) -> Formula:
        parts = [self.conj()]
        while self.peek()[1] == "|":
            self.take()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else _mk(Or, tuple(parts))

    def conj(self) -> Formula:
        parts = [self.lit()]
        while self.peek()[1] == "&":
            self.take()
            parts.append(self.lit())
        return parts[0] if len(parts) == 1 else _mk(And, tuple(parts))

    def lit(self) -> Formula:
        kind, val, pos = self.peek()
        if val == "!":
            self.take()
            return lnot(self.lit())
        if val == "(":
            self.take()
            f = self.formula()
            self.expect(")")
            return f
        if kind != "name":
            raise FormulaParseError(pos, f"expected an atom, found {val or 'end of input'!r}")
        self.take()
        nxt = self.peek()
        if nxt[1] == "(":
            return self.atom_tail(val, pos)
        if nxt[1] == "=":
            self.take()
            k2, v2, p2 = self.take()
            if k2 != "name":
                raise FormulaParseError(p2, "expected a variable after '='")
            return _mk(Eq, val, v2) if val != v2 else TRUE
        raise FormulaParseError(pos, f"dangling name {val!r}; expected '(' or '='")

    def atom_tail(self, rel: str, pos: int) -> Formula:
        self.expect("(")
        args = []
        while True:
            k, v, p = self.take()
            if k != "name":
                raise FormulaParseError(p, "expected a variable name")
            args.append(v)
            k, v, p = self.take()
            if v == ")":
                break
            if v != ",":
                raise FormulaParseError(p, f"expected ',' or ')', found {v or 'end of input'!r}")
        want = self.vocab.arity(rel)
        if want is None:
            raise FormulaParseError(pos, f"unknown relation {rel!r}")
        if want != len(args):
            raise FormulaParseError(
                pos, f"relation {rel!r} has arity {want}, got {len(args)} arguments")
        return atom(rel, *args)


def parse_formula(text: str, vocab: Vocabulary) -> Formula:
    p = _Parser(text, vocab)
    f = p.formula()
    kind, val, pos = p.peek()
    if kind != "end":
        raise FormulaParseError(pos, f"trailing input {val!r}")
    return f


def serialize_formula(f: Formula) -> str:
    def prec(node: Formula) -> int:
        if isinstance(node, (Exists, Forall)):
            return 0
        if isinstance(node, Or):
            return 1
        if isinstance(node, And):
            return 2
        return 3

    def go(node: Formula, ctx: int) -> str:
        if isinstance(node, FTrue):
            return "true()"
        if isinstance(node, FFalse):
            return "false()"
        if isinstance(node, Atom):
            return f"{node.rel}({', '.join(node.args)})"
        if isinstance(node, Eq):
            return f"{node.left} = {node.right}"
        if isinstance(node, LcdAtom):
            return f"lcd[{node.rel},{node.value}]({node.left}, {node.right})"
        if isinstance(node, Not):
            return "!" + go(node.sub, 3)
        if isinstance(node, (And, Or)):
            sep = " & " if isinstance(node, And) else " | "
            mine = prec(node)
            body = sep.join(go(s, mine + 1) for s in node.subs)
            return f"({body})" if mine < ctx else body
        if isinstance(node, (Exists, Forall)):
            q = "E" if isinstance(node, Exists) else "A"
            body = f"{q} {node.var}. {go(node.sub, 0)}"
            return f"({body})" if ctx > 0 else body
        raise TypeError(f"not a formula node: {node!r}")

    return go(f, 0)


# ---------------------------------------------------------------------------
# Prenex forms


def _is_quantifier_free(f: Formula) -> bool:
    return not any(isinstance(s, (Exists, Forall)) for s in subformulas(f))


def _rectify(f: Formula, avoid=()) -> Formula:
    """Rename binders so they are pairwise distinct and disjoint from the
    free variables plus `avoid`.  After this, quantifiers can be hoisted
    naively."""
    taken = set(free_vars(f)) | set(avoid)

    def fresh(name: str) -> str:
        if name not in taken:
            taken.add(name)
            return name
        n = 1
        while f"{name}~{n}" in taken:
            n += 1
        taken.add(f"{name}~{n}")
        return f"{name}~{n}"

    def ren(var: str, env: dict[str, str]) -> str:
        return env.get(var, var)

    def go(node: Formula, env: dict[str, str]) -> Formula:
        if isinstance(node, (FTrue, FFalse)):
            return node
        if isinstance(node, Atom):
            return atom(node.rel, *(ren(a, env) for a in node.args))
        if isinstance(node, Eq):
            return eq(ren(node.left, env), ren(node.right, env))
        if isinstance(node, LcdAtom):
            return lcd(node.rel, node.value, ren(node.left, env), ren(node.right, env))
        if isinstance(node, Not):
            return lnot(go(node.sub, env))
        if isinstance(node, And):
            return land(*(go(s, env) for s in node.subs))
        if isinstance(node, Or):
            return lor(*(go(s, env) for s in node.subs))
        if isinstance(node, (Exists, Forall)):
            name = fresh(node.var)
            sub = go(node.sub, {**env, node.var: name})
            return exists(name, sub) if isinstance(node, Exists) else forall(name, sub)
        raise TypeError(f"not a formula node: {node!r}")

    return go(f, {})


@deep
def prenexify(f: Formula) -> Formula:
    """Hoist existential quantifiers out of a positive boolean combination
    of existential blocks, renaming binders apart as needed."""

    def go(node: Formula) -> tuple[list[str], Formula]:
        if isinstance(node, Exists):
            binders, matrix = go(node.sub)
            return [node.var] + binders, matrix
        if isinstance(node, Forall):
            raise ValueError("universal quantifier in existential input")
        if isinstance(node, Not):
            if not _is_quantifier_free(node):
                raise ValueError("negation over a quantifier in existential input")
            return [], node
        if isinstance(node, (And, Or)):
            binders: list[str] = []
            parts = []
            for s in node.subs:
                b, m = go(s)
                binders.extend(b)
                parts.append(m)
            joined = land(*parts) if isinstance(node, And) else lor(*parts)
            return binders, joined
        return [], node

    binders, matrix = go(_rectify(f))
    for v in reversed(binders):
        matrix = exists(v, matrix)
    return matrix


@deep
def to_nnf(f: Formula) -> Formula:
    """Push negations down to the atoms, flipping connectives and
    quantifiers on the way."""

    def nnf(node: Formula, neg: bool) -> Formula:
        if isinstance(node, Not):
            return nnf(node.sub, not neg)
        if isinstance(node, And):
            parts = tuple(nnf(s, neg) for s in node.subs)
            return lor(*parts) if neg else land(*parts)
        if isinstance(node, Or):
            parts = tuple(nnf(s, neg) for s in node.subs)
            return land(*parts) if neg else lor(*parts)
        if isinstance(node, Exists):
            body = nnf(node.sub, neg)
            return forall(node.var, body) if neg else exists(node.var, body)
        if isinstance(node, Forall):
            body = nnf(node.sub, neg)
            return exists(node.var, body) if neg else forall(node.var, body)
        return lnot(node) if neg else node

    return nnf(f, False)


@deep
def prenex_decompose(f: Formula) -> tuple[list[tuple[str, str]], Formula]:
    """Full prenex form for arbitrary formulas: negation is pushed to the
    atoms, then quantifiers are hoisted left to right.  Returns the prefix
    as (kind, var) pairs with kind in {"E", "A"} plus the matrix."""

    def hoist(node: Formula) -> tuple[list[tuple[str, str]], Formula]:
        if isinstance(node, (Exists, Forall)):
            kind = "E" if isinstance(node, Exists) else "A"
            prefix, matrix = hoist(node.sub)
            return [(kind, node.var)] + prefix, matrix
        if isinstance(node, (And, Or)):
            prefix: list[tuple[str, str]] = []
            parts = []
            for s in node.subs:
                p, m = hoist(s)
                prefix.extend(p)
                parts.append(m)
            joined = land(*parts) if isinstance(node, And) else lor(*parts)
            return prefix, joined
        return [], node

    return hoist(_rectify(to_nnf(f)))
