"""Deterministic instance generators shared by the test suite.

Every generator takes an explicit random.Random so tests stay seed-stable.
"""

from __future__ import annotations

import random

from bexpkit.graphs import Graph
from bexpkit.logic import LabeledForest, Structure
from bexpkit.logic.syntax import atom, eq, exists, forall, land, lnot, lor
from bexpkit.treedepth import RootedForest


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(v, v + 1) for v in range(n - 1)])


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(v, (v + 1) % n) for v in range(n)])


def star(spokes: int) -> Graph:
    return Graph.from_edges(spokes + 1, [(0, v) for v in range(1, spokes + 1)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n)
                                for v in range(u + 1, n)])


def grid(rows: int, cols: int) -> Graph:
    def vid(i, j):
        return i * cols + j

    edges = []
    for i in range(rows):
        for j in range(cols):
            if i + 1 < rows:
                edges.append((vid(i, j), vid(i + 1, j)))
            if j + 1 < cols:
                edges.append((vid(i, j), vid(i, j + 1)))
    return Graph.from_edges(rows * cols, edges)


def random_tree(n: int, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [(rng.randrange(v), v) for v in range(1, n)])


def random_degenerate(n: int, d: int, rng: random.Random) -> Graph:
    """Each vertex picks <= d earlier neighbors, so degeneracy <= d."""
    edges = []
    for v in range(1, n):
        for u in rng.sample(range(v), min(v, rng.randint(0, d))):
            edges.append((u, v))
    return Graph.from_edges(n, edges)


def planar_triangulation(n: int, rng: random.Random) -> Graph:
    """Stacked triangulation: repeatedly drop a vertex into a random face.

    Planar, 3-degenerate, every face a triangle.  Needs n >= 3.
    """
    edges = [(0, 1), (1, 2), (0, 2)]
    faces = [(0, 1, 2)]
    for v in range(3, n):
        a, b, c = faces.pop(rng.randrange(len(faces)))
        edges += [(a, v), (b, v), (c, v)]
        faces += [(a, b, v), (a, c, v), (b, c, v)]
    return Graph.from_edges(n, edges)


def forest_closure(n: int, h: int, rng: random.Random):
    """Ancestor closure of a random depth-<=h forest: a graph of
    treedepth <= h together with the witnessing parent list."""
    parent: list[int | None] = []
    depth = []
    for v in range(n):
        shallow = [u for u in range(v) if depth[u] < h]
        if not shallow or rng.random() < 0.25:
            parent.append(None)
            depth.append(1)
        else:
            p = rng.choice(shallow)
            parent.append(p)
            depth.append(depth[p] + 1)
    edges = []
    for v in range(n):
        u = parent[v]
        while u is not None:
            edges.append((u, v))
            u = parent[u]
    return Graph.from_edges(n, edges), parent


def random_labeled_forest(n: int, d: int, labels,
                          rng: random.Random) -> LabeledForest:
    parent: list[int | None] = []
    depth = []
    for v in range(n):
        shallow = [u for u in range(v) if depth[u] < d]
        if not shallow or rng.random() < 0.3:
            parent.append(None)
            depth.append(1)
        else:
            p = rng.choice(shallow)
            parent.append(p)
            depth.append(depth[p] + 1)
    node_labels = [frozenset(c for c in labels if rng.random() < 0.5)
                   for _ in range(n)]
    return LabeledForest(RootedForest(parent), node_labels)


def random_structure(G: Graph, rng: random.Random,
                     unary=("red", "blue"),
                     binary=("edge", "arc")) -> Structure:
    """Random structure whose Gaifman graph is a subgraph of G: the first
    binary relation keeps every edge symmetrically, later ones sample
    oriented copies."""
    sym = frozenset((u, v) for u, v in G.edges()) | frozenset(
        (v, u) for u, v in G.edges())
    un = {name: frozenset(v for v in range(G.n) if rng.random() < 0.4)
          for name in unary}
    bi = {}
    for i, name in enumerate(binary):
        if i == 0:
            bi[name] = sym
        else:
            bi[name] = frozenset(p for p in sym if rng.random() < 0.5)
    return Structure(G.n, un, bi)


def random_sentence(rng: random.Random, unary=("red", "blue"),
                    binary=("edge", "arc"), max_quant=3, max_alt=2):
    """Random closed formula with bounded quantifier count and
    alternation depth."""

    def build(depth, scope, quants_left, alts_left, last_kind):
        choices = []
        if quants_left > 0 and depth < 6:
            choices += ["E", "A"] if alts_left > 0 else [last_kind or "E"]
        if scope:
            choices += ["atom"] * 3 + ["bool"] * 2
        if not choices:
            return lor()
        c = rng.choice(choices)
        if c in ("E", "A"):
            v = f"v{len(scope)}"
            alts = alts_left - (1 if last_kind is not None
                                and c != last_kind else 0)
            sub = build(depth + 1, scope + [v], quants_left - 1, alts, c)
            return exists(v, sub) if c == "E" else forall(v, sub)
        if c == "atom":
            kind = rng.choice(("u", "b", "eq"))
            if kind == "u":
                return atom(rng.choice(unary), rng.choice(scope))
            if kind == "eq":
                return eq(rng.choice(scope), rng.choice(scope))
            return atom(rng.choice(binary),
                        rng.choice(scope), rng.choice(scope))
        op = rng.choice(("and", "or", "not"))
        a = build(depth + 1, scope, quants_left, alts_left, last_kind)
        if op == "not":
            return lnot(a)
        b = build(depth + 1, scope, quants_left, alts_left, last_kind)
        return land(a, b) if op == "and" else lor(a, b)

    return build(0, [], rng.randint(1, max_quant), max_alt, None)


def random_existential_positive(rng: random.Random, unary=("red", "blue"),
                                binary=("edge", "arc"), max_quant=3):
    """Random formula built from atoms, negated atoms, conjunction,
    disjunction, and existential quantifiers only: the fragment the prenex
    rewriter accepts.  May have free variables drawn from x0, x1."""
    free = ["x0", "x1"]

    def build(depth, scope, quants_left):
        choices = ["atom"] * 3 + ["bool"] * 2
        if quants_left > 0 and depth < 6:
            choices += ["E", "E"]
        c = rng.choice(choices)
        if c == "E":
            v = f"w{len(scope)}"
            return exists(v, build(depth + 1, scope + [v], quants_left - 1))
        if c == "atom":
            vs = scope + free
            kind = rng.choice(("u", "b", "eq"))
            if kind == "u":
                a = atom(rng.choice(unary), rng.choice(vs))
            elif kind == "eq":
                a = eq(rng.choice(vs), rng.choice(vs))
            else:
                a = atom(rng.choice(binary), rng.choice(vs), rng.choice(vs))
            return lnot(a) if rng.random() < 0.3 else a
        a = build(depth + 1, scope, quants_left)
        b = build(depth + 1, scope, quants_left)
        return land(a, b) if rng.random() < 0.5 else lor(a, b)

    return build(0, [], rng.randint(1, max_quant))


def random_lcd_formula(rng: random.Random, variables, d: int, labels,
                       rel: str = "f"):
    """Random quantifier-free formula over label atoms and least-common-
    depth atoms, the fragment eval_lcd_formula understands."""
    from bexpkit.logic import FALSE, TRUE, lcd

    def build(depth):
        roll = rng.random()
        if depth >= 4 or roll < 0.45:
            kind = rng.choice(("label", "lcd", "depth", "const"))
            if kind == "label" and labels:
                return atom(rng.choice(labels), rng.choice(variables))
            if kind == "lcd":
                u, v = rng.choice(variables), rng.choice(variables)
                return lcd(rel, rng.randint(0, d), u, v)
            if kind == "depth":
                u = rng.choice(variables)
                return lcd(rel, rng.randint(1, d), u, u)
            return TRUE if rng.random() < 0.5 else FALSE
        if roll < 0.6:
            return lnot(build(depth + 1))
        a, b = build(depth + 1), build(depth + 1)
        return land(a, b) if roll < 0.8 else lor(a, b)

    return build(0)


def random_circuit_text(rng: random.Random, max_gates: int) -> str:
    """Random acyclic circuit over all six gate kinds, with a total input
    assignment, in the line format the parser reads."""
    count = rng.randint(1, max_gates)
    lines = []
    assigns = []
    for g in range(1, count + 1):
        pool = ["TRUE", "FALSE", "INPUT"]
        if g >= 2:
            pool += ["NOT", "AND", "OR"] * 2
        kind = rng.choice(pool)
        if kind in ("TRUE", "FALSE"):
            lines.append(f"g {g} {kind}")
        elif kind == "INPUT":
            lines.append(f"g {g} INPUT")
            assigns.append(f"assign {g} {rng.randint(0, 1)}")
        elif kind == "NOT":
            lines.append(f"g {g} NOT {rng.randrange(1, g)}")
        else:
            a = rng.randrange(1, g)
            b = rng.randrange(1, g)
            lines.append(f"g {g} {kind} {a} {b}")
    lines += assigns
    lines.append(f"output {count}")
    return "\n".join(lines) + "\n"
