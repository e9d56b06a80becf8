"""Circuit evaluation reduced to a degeneracy-2 test.

A normalized boolean circuit maps to a graph of 10-vertex gate gadgets
wired output-to-input, plus a chain of auxiliary gadgets hooked to every
FALSE gate.  The circuit evaluates to true exactly when the elimination
procedure at threshold 2 can dissolve the whole graph: a gadget unlocks
only when enough of its input wires have disappeared (all of them for
AND, at least one for OR), and the chain releases the FALSE gadgets only
after the output gadget has dissolved.

The gadget wiring is fixed here as an adjacency table with the structural
facts the correctness argument needs (input-vertex internal degree 1 for
OR and 2 for AND, every other vertex internal degree >= 3, and a top-down
order of degeneracy 2); a self-test asserts them.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .graphs import Graph, GraphFormatError

KINDS = ("AND", "OR", "NOT", "TRUE", "FALSE", "INPUT")
NORMAL_KINDS = ("AND", "OR", "TRUE", "FALSE")

GADGET_VERTICES = ("out", "a", "b", "c", "d", "e", "f", "g", "h", "in")

# Both gadgets share the out-side diamond; they differ near the input
# vertex: the AND gadget reaches "in" through both g and h, the OR gadget
# only through g (with e-h closing the triangle that keeps h at degree 3).
AND_GADGET_EDGES = (
    ("out", "a"), ("out", "b"), ("out", "c"), ("out", "d"),
    ("a", "b"), ("c", "d"),
    ("a", "e"), ("b", "f"), ("c", "e"), ("d", "f"),
    ("e", "g"), ("f", "h"), ("g", "h"),
    ("g", "in"), ("h", "in"),
)
OR_GADGET_EDGES = (
    ("out", "a"), ("out", "b"), ("out", "c"), ("out", "d"),
    ("a", "b"), ("c", "d"),
    ("a", "e"), ("b", "f"), ("c", "e"), ("d", "f"),
    ("e", "g"), ("f", "h"), ("e", "h"), ("g", "h"),
    ("g", "in"),
)
AND_TOPDOWN = ("out", "a", "b", "c", "d", "e", "f", "g", "h", "in")
OR_TOPDOWN = ("out", "a", "b", "c", "d", "f", "e", "h", "g", "in")


class Circuit:
    """Boolean circuit: gates maps id -> (kind, input ids)."""

    def __init__(self, gates, output, assignment=None):
        self.gates = {int(g): (kind, tuple(int(i) for i in ins)) for g, (kind, ins) in gates.items()}
        self.output = int(output)
        self.assignment = dict(assignment) if assignment else {}
        if self.output not in self.gates:
            raise ValueError(f"output gate {self.output} not defined")
        for g, (kind, ins) in self.gates.items():
            if kind not in KINDS:
                raise ValueError(f"gate {g}: unknown kind {kind!r}")
            if kind in ("TRUE", "FALSE", "INPUT") and ins:
                raise ValueError(f"gate {g}: {kind} takes no inputs")
            if kind == "NOT" and len(ins) != 1:
                raise ValueError(f"gate {g}: NOT takes exactly one input")
            if kind in ("AND", "OR") and not ins:
                raise ValueError(f"gate {g}: {kind} needs at least one input")
            for i in ins:
                if i not in self.gates:
                    raise ValueError(f"gate {g}: undefined input {i}")

    def is_normalized(self) -> bool:
        fan_out = {g: 0 for g in self.gates}
        for kind, ins in self.gates.values():
            if kind not in NORMAL_KINDS:
                return False
            for i in ins:
                fan_out[i] += 1
        for g, (kind, ins) in self.gates.items():
            if kind == "AND" and len(ins) not in (1, 2):
                return False
            if kind == "OR" and len(ins) != 2:
                return False
            if fan_out[g] > 2:
                return False
        return True

    def __repr__(self):
        return f"Circuit(gates={len(self.gates)}, output={self.output})"


def parse_circuit(text: str) -> Circuit:
    gates = {}
    assignment = {}
    output = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "g":
            if len(parts) < 3:
                raise GraphFormatError(lineno, "expected 'g <id> <KIND> [ins...]'")
            try:
                gid = int(parts[1])
                ins = [int(p) for p in parts[3:]]
            except ValueError:
                raise GraphFormatError(lineno, f"bad token in {line!r}") from None
            if parts[2] not in KINDS:
                raise GraphFormatError(lineno, f"unknown gate kind {parts[2]!r}")
            if gid in gates:
                raise GraphFormatError(lineno, f"duplicate gate id {gid}")
            gates[gid] = (parts[2], ins)
        elif parts[0] == "assign":
            if len(parts) != 3 or parts[2] not in ("0", "1"):
                raise GraphFormatError(lineno, "expected 'assign <id> 0|1'")
            assignment[int(parts[1])] = int(parts[2])
        elif parts[0] == "output":
            if len(parts) != 2:
                raise GraphFormatError(lineno, "expected 'output <id>'")
            output = int(parts[1])
        else:
            raise GraphFormatError(lineno, f"unknown directive {parts[0]!r}")
    if output is None:
        raise GraphFormatError(1, "missing 'output <id>' line")
    try:
        return Circuit(gates, output, assignment)
    except ValueError as exc:
        raise GraphFormatError(1, str(exc)) from None


def serialize_circuit(C: Circuit) -> str:
    lines = []
    for g, (kind, ins) in sorted(C.gates.items()):
        suffix = (" " + " ".join(map(str, ins))) if ins else ""
        lines.append(f"g {g} {kind}{suffix}")
    for g, bit in sorted(C.assignment.items()):
        lines.append(f"assign {g} {bit}")
    lines.append(f"output {C.output}")
    return "\n".join(lines) + "\n"


def _topo_order(C: Circuit):
    state = {}
    order = []

    def visit(g):
        stack = [(g, 0)]
        while stack:
            node, phase = stack.pop()
            if phase == 0:
                if state.get(node) == 2:
                    continue
                if state.get(node) == 1:
                    raise ValueError("cyclic circuit")
                state[node] = 1
                stack.append((node, 1))
                for i in C.gates[node][1]:
                    stack.append((i, 0))
            else:
                state[node] = 2
                order.append(node)

    for g in C.gates:
        visit(g)
    return order


def eval_circuit(C: Circuit) -> bool:
    """Topological evaluation; INPUT gates read C.assignment."""
    value = {}
    for g in _topo_order(C):
        kind, ins = C.gates[g]
        if kind == "TRUE":
            value[g] = True
        elif kind == "FALSE":
            value[g] = False
        elif kind == "INPUT":
            if g not in C.assignment:
                raise ValueError(f"missing assignment for input gate {g}")
            value[g] = bool(C.assignment[g])
        elif kind == "NOT":
            value[g] = not value[ins[0]]
        elif kind == "AND":
            value[g] = all(value[i] for i in ins)
        else:
            value[g] = any(value[i] for i in ins)
    return value[C.output]


def normalize_circuit(C: Circuit, assignment=None) -> Circuit:
    """Rewrite to kinds {AND, OR, TRUE, FALSE} with AND fan-in 1..2, OR
    fan-in exactly 2, and fan-out <= 2, preserving the output value.

    Steps: substitute the input assignment, push negations to the leaves
    through a dual-rail construction, split wide gates into fan-in-2
    trees (unary OR becomes unary AND), and cap fan-out with AND copy
    chains.
    """
    eta = dict(C.assignment)
    if assignment:
        eta.update(assignment)
    for g, (kind, _) in C.gates.items():
        if kind == "INPUT" and g not in eta:
            raise ValueError(f"missing assignment for input gate {g}")
    _topo_order(C)  # rejects cyclic circuits

    # Dual-rail negation pushdown: build(g, pol) returns a gate computing
    # gate g when pol is +1 and its negation when pol is -1.
    out_gates = {}
    out_order = []
    memo = {}

    def emit(kind, ins):
        gid = len(out_order)
        out_gates[gid] = (kind, tuple(ins))
        out_order.append(gid)
        return gid

    def build(g, pol):
        key = (g, pol)
        if key in memo:
            return memo[key]
        kind, ins = C.gates[g]
        if kind == "INPUT":
            kind = "TRUE" if eta[g] else "FALSE"
        if kind in ("TRUE", "FALSE"):
            truthy = (kind == "TRUE") == (pol > 0)
            gid = emit("TRUE" if truthy else "FALSE", ())
        elif kind == "NOT":
            gid = build(ins[0], -pol)
        else:
            flipped = kind if pol > 0 else ("OR" if kind == "AND" else "AND")
            gid = emit(flipped, [build(i, pol) for i in ins])
        memo[key] = gid
        return gid

    root = build(C.output, 1)

    # Fan-in reduction: split wide gates into chains of binary gates of
    # the same kind; unary OR becomes unary AND.
    gates2 = {}
    rename = {}
    order2 = []

    def emit2(kind, ins):
        # an OR with twice the same input must not survive: its two wire
        # edges would collapse into one in the simple gadget graph, making
        # the gadget removable regardless of the input's value
        if kind == "OR" and len(ins) == 2 and ins[0] == ins[1]:
            kind, ins = "AND", ins[:1]
        gid = len(order2)
        gates2[gid] = (kind, tuple(ins))
        order2.append(gid)
        return gid

    for g in out_order:
        kind, ins = out_gates[g]
        ins = [rename[i] for i in ins]
        if kind in ("AND", "OR") and len(ins) == 1:
            rename[g] = emit2("AND", ins)
            continue
        if kind in ("AND", "OR") and len(ins) > 2:
            acc = emit2(kind, ins[:2])
            for nxt in ins[2:]:
                acc = emit2(kind, (acc, nxt))
            rename[g] = acc
            continue
        rename[g] = emit2(kind, ins)

    return _finish_fanout(gates2, rename[root])


def _finish_fanout(gates, root):
    """Repeatedly insert AND copies until every gate has fan-out <= 2."""
    gates = dict(gates)
    changed = True
    while changed:
        changed = False
        consumers = {g: [] for g in gates}
        for g, (kind, ins) in gates.items():
            for slot, i in enumerate(ins):
                consumers[i].append((g, slot))
        for g in sorted(gates):
            cons = consumers[g]
            if len(cons) <= 2:
                continue
            copy = max(gates) + 1
            gates[copy] = ("AND", (g,))
            for target, slot in cons[1:]:
                kind, ins = gates[target]
                ins = list(ins)
                ins[slot] = copy
                gates[target] = (kind, tuple(ins))
            changed = True
            break
    # compact ids deterministically
    mapping = {g: i for i, g in enumerate(sorted(gates))}
    out = {
        mapping[g]: (kind, tuple(mapping[i] for i in ins))
        for g, (kind, ins) in gates.items()
    }
    return Circuit(out, mapping[root])


def gadget_self_test():
    """Structural facts the reduction's correctness rests on; raises
    AssertionError when the tables drift."""
    for edges, topdown, in_degree in (
        (AND_GADGET_EDGES, AND_TOPDOWN, 2),
        (OR_GADGET_EDGES, OR_TOPDOWN, 1),
    ):
        deg = {v: 0 for v in GADGET_VERTICES}
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        assert deg["in"] == in_degree
        assert all(deg[v] >= 3 for v in GADGET_VERTICES if v != "in")
        seen = set()
        for v in topdown:
            earlier = sum(1 for a, b in edges if (a == v and b in seen) or (b == v and a in seen))
            assert earlier <= 2
            seen.add(v)
        assert seen == set(GADGET_VERTICES)
    return True


def circuit_to_graph(C: Circuit):
    """Gadget graph of a normalized circuit.

    Returns (Graph, gadget map); the map sends ("gate", id) and
    ("chain", i) to dicts role -> graph vertex.  Chain gadget 0 is the
    output gate's own gadget.
    """
    if not C.is_normalized():
        raise ValueError("circuit is not normalized")
    edges = []
    placement = {}
    counter = 0

    def place(key, kind):
        nonlocal counter
        base = counter
        counter += 10
        roles = {name: base + i for i, name in enumerate(GADGET_VERTICES)}
        placement[key] = roles
        table = AND_GADGET_EDGES if kind == "AND" else OR_GADGET_EDGES
        for u, v in table:
            edges.append((roles[u], roles[v]))
        return roles

    for g in sorted(C.gates):
        kind, _ = C.gates[g]
        place(("gate", g), "OR" if kind == "OR" else "AND")
    for g in sorted(C.gates):
        _, ins = C.gates[g]
        for i in ins:
            edges.append((placement[("gate", i)]["out"], placement[("gate", g)]["in"]))

    false_gates = sorted(g for g, (kind, _) in C.gates.items() if kind == "FALSE")
    placement[("chain", 0)] = placement[("gate", C.output)]
    for i, x in enumerate(false_gates, start=1):
        roles = place(("chain", i), "AND")
        edges.append((placement[("chain", i - 1)]["out"], roles["in"]))
        edges.append((roles["out"], placement[("gate", x)]["in"]))

    return Graph.from_edges(counter, edges), placement


def degeneracy_le(G: Graph, c: int) -> bool:
    """True iff repeatedly deleting vertices of degree <= c empties G."""
    if c < 0:
        raise ValueError("threshold must be >= 0")
    if G.n == 0:
        return True
    indptr, indices = G.csr()
    round_of = np.full(G.n, -1, dtype=np.int64)
    _, leftover = _kernels.peel_rounds(indptr, indices, c, round_of)
    return leftover == 0
