"""Circuit normalization, the gadget graph reduction, and elimination."""

import random

import pytest

import gen
import oracles
from bexpkit.degeneracy import greedy_degeneracy_ordering
from bexpkit.hardness import (Circuit, circuit_to_graph, degeneracy_le,
                              eval_circuit, gadget_self_test,
                              normalize_circuit, parse_circuit)


def normalized_invariants(C: Circuit):
    fanout = {g: 0 for g in C.gates}
    for g, (kind, ins) in C.gates.items():
        assert kind in ("AND", "OR", "TRUE", "FALSE")
        if kind == "AND":
            assert len(ins) in (1, 2)
        elif kind == "OR":
            assert len(ins) == 2
        else:
            assert not ins
        for i in ins:
            fanout[i] += 1
    assert all(c <= 2 for c in fanout.values())


def test_not_true_becomes_false():
    C = normalize_circuit(parse_circuit("g 1 TRUE\ng 2 NOT 1\noutput 2\n"))
    normalized_invariants(C)
    assert eval_circuit(C) is False


def test_wide_and_splits():
    text = "g 1 TRUE\ng 2 TRUE\ng 3 FALSE\ng 4 AND 1 2 3\noutput 4\n"
    C = normalize_circuit(parse_circuit(text))
    normalized_invariants(C)
    assert eval_circuit(C) is False


def test_high_fanout_gets_copy_chain():
    lines = ["g 1 TRUE"]
    lines += [f"g {g} AND 1 1" for g in range(2, 6)]  # gate 1 feeds 8 slots
    lines += ["g 6 OR 2 3", "g 7 OR 4 5", "g 8 OR 6 7", "output 8"]
    C = normalize_circuit(parse_circuit("\n".join(lines) + "\n"))
    normalized_invariants(C)
    assert eval_circuit(C) is True


def test_eval_basics():
    assert eval_circuit(parse_circuit("g 1 TRUE\noutput 1\n")) is True
    two = "g 1 TRUE\ng 2 FALSE\ng 3 AND 1 2\noutput 3\n"
    assert eval_circuit(parse_circuit(two)) is False
    three = "g 1 FALSE\ng 2 TRUE\ng 3 AND 2 2\ng 4 OR 1 3\noutput 4\n"
    assert eval_circuit(parse_circuit(three)) is True


def test_eval_rejects_cycle():
    with pytest.raises(ValueError, match="cycl"):
        eval_circuit(parse_circuit("g 1 AND 2 2\ng 2 AND 1 1\noutput 1\n"))


def test_graph_of_single_true_gate():
    C = normalize_circuit(parse_circuit("g 1 TRUE\noutput 1\n"))
    G, gm = circuit_to_graph(C)
    assert G.n == 10
    assert gm[("gate", 0)] == gm[("chain", 0)]


def test_graph_of_single_false_gate():
    C = normalize_circuit(parse_circuit("g 1 FALSE\noutput 1\n"))
    G, gm = circuit_to_graph(C)
    assert G.n == 20
    assert G.has_edge(gm[("chain", 0)]["out"], gm[("chain", 1)]["in"])


def test_wire_becomes_single_cross_edge():
    C = normalize_circuit(parse_circuit("g 1 TRUE\ng 2 AND 1\noutput 2\n"))
    G, gm = circuit_to_graph(C)
    src = gm[("gate", next(g for g, (k, _) in C.gates.items()
                           if k == "TRUE"))]
    dst = gm[("gate", C.output)]
    cross = [(u, v) for u, v in G.edges()
             if (u in src.values()) != (v in src.values())
             and (u in dst.values() or v in dst.values())]
    assert cross == [tuple(sorted((src["out"], dst["in"])))]


def test_degeneracy_le_basics():
    assert degeneracy_le(gen.path(4), 1)
    assert not degeneracy_le(gen.complete(4), 2)
    assert degeneracy_le(gen.cycle(4), 2)


def test_gadget_self_test_passes():
    gadget_self_test()


@pytest.mark.parametrize("seed", range(30))
def test_reduction_biconditional(seed):
    rng = random.Random(seed)
    C = normalize_circuit(parse_circuit(gen.random_circuit_text(rng, 40)))
    G, _ = circuit_to_graph(C)
    assert degeneracy_le(G, 2) == eval_circuit(C)


@pytest.mark.parametrize("seed", range(40))
def test_normalize_preserves_evaluation(seed):
    rng = random.Random(1000 + seed)
    raw = parse_circuit(gen.random_circuit_text(rng, 25))
    # reference: substitute the assignment, then sweep in dependency order
    gates = dict(raw.gates)
    for g, val in (raw.assignment or {}).items():
        gates[g] = ("TRUE" if val else "FALSE", ())
    want = oracles.eval_gates(gates, raw.output)[raw.output]
    C = normalize_circuit(raw)
    assert eval_circuit(C) == want


@pytest.mark.parametrize("seed", range(12))
def test_false_side_has_min_degree_three(seed):
    rng = random.Random(500 + seed)
    C = normalize_circuit(parse_circuit(gen.random_circuit_text(rng, 20)))
    if eval_circuit(C):
        pytest.skip("output is true; the obstacle only exists when false")
    G, gm = circuit_to_graph(C)
    value = oracles.eval_gates(C.gates, C.output)
    keep = set()
    for key, roles in gm.items():
        kind, idx = key
        if kind == "chain" or not value[idx]:
            keep.update(roles.values())
    adj = oracles.adjacency(G)
    assert min(len(adj[v] & keep) for v in keep) >= 3


@pytest.mark.parametrize("seed", range(15))
def test_degeneracy_le_matches_greedy(seed):
    rng = random.Random(seed * 3)
    G = gen.random_degenerate(rng.randint(1, 50), rng.randint(1, 4), rng)
    _, d = greedy_degeneracy_ordering(G)
    for c in range(0, 6):
        assert degeneracy_le(G, c) == (d <= c)
