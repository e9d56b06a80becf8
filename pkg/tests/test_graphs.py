"""Graph substrate: parsing, induced subgraphs, distances, components."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import gen
import oracles
from bexpkit.graphs import (Graph, GraphFormatError, UNREACHED,
                            bounded_distances, components, induced_subgraph,
                            parse_graph, serialize_graph)


@st.composite
def graphs(draw, max_n=10):
    n = draw(st.integers(min_value=1, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), max_size=2 * n,
                          unique=True)) if pairs else []
    return Graph.from_edges(n, edges)


def test_parse_single_edge():
    G = parse_graph("graph 2\ne 0 1\n")
    assert G.n == 2
    assert list(G.edges()) == [(0, 1)]


def test_parse_edgeless():
    G = parse_graph("graph 3\n")
    assert G.n == 3
    assert G.m == 0


def test_parse_dedups_symmetric_lines():
    G = parse_graph("graph 2\ne 0 1\ne 1 0\n")
    assert G.m == 1


def test_parse_ignores_comments():
    G = parse_graph("# header comment\ngraph 2\n# mid\ne 0 1\n")
    assert G.m == 1


@pytest.mark.parametrize("text", [
    "e 0 1\n",                 # missing header
    "graph x\n",               # malformed count
    "graph 2\ne 0 2\n",        # id out of range
    "graph 2\ne 1 1\n",        # self-loop
    "graph 2\ne 0\n",          # wrong arity
])
def test_parse_rejects_bad_input(text):
    with pytest.raises(GraphFormatError) as err:
        parse_graph(text)
    assert "line" in str(err.value)


def test_induced_k4_minus_vertex_is_k3():
    H, idmap = induced_subgraph(gen.complete(4), {0, 1, 2})
    assert H.n == 3 and H.m == 3
    assert idmap.to_orig == (0, 1, 2)


def test_induced_empty_keep():
    H, _ = induced_subgraph(gen.path(4), set())
    assert H.n == 0 and H.m == 0


def test_induced_drops_outside_edges():
    H, idmap = induced_subgraph(gen.path(4), {0, 2})
    assert H.n == 2 and H.m == 0
    assert idmap.to_sub == {0: 0, 2: 1}


def test_induced_rejects_bad_ids():
    with pytest.raises(ValueError):
        induced_subgraph(gen.path(3), {0, 5})


def test_bounded_distances_truncates_at_cap():
    dist = bounded_distances(gen.path(4), 0, 2)
    assert dist[2] == 2
    assert dist[3] == UNREACHED


def test_bounded_distances_cap_zero():
    dist = bounded_distances(gen.path(4), 1, 0)
    assert dist[1] == 0
    assert all(dist[v] == UNREACHED for v in (0, 2, 3))


def test_bounded_distances_cycle_antipode():
    dist = bounded_distances(gen.cycle(6), 0, 3)
    assert dist[3] == 3


def test_bounded_distances_respects_allowed():
    # blocking the middle of a path disconnects the far end
    dist = bounded_distances(gen.path(3), 0, 2, allowed={0, 2})
    assert dist[2] == UNREACHED


def test_components_counts():
    assert len(set(components(Graph.from_edges(3, [])))) == 3
    assert len(set(components(gen.path(4)))) == 1
    two = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert len(set(components(two))) == 2


@given(graphs())
@settings(max_examples=150, deadline=None)
def test_parse_print_round_trip(G):
    again = parse_graph(serialize_graph(G))
    assert again.n == G.n
    assert list(again.edges()) == list(G.edges())


@given(graphs(), st.integers(min_value=0, max_value=4))
@settings(max_examples=150, deadline=None)
def test_bounded_distances_match_plain_bfs(G, cap):
    adj = oracles.adjacency(G)
    for s in range(G.n):
        got = bounded_distances(G, s, cap)
        want = oracles.bfs_distances(adj, s)
        for v in range(G.n):
            if want[v] is not None and want[v] <= cap:
                assert got[v] == want[v]
            else:
                assert got[v] == UNREACHED


@given(graphs())
@settings(max_examples=100, deadline=None)
def test_induced_composition_is_intersection(G):
    keep1 = set(range(0, G.n, 2))
    H1, m1 = induced_subgraph(G, keep1)
    keep2 = {m1.to_sub[v] for v in keep1 if v < G.n - 1}
    H2, m2 = induced_subgraph(H1, keep2)
    direct, _ = induced_subgraph(G, {m1.to_orig[v] for v in keep2})
    assert H2.n == direct.n
    assert list(H2.edges()) == list(direct.edges())


def test_components_agree_with_bfs_reachability():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(1, 12))
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        take = [p for p in pairs if rng.random() < 0.2]
        G = Graph.from_edges(n, take)
        comp = components(G)
        adj = oracles.adjacency(G)
        for u in range(n):
            dist = oracles.bfs_distances(adj, u)
            for v in range(n):
                assert (comp[u] == comp[v]) == (dist[v] is not None)
