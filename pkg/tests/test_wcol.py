"""Back-connectivity, admissibility orderings, and weak coloring numbers."""

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

import gen
import oracles
from bexpkit.graphs import ClassParams, Graph, OracleOverflow
from bexpkit.degeneracy import measure_ordering_degeneracy
from bexpkit.wcol import (BconnConfig, adm_block_ordering, bconn_at_least,
                          bconn_exact, g_bound, wcol_measure, wcol_ordering,
                          weak_reachability_graph, wreach_set)

EXACT = BconnConfig(mode="exact")


def subdivided_star() -> Graph:
    # center 0, midpoints 1..3, leaves 4..6
    return Graph.from_edges(7, [(0, 1), (1, 4), (0, 2), (2, 5), (0, 3), (3, 6)])


@st.composite
def small_graphs(draw, max_n=9):
    n = draw(st.integers(min_value=1, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), max_size=2 * n,
                          unique=True)) if pairs else []
    return Graph.from_edges(n, edges)


def test_bconn_exact_cycle_radius_one():
    assert bconn_exact(gen.cycle(6), range(6), 0, 1) == 2


def test_bconn_exact_star_center():
    assert bconn_exact(gen.star(3), range(4), 0, 1) == 3


def test_bconn_exact_subdivided_star():
    assert bconn_exact(subdivided_star(), {0, 4, 5, 6}, 0, 2) == 3


def test_bconn_exact_overflow_guard():
    # two targets, every other vertex usable as an interior: path count
    # explodes combinatorially on a complete graph
    with pytest.raises(OracleOverflow):
        bconn_exact(gen.complete(9), {0, 8}, 0, 4, max_paths=10)


def test_bconn_at_least_cycle():
    C6 = gen.cycle(6)
    assert bconn_at_least(C6, range(6), 0, 1, 2, EXACT)
    assert not bconn_at_least(C6, range(6), 0, 1, 3, EXACT)


def test_bconn_at_least_subdivided_star():
    assert bconn_at_least(subdivided_star(), {0, 4, 5, 6}, 0, 2, 3, EXACT)


@given(small_graphs(max_n=8), st.integers(min_value=1, max_value=3),
       st.randoms(use_true_random=False))
@settings(max_examples=120, deadline=None)
def test_bconn_exact_matches_brute_force(G, r, pyrng):
    adj = oracles.adjacency(G)
    S = {v for v in range(G.n) if pyrng.random() < 0.5}
    u = pyrng.randrange(G.n)
    S.add(u)
    assert bconn_exact(G, S, u, r) == oracles.brute_bconn(adj, S, u, r)


@given(small_graphs(max_n=8), st.integers(min_value=1, max_value=2))
@settings(max_examples=80, deadline=None)
def test_bconn_monotone_on_suffix_sets(G, r):
    # enlarging the target set can only add (truncations of) paths
    adj = oracles.adjacency(G)
    order = list(range(G.n))
    for i in range(G.n - 1):
        big, small = set(order[i:]), set(order[i + 1:])
        for u in small:
            assert (oracles.brute_bconn(adj, big, u, r)
                    >= oracles.brute_bconn(adj, small, u, r))


@given(small_graphs(max_n=8))
@settings(max_examples=60, deadline=None)
def test_bconn_monotone_in_radius(G):
    adj = oracles.adjacency(G)
    S = set(range(0, G.n, 2)) | {0}
    for u in sorted(S):
        vals = [oracles.brute_bconn(adj, S, u, r) for r in (1, 2, 3)]
        assert vals == sorted(vals)


def test_bconn_mc_true_answers_are_sound():
    rng = random.Random(11)
    for _ in range(60):
        G = gen.random_degenerate(rng.randint(2, 10), 2, rng)
        S = {v for v in range(G.n) if rng.random() < 0.6}
        u = rng.randrange(G.n)
        S.add(u)
        r = rng.randint(1, 2)
        k = rng.randint(1, 3)
        cfg = BconnConfig(mode="mc", trials=16, seed=rng.randrange(2 ** 32),
                          exact_cutoff=0)
        if bconn_at_least(G, S, u, r, k, cfg):
            assert bconn_exact(G, S, u, r) >= k


def test_bconn_mc_deterministic_per_seed():
    G = gen.grid(3, 4)
    cfg = BconnConfig(mode="mc", trials=8, seed=99, exact_cutoff=0)
    first = [bconn_at_least(G, range(G.n), v, 2, 3, cfg) for v in range(G.n)]
    second = [bconn_at_least(G, range(G.n), v, 2, 3, cfg) for v in range(G.n)]
    assert first == second


def test_adm_path_single_block():
    tau, ledger = adm_block_ordering(gen.path(4), ClassParams(r=2, d=1), EXACT)
    assert len(tau.blocks) == 1
    assert sum(r for _, r in ledger.phases) >= 1


def test_adm_single_vertex():
    tau, _ = adm_block_ordering(Graph.from_edges(1, []),
                                ClassParams(r=2, d=1), EXACT)
    assert tau.blocks == ((0,),)


def test_adm_grid_bounds():
    G = gen.grid(3, 3)
    params = ClassParams(r=2, d=3)
    tau, _ = adm_block_ordering(G, params, EXACT)
    assert len(tau.blocks) <= math.floor(math.log2(9))
    sigma, _ = wcol_ordering(G, params, EXACT)
    assert wcol_measure(G, sigma, 2) <= g_bound(2, 3)


def test_wreach_path_end():
    G = gen.path(3)
    from bexpkit.graphs import VertexOrdering
    sigma = VertexOrdering((0, 1, 2))
    assert wreach_set(G, sigma, 2, 2) == {0, 1, 2}


def test_wreach_radius_zero():
    from bexpkit.graphs import VertexOrdering
    sigma = VertexOrdering((0, 1, 2))
    assert wreach_set(gen.path(3), sigma, 1, 0) == {1}


def test_wreach_first_vertex():
    from bexpkit.graphs import VertexOrdering
    sigma = VertexOrdering((2, 0, 1))
    assert wreach_set(gen.complete(3), sigma, 2, 3) == {2}


@given(small_graphs(), st.integers(min_value=0, max_value=3))
@settings(max_examples=120, deadline=None)
def test_wreach_matches_definition(G, r):
    from bexpkit.graphs import VertexOrdering
    order = list(range(G.n))
    random.Random(G.n * 31 + r).shuffle(order)
    sigma = VertexOrdering(order)
    adj = oracles.adjacency(G)
    for v in range(G.n):
        assert wreach_set(G, sigma, v, r) == oracles.brute_wreach(
            adj, order, v, r)


def test_wcol_single_vertex():
    from bexpkit.graphs import VertexOrdering
    G = Graph.from_edges(1, [])
    assert wcol_measure(G, VertexOrdering((0,)), 2) == 1


def test_wcol_path_radius_two():
    from bexpkit.graphs import VertexOrdering
    assert wcol_measure(gen.path(3), VertexOrdering((0, 1, 2)), 2) == 3


def test_wcol_triangle_any_order():
    from bexpkit.graphs import VertexOrdering
    import itertools
    for perm in itertools.permutations(range(3)):
        assert wcol_measure(gen.complete(3), VertexOrdering(perm), 1) == 3


def test_wreach_graph_radius_one_is_input():
    from bexpkit.graphs import VertexOrdering
    G = gen.grid(2, 3)
    sigma = VertexOrdering(tuple(range(G.n)))
    H = weak_reachability_graph(G, sigma, 1)
    assert list(H.edges()) == list(G.edges())


def test_wreach_graph_edgeless():
    from bexpkit.graphs import VertexOrdering
    H = weak_reachability_graph(Graph.from_edges(4, []),
                                VertexOrdering((0, 1, 2, 3)), 3)
    assert H.m == 0


def test_wreach_graph_path_becomes_triangle():
    from bexpkit.graphs import VertexOrdering
    H = weak_reachability_graph(gen.path(3), VertexOrdering((0, 1, 2)), 2)
    assert H.m == 3


def test_g_bound_values():
    assert g_bound(1, 1) == 7
    assert g_bound(1, 2) == 49
    assert g_bound(2, 1) == 601


def test_g_bound_geometric_identity():
    for r in (1, 2, 3):
        for d in (1, 2, 3):
            c = 6 * r * r * d ** 3
            assert g_bound(r, d) == sum(c ** i for i in range(r + 1))


def test_wcol_ordering_tree():
    G = gen.random_tree(30, random.Random(3))
    sigma, _ = wcol_ordering(G, ClassParams(r=2, d=1), EXACT)
    assert wcol_measure(G, sigma, 2) <= g_bound(2, 1)


def test_wcol_ordering_single_vertex():
    G = Graph.from_edges(1, [])
    sigma, _ = wcol_ordering(G, ClassParams(r=2, d=1), EXACT)
    assert wcol_measure(G, sigma, 2) == 1


def test_wcol_ordering_grid():
    G = gen.grid(4, 4)
    sigma, _ = wcol_ordering(G, ClassParams(r=2, d=3), EXACT)
    assert wcol_measure(G, sigma, 2) <= g_bound(2, 3)


@given(small_graphs(), st.integers(min_value=1, max_value=2))
@settings(max_examples=60, deadline=None)
def test_adm_at_most_wcol(G, r):
    from bexpkit.graphs import VertexOrdering
    order = list(range(G.n))
    random.Random(G.n * 7 + r).shuffle(order)
    adj = oracles.adjacency(G)
    assert (oracles.brute_adm(adj, order, r)
            <= wcol_measure(G, VertexOrdering(order), r))


@given(small_graphs(), st.integers(min_value=1, max_value=3))
@settings(max_examples=60, deadline=None)
def test_degeneracy_transfers_to_wreach_graph(G, r):
    from bexpkit.graphs import VertexOrdering
    sigma = VertexOrdering(tuple(range(G.n)))
    H = weak_reachability_graph(G, sigma, r)
    assert (measure_ordering_degeneracy(H, sigma)
            <= wcol_measure(G, sigma, r) - 1)
