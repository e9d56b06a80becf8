"""Distance-r dominating sets and the exact oracle."""

import random

import pytest

import gen
import oracles
from bexpkit.graphs import ClassParams, Graph, VertexOrdering
from bexpkit.domset import domset_approx, domset_exact, is_dominating
from bexpkit.wcol import BconnConfig, wcol_measure

EXACT = BconnConfig(mode="exact")


def test_star_with_center_first():
    G = gen.star(3)
    sigma = VertexOrdering((0, 1, 2, 3))
    D, _, _ = domset_approx(G, 1, ClassParams(r=1, d=1), EXACT, sigma=sigma)
    assert D == [0]


def test_edgeless_needs_everyone():
    G = Graph.from_edges(4, [])
    D, _, _ = domset_approx(G, 1, ClassParams(r=1, d=1), EXACT)
    assert sorted(D) == [0, 1, 2, 3]


def test_path_radius_two():
    G = gen.path(5)
    D, sigma, bound = domset_approx(G, 2, ClassParams(r=2, d=1), EXACT)
    assert is_dominating(G, D, 2)
    assert oracles.brute_domset(oracles.adjacency(G), 2) == 1
    assert len(D) <= bound * 1
    assert bound == wcol_measure(G, sigma, 4)


def test_exact_star():
    assert domset_exact(gen.star(3), 1) == 1


def test_exact_edgeless():
    assert domset_exact(Graph.from_edges(4, []), 2) == 4


def test_exact_cycle():
    assert domset_exact(gen.cycle(6), 1) == 2


def test_exact_size_guard():
    with pytest.raises(ValueError, match="large"):
        domset_exact(Graph.from_edges(21, []), 1)


def test_exact_matches_brute_force():
    rng = random.Random(4)
    for _ in range(20):
        G = gen.random_degenerate(rng.randint(1, 9), 2, rng)
        r = rng.randint(1, 2)
        assert domset_exact(G, r) == oracles.brute_domset(
            oracles.adjacency(G), r)


def test_is_dominating_definition():
    G = gen.path(5)
    assert is_dominating(G, [2], 2)
    assert not is_dominating(G, [0], 2)
    assert is_dominating(G, [0, 3], 1)


@pytest.mark.parametrize("seed", range(8))
def test_validity_always(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 2)
    G = gen.random_degenerate(rng.randint(1, 60), 2, rng)
    D, _, _ = domset_approx(G, r, ClassParams(r=2 * r, d=2), EXACT)
    assert is_dominating(G, D, r)
    adj = oracles.adjacency(G)
    for v in range(G.n):
        dist = oracles.bfs_distances(adj, v)
        assert any(dist[u] is not None and dist[u] <= r for u in D)


@pytest.mark.parametrize("seed", range(6))
def test_ratio_bound_small(seed):
    rng = random.Random(100 + seed)
    r = rng.randint(1, 2)
    G = gen.random_degenerate(rng.randint(1, 13), 2, rng)
    D, sigma, bound = domset_approx(G, r, ClassParams(r=2 * r, d=2), EXACT)
    assert bound == wcol_measure(G, sigma, 2 * r)
    assert len(D) <= bound * domset_exact(G, r)
