"""Graph-kernel tests: Dijkstra against full path enumeration, BFS against
transitive closure, and determinism under edge reordering."""

from __future__ import annotations

import math

import pytest

from cellnav.graph import PlanGraph, bfs_reachable, dijkstra
from conftest import (
    brute_shortest,
    floyd_warshall_reachable,
    random_graph,
    rng_for,
)


def G(n, edges, directed=False):
    return PlanGraph(vertices=tuple(range(n)), edges=tuple(edges), directed=directed)


def test_single_edge():
    assert dijkstra(G(2, [(0, 1, 5.0)]), 0, 1) == (5.0, [0, 1])


def test_source_equals_target():
    assert dijkstra(G(2, [(0, 1, 5.0)]), 0, 0) == (0.0, [0])


def test_diamond_prefers_cheap_two_hop():
    g = G(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)])
    assert dijkstra(g, 0, 2) == (2.0, [0, 1, 2])


def test_unreachable_returns_none():
    g = G(3, [(0, 1, 1.0)], directed=True)
    assert dijkstra(g, 1, 2) is None
    assert dijkstra(g, 1, 0) is None  # directed edge points the other way


def test_tie_break_is_lexicographic():
    # Two equal-cost routes 0-1-3 and 0-2-3; the lower middle index wins.
    g = G(4, [(0, 1, 1.0), (1, 3, 1.0), (0, 2, 1.0), (2, 3, 1.0)])
    assert dijkstra(g, 0, 3) == (2.0, [0, 1, 3])
    # Same graph built with edges permuted: identical output.
    g2 = G(4, [(2, 3, 1.0), (0, 2, 1.0), (1, 3, 1.0), (0, 1, 1.0)])
    assert dijkstra(g2, 0, 3) == dijkstra(g, 0, 3)


def test_matches_enumeration_on_random_graphs():
    rng = rng_for("dijkstra vs enumeration")
    checked = 0
    for _ in range(100):
        directed = rng.random() < 0.5
        n, edges = random_graph(rng, n_max=8, directed=directed)
        g = G(n, edges, directed)
        expected = brute_shortest(n, edges, directed, 0, n - 1)
        actual = dijkstra(g, 0, n - 1)
        if expected is None:
            assert actual is None
        else:
            # Integer weights make both sums exact: equality is exact, and
            # the tie-break must match the enumerated lexicographic minimum.
            assert actual == (expected[0], expected[1])
            checked += 1
    assert checked >= 30


def test_undirected_weight_symmetry():
    rng = rng_for("dijkstra symmetry")
    for _ in range(50):
        n, edges = random_graph(rng, n_max=8, directed=False)
        g = G(n, edges)
        fwd = dijkstra(g, 0, n - 1)
        rev = dijkstra(g, n - 1, 0)
        assert (fwd is None) == (rev is None)
        if fwd is not None:
            assert fwd[0] == rev[0]


def test_edge_order_independence():
    rng = rng_for("dijkstra permutation")
    for _ in range(30):
        n, edges = random_graph(rng, n_max=8, directed=False)
        g = G(n, edges)
        baseline = dijkstra(g, 0, n - 1)
        for _ in range(3):
            shuffled = edges[:]
            rng.shuffle(shuffled)
            assert dijkstra(G(n, shuffled), 0, n - 1) == baseline


def test_parallel_edges_take_the_cheaper():
    g = G(2, [(0, 1, 5.0), (0, 1, 2.0)])
    assert dijkstra(g, 0, 1) == (2.0, [0, 1])


def test_zero_weight_edges_on_a_dag():
    g = G(4, [(0, 1, 0.0), (1, 2, 0.0), (2, 3, 1.0), (0, 3, 2.0)], directed=True)
    assert dijkstra(g, 0, 3) == (1.0, [0, 1, 2, 3])


def test_bfs_trivial_cases():
    g = G(2, [])
    assert bfs_reachable(g, 0, 0)
    assert not bfs_reachable(g, 0, 1)


def test_bfs_matches_transitive_closure():
    rng = rng_for("bfs closure")
    for _ in range(60):
        directed = rng.random() < 0.6
        n, edges = random_graph(rng, n_max=8, directed=directed)
        g = G(n, edges, directed)
        reach = floyd_warshall_reachable(n, edges, directed)
        for s in range(n):
            for t in range(n):
                assert bfs_reachable(g, s, t) == reach[s][t]


def test_validation_rejects_bad_graphs():
    with pytest.raises(ValueError):
        G(2, [(0, 1, -1.0)])
    with pytest.raises(ValueError):
        G(2, [(0, 1, math.inf)])
    with pytest.raises(ValueError):
        G(2, [(0, 5, 1.0)])
    with pytest.raises(ValueError):
        PlanGraph(vertices=("a", "a"), edges=())
    with pytest.raises(KeyError):
        dijkstra(G(2, []), 0, 7)


def test_shortest_never_beaten_by_any_enumerated_path():
    rng = rng_for("dijkstra lower bound")
    from conftest import enumerate_simple_paths

    for _ in range(20):
        n, edges = random_graph(rng, n_max=7, directed=False)
        g = G(n, edges)
        found = dijkstra(g, 0, n - 1)
        if found is None:
            continue
        for weight, _path in enumerate_simple_paths(n, edges, False, 0, n - 1):
            assert found[0] <= weight
