from __future__ import annotations

import itertools
import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from leeyang.errors import PreconditionError
from leeyang.graphs import (
    DirectedWeightedGraph,
    MultiGraph,
    add_pendant_vertex,
    bipartite_double,
    complete_graph,
    connected,
    connected_graphs,
    cycle_graph,
    disjoint_union,
    generate_connected_graphs,
    has_hamiltonian_path,
    merge_vertices,
    path_augment,
    path_graph,
    star_augment,
)
from leeyang.partition import matching_poly_enum

from strategies import connected_graphs_st, multigraphs_st

# Number of connected graphs on n unlabelled vertices (OEIS A001349).
CONNECTED_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117}


def test_connected_examples(edge):
    assert connected(edge)
    assert not connected(MultiGraph.from_edges(4, [(0, 1), (2, 3)]))
    assert connected(complete_graph(3))


def test_empty_graph_rejected():
    with pytest.raises(PreconditionError):
        MultiGraph(0)


def test_loop_counts_twice():
    g = MultiGraph.from_edges(2, [(0, 0), (0, 1)])
    assert g.degree(0) == 3
    assert g.degree(1) == 1


def test_star_augment_examples(edge):
    assert star_augment(edge, 0) == edge
    h = star_augment(edge, 1)
    assert nx.is_isomorphic(h.to_networkx(), nx.path_graph(4))
    k = star_augment(complete_graph(3), 2)
    assert (k.n, k.m) == (9, 9)


def test_star_augment_ids_grouped_by_host(edge):
    h = star_augment(edge, 3)
    for v in range(2):
        for i in range(3):
            assert h.neighbours[2 + v * 3 + i] == frozenset({v})


def test_path_augment_examples(edge):
    g = complete_graph(4)
    assert path_augment(g, 0) == g
    p = path_augment(MultiGraph(1), 2)
    assert nx.is_isomorphic(p.to_networkx(), nx.path_graph(3))
    d = path_augment(edge, 1, doubled=True)
    assert (d.n, d.m) == (4, 1 + 2 * 2)
    single = path_augment(edge, 2, doubled=True, double_connector=False)
    assert single.m == 1 + 2 * (1 + 2)


@given(connected_graphs_st(max_n=8), st.integers(0, 4))
def test_star_augment_counts(g, k):
    h = star_augment(g, k)
    assert h.n == g.n * (1 + k)
    assert h.m == g.m + g.n * k


@given(connected_graphs_st(max_n=6), st.integers(1, 4), st.booleans())
def test_path_augment_connected_and_degree(g, k, doubled):
    h = path_augment(g, k, doubled=doubled, double_connector=False)
    assert connected(h)
    assert h.max_degree(simple=True) <= max(g.max_degree(simple=True) + 1, 2)


def test_pendant_and_merge_examples():
    assert add_pendant_vertex(MultiGraph(1), 0) == MultiGraph(2, ((0, 1, 1),))
    two_cycle = merge_vertices(path_graph(3), 0, 2)
    assert two_cycle.n == 2 and sorted(two_cycle.edges) == [(0, 1, 1), (0, 1, 1)]
    with pytest.raises(PreconditionError):
        merge_vertices(path_graph(3), 0, 1)


def _build_by_pendants_and_merges(target: nx.Graph) -> MultiGraph:
    """Grow the target from a single edge using pendant additions and merges only."""
    nodes = list(target.nodes)
    root = nodes[0]
    first = next(iter(target[root]))
    g = MultiGraph.from_edges(2, [(0, 1)])
    ids = {root: 0, first: 1}
    used = {frozenset((root, first))}
    for u, v in nx.bfs_edges(target, root):
        if v not in ids:
            g = add_pendant_vertex(g, ids[u])
            ids[v] = g.n - 1
            used.add(frozenset((u, v)))
    for u, v in target.edges:
        if frozenset((u, v)) in used:
            continue
        g = add_pendant_vertex(g, ids[u])
        g = merge_vertices(g, ids[v], g.n - 1)
    return g


def test_pendant_merge_reconstructs_small_graphs():
    count = 0
    for n in range(2, 7):
        for g in connected_graphs(n).graphs:
            if g.m > 5:
                continue
            target = nx.Graph([(u, v) for u, v, _ in g.edges])
            built = _build_by_pendants_and_merges(target)
            assert nx.is_isomorphic(built.to_networkx(), g.to_networkx())
            count += 1
    assert count > 20


def test_corpus_counts_small():
    for n in range(1, 7):
        assert len(connected_graphs(n).graphs) == CONNECTED_COUNTS[n]


def test_packaged_corpus_n8_count_and_connectivity():
    gs = connected_graphs(8).graphs
    assert len(gs) == CONNECTED_COUNTS[8]
    assert all(connected(g) for g in gs[:: 97])


def test_generator_matches_atlas():
    assert len(generate_connected_graphs(5)) == CONNECTED_COUNTS[5]
    assert len(generate_connected_graphs(6)) == CONNECTED_COUNTS[6]


def test_json_round_trip():
    g = MultiGraph(3, ((0, 1, 2), (1, 1, 1), (1, 2, -1)))
    assert MultiGraph.from_json(g.to_json()) == g
    d = DirectedWeightedGraph(2, ((0, 1, 3), (1, 0, -1), (0, 0, 1)))
    assert DirectedWeightedGraph.from_json(d.to_json()) == d


def test_directed_graph_rejects_parallel_arcs():
    with pytest.raises(PreconditionError):
        DirectedWeightedGraph(2, ((0, 1, 1), (0, 1, 2)))


def _cover_weight_brute(d: DirectedWeightedGraph) -> int:
    a = d.arc_map
    total = 0
    for perm in itertools.permutations(range(d.n)):
        w = 1
        for i, j in enumerate(perm):
            w *= a.get((i, j), 0)
            if not w:
                break
        total += w
    return total


def test_bipartite_double_examples():
    loop = DirectedWeightedGraph(1, ((0, 0, 1),))
    assert bipartite_double(loop).m == 1
    assert matching_poly_enum(bipartite_double(loop)).coeff(0) == 1
    two = DirectedWeightedGraph(2, ((0, 1, 1), (1, 0, 1)))
    assert matching_poly_enum(bipartite_double(two)).coeff(0) == 1
    tri = DirectedWeightedGraph(3, ((0, 1, 1), (1, 2, 1), (2, 0, 1), (0, 0, 1), (1, 1, 1), (2, 2, 1)))
    assert _cover_weight_brute(tri) == 2
    assert matching_poly_enum(bipartite_double(tri)).coeff(0) == 2


@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_cycle_covers_equal_perfect_matchings(n, seed):
    rng = random.Random(seed)
    arcs = tuple((s, t, rng.choice([1, 2, 3, -1])) for s in range(n) for t in range(n) if rng.random() < 0.4)
    d = DirectedWeightedGraph(n, arcs)
    zm = matching_poly_enum(bipartite_double(d))
    assert zm.coeff(0) == _cover_weight_brute(d)


@given(multigraphs_st())
def test_networkx_round_trip(g):
    h = MultiGraph.from_networkx(g.to_networkx())
    assert h.n == g.n and sorted(h.edges) == sorted(g.edges)


def test_hamiltonian_path():
    assert has_hamiltonian_path(cycle_graph(5))
    assert not has_hamiltonian_path(MultiGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)]))
    assert not has_hamiltonian_path(disjoint_union(path_graph(2), path_graph(2)))
