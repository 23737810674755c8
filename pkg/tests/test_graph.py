import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cfedge.graph import (
    GraphError, VertexPartition, build_graph, edge_neighbourhood, edge_set, is_forest, is_matching,
    spanning_forest, two_colour,
)

from conftest import C5, C5_PLUS, complete, cycle


def test_c5_plus_degrees():
    G = build_graph(5, C5_PLUS)
    assert sorted(G.degree.tolist(), reverse=True) == [3, 3, 2, 2, 2]
    assert G.m == 6 and G.max_degree == 3 and G.min_degree == 2


@pytest.mark.parametrize("pairs, msg", [
    ([(0, 1), (1, 0)], "duplicate"),
    ([(2, 2)], "loop"),
    ([(0, 7)], "outside"),
])
def test_bad_input_rejected(pairs, msg):
    with pytest.raises(GraphError, match=msg):
        build_graph(5, pairs)


def test_incidence_sorted_and_consistent():
    G = build_graph(4, [(2, 3), (0, 1), (1, 2), (0, 3)])
    for v in range(4):
        inc = G.incident(v)
        assert list(inc) == sorted(inc)
        for e, w in zip(inc, G.neighbours(v)):
            assert set(G.endpoints(e)) == {v, int(w)}
    assert G.edge_id(3, 2) == 0
    with pytest.raises(GraphError):
        G.edge_id(0, 2)


def test_edge_subgraph_origin():
    G = cycle(6)
    S = G.edge_subgraph([4, 1, 1])
    assert S.n == 6 and S.origin.tolist() == [1, 4]
    assert S.edges.tolist() == [G.edges[1].tolist(), G.edges[4].tolist()]


def test_neighbourhoods():
    G = build_graph(5, C5)
    assert edge_neighbourhood(G, 0, "closed").tolist() == [0, 1, 4]
    assert edge_neighbourhood(G, 0, "open").tolist() == [1, 4]
    with pytest.raises(ValueError):
        edge_neighbourhood(G, 0, "sideways")


def test_components_and_isolated_edges():
    G = build_graph(7, [(0, 1), (2, 3), (3, 4), (5, 6)])
    assert G.components().tolist() == [0, 0, 1, 1, 1, 2, 2]
    assert G.isolated_edges().tolist() == [0, 3]
    assert [c.tolist() for c in G.edge_components()] == [[0], [1, 2], [3]]


def test_partition_checks():
    P = VertexPartition.of([0, 1], [2])
    assert P.side_array(4).tolist() == [0, 0, 1, -1]
    with pytest.raises(GraphError):
        VertexPartition.of([0, 1], [1, 2])


def test_forest_matching_bipartite():
    G = complete(4)
    T = spanning_forest(G)
    assert len(T) == 3 and is_forest(G, T)
    assert not is_forest(G, range(G.m))
    assert is_matching(G, [G.edge_id(0, 1), G.edge_id(2, 3)])
    assert not is_matching(G, [G.edge_id(0, 1), G.edge_id(1, 2)])
    assert two_colour(G) is None
    assert two_colour(cycle(6)).tolist() == [0, 1, 0, 1, 0, 1]
    assert edge_set(G, [3, 1, 3]).tolist() == [1, 3]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 25), st.floats(0, 1), st.integers(0, 2**31))
def test_spanning_forest_spans(n, p, seed):
    from conftest import random_graph

    G = random_graph(np.random.default_rng(seed), n, p)
    T = spanning_forest(G)
    assert is_forest(G, T)
    ncomp_edges = len(G.edge_components())
    assert len(T) == int((G.degree > 0).sum()) - ncomp_edges
