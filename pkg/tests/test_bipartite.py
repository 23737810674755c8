import numpy as np
import pytest

from cfedge.bipartite import (
    PreconditionError, STAR_AT_X, SUBDIVIDED_AT_Y, four_colour_saturating, maximal_bipartite_extension,
    sixteen_colour, star_cover, three_colour,
)
from cfedge.graph import VertexPartition, build_graph, two_colour
from cfedge.verify import is_conflict_free, saturated_vertices

from conftest import bipartite_plus_matching, cycle, random_bipartite


def test_path_p4():
    G = build_graph(4, [(0, 1), (1, 2), (2, 3)])
    c = three_colour(G, two_colour(G))
    assert c.colour.tolist() == [0, 1, 2]


def test_star_centred_in_y():
    G = build_graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
    c = three_colour(G, VertexPartition.of([1, 2, 3, 4], [0]))
    assert c.colour.tolist() == [1, 2, 3, 3]
    with pytest.raises(PreconditionError) as info:
        star_cover(G, VertexPartition.of([1, 2, 3, 4], [0]))
    assert info.value.reason == "star-at-Y"


def test_c4_with_pendant_cover_kinds():
    G = build_graph(6, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (4, 5)])
    side = two_colour(G)
    cov = star_cover(G, side)
    assert {c.kind for c in cov.components} <= {STAR_AT_X, SUBDIVIDED_AT_Y}
    assert is_conflict_free(G, three_colour(G, side), "hybrid").ok


@pytest.mark.parametrize("pairs, reason", [
    ([(0, 1)], "trivial"),
    ([(0, 1), (1, 2), (3, 4), (4, 5)], "disconnected"),
])
def test_star_cover_preconditions(pairs, reason):
    G = build_graph(6, pairs)
    with pytest.raises(PreconditionError) as info:
        star_cover(G, two_colour(G))
    assert info.value.reason == reason


def test_not_bipartite_rejected():
    G = cycle(5)
    with pytest.raises(PreconditionError):
        three_colour(G, np.array([0, 1, 0, 1, 0]))


def test_random_three_and_four(rng):
    for _ in range(60):
        G, side = random_bipartite(rng, int(rng.integers(2, 30)))
        c3 = three_colour(G, side)
        assert c3.palette().max(initial=0) <= 3
        assert is_conflict_free(G, c3, "hybrid").ok
        sat = saturated_vertices(G, c3)
        assert sat[(side == 1) & (G.degree > 0)].all()
        c4 = four_colour_saturating(G, side)
        assert c4.palette().max(initial=0) <= 4
        assert saturated_vertices(G, c4)[G.degree > 0].all()


def test_extension_keeps_bipartite(rng):
    for _ in range(40):
        G, h, m = bipartite_plus_matching(rng, int(rng.integers(4, 30)))
        F, M, side = maximal_bipartite_extension(G, h, m)
        assert len(F) + len(M) == G.m
        assert (side[G.edges[F, 0]] != side[G.edges[F, 1]]).all()
        assert (side[G.edges[M, 0]] == side[G.edges[M, 1]]).all()


def test_random_sixteen(rng):
    for _ in range(60):
        G, h, m = bipartite_plus_matching(rng, int(rng.integers(4, 30)))
        c = sixteen_colour(G, h, m)
        assert c.palette().max(initial=0) <= 16
        assert is_conflict_free(G, c, "hybrid").ok


def test_sixteen_preconditions():
    G = build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 2)])
    with pytest.raises(PreconditionError) as info:
        sixteen_colour(G, [0, 1], [2, 3])
    assert info.value.reason == "not-a-matching"
    with pytest.raises(PreconditionError) as info:
        sixteen_colour(G, [0, 1], [2])
    assert info.value.reason == "not-a-decomposition"
