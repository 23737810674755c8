import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cfedge import kernels
from cfedge.decompose import (
    BalancedSplit, DecompositionError, balanced_split, check_balanced_split, core_split, degeneracy,
    degeneracy_colouring, degeneracy_order,
)
from cfedge.graph import build_graph

from conftest import complete, cycle, random_graph


def test_k4_with_pendant():
    G = build_graph(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)])
    sp = core_split(G, 3)
    assert sp.D.tolist() == [6]
    assert sp.H.tolist() == [0, 1, 2, 3, 4, 5]
    assert sp.core_vertices(G).tolist() == [0, 1, 2, 3]


def test_core_empty_and_full():
    G = cycle(7)
    assert len(core_split(G, 3).H) == 0
    assert len(core_split(G, 2).H) == 7
    K = complete(6)
    assert len(core_split(K, 5).D) == 0


def test_degeneracy_values():
    assert degeneracy(complete(6)) == 5
    assert degeneracy(cycle(9)) == 2
    tree = build_graph(6, [(0, 1), (0, 2), (1, 3), (1, 4), (4, 5)])
    assert degeneracy(tree) == 1
    assert sorted(degeneracy_order(tree).tolist()) == list(range(6))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 40), st.floats(0, 1), st.integers(0, 2**31))
def test_degeneracy_colouring_proper_and_small(n, p, seed):
    G = random_graph(np.random.default_rng(seed), n, p)
    col = degeneracy_colouring(G)
    assert (col >= 1).all()
    assert (col[G.edges[:, 0]] != col[G.edges[:, 1]]).all()
    assert col.max(initial=0) <= degeneracy(G) + 1


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 40), st.floats(0, 1), st.integers(0, 2**31), st.integers(0, 12))
def test_core_split_invariants(n, p, seed, d):
    G = random_graph(np.random.default_rng(seed), n, p)
    sp = core_split(G, d)  # runs its own audit
    assert len(sp.H) + len(sp.D) == G.m


def test_peel_twins_agree(rng):
    for _ in range(30):
        G = random_graph(rng, int(rng.integers(1, 60)), float(rng.random()))
        for t in (2, 5, np.iinfo(np.int64).max):
            a = kernels.peel_nb(G.indptr, G.nbr, t)
            b = kernels.peel_py(G.indptr, G.nbr, t)
            assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_c4_halves_into_matchings():
    G = cycle(4)
    sp = balanced_split(G, 2)
    assert sorted(p.tolist() for p in sp.parts) == [[0, 2], [1, 3]]


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 7, 8])
def test_balanced_split_bound(k, rng):
    for _ in range(8):
        G = random_graph(rng, int(rng.integers(2, 60)), float(rng.random()))
        sp = balanced_split(G, k, seed=int(rng.integers(1 << 30)))
        assert len(sp.parts) == k
        check_balanced_split(G, sp)


def test_balanced_split_deterministic():
    G = complete(9)
    a = balanced_split(G, 3, seed=4)
    b = balanced_split(G, 3, seed=4)
    assert all(np.array_equal(x, y) for x, y in zip(a.parts, b.parts))


def test_checker_rejects_unbalanced():
    G = build_graph(7, [(0, i) for i in range(1, 7)])
    with pytest.raises(DecompositionError):
        check_balanced_split(G, BalancedSplit([np.arange(6), np.zeros(0, dtype=np.int64)]))
    with pytest.raises(ValueError):
        balanced_split(G, 0)
