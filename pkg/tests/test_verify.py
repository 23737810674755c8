import itertools
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cfedge import kernels
from cfedge.graph import build_graph
from cfedge.verify import (
    Colouring, incident_unique, is_conflict_free, satisfied, satisfied_mask, satisfied_matrix,
    saturated_vertices, unsatisfied_required,
)

from conftest import C5, brute_satisfied, random_graph

MODES = ["closed", "open", "hybrid"]


@pytest.mark.parametrize("mode", MODES)
def test_single_edge(mode):
    G = build_graph(2, [(0, 1)])
    assert bool(satisfied_mask(G, Colouring(G, [1]), mode)[0])
    # uncoloured isolated edge: exempt except in closed mode
    assert bool(satisfied_mask(G, Colouring(G, [0]), mode)[0]) == (mode != "closed")


def test_path_hybrid_needs_other_edge():
    G = build_graph(3, [(0, 1), (1, 2)])
    c = Colouring(G, [1, 0])
    assert satisfied(G, c, 0, "hybrid") is None
    cert = satisfied(G, c, 1, "hybrid")
    assert cert.witness == 0 and cert.colour == 1
    assert satisfied(G, c, 0, "closed").witness == 0


def test_c5_two_colours_closed_not_open():
    G = build_graph(5, C5)
    c = Colouring(G, [1, 1, 2, 1, 2])
    assert is_conflict_free(G, c, "ccf").ok
    assert not is_conflict_free(G, c, "ocf").ok


def test_helpers():
    G = build_graph(4, [(0, 1), (0, 2), (0, 3)])
    c = Colouring(G, [1, 1, 2])
    assert incident_unique(G, c, 0) == (2, 2)
    assert saturated_vertices(G, c).tolist() == [True, True, True, True]
    assert unsatisfied_required(G, Colouring(G, [1, 1, 1]), "hybrid").tolist() == [0, 1, 2]
    assert unsatisfied_required(G, Colouring(G, [1, 1, 1]), "hybrid", [1]).tolist() == [1]
    with pytest.raises(ValueError):
        is_conflict_free(G, c, "both")


def test_colouring_lift_with_offset():
    G = build_graph(4, [(0, 1), (1, 2), (2, 3)])
    S = G.edge_subgraph([0, 2])
    out = Colouring(S, [1, 2]).lift(G, offset=10)
    assert out.colour.tolist() == [11, 0, 12]


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 9), st.floats(0.2, 1), st.integers(0, 2**31), st.integers(1, 4))
def test_matches_brute_force_on_partial_colourings(n, p, seed, q):
    rng = np.random.default_rng(seed)
    G = random_graph(rng, n, p)
    edges = G.edges.tolist()
    col = rng.integers(0, q + 1, size=G.m)
    for mode in MODES:
        mask = satisfied_mask(G, Colouring(G, col), mode)
        for e in range(G.m):
            want = brute_satisfied(edges, col.tolist(), e, mode)
            assert bool(mask[e]) == want
            assert (satisfied(G, col, e, mode) is not None) == want


@pytest.mark.parametrize("mode", [kernels.CLOSED, kernels.OPEN, kernels.HYBRID])
def test_kernel_twins_agree(mode):
    rng = np.random.default_rng(5)
    for _ in range(20):
        G = random_graph(rng, int(rng.integers(2, 30)), float(rng.random()))
        if G.m == 0:
            continue
        eu, ev = np.ascontiguousarray(G.edges[:, 0]), np.ascontiguousarray(G.edges[:, 1])
        iso = (G.degree[eu] + G.degree[ev]) == 2
        C = rng.integers(0, 5, size=(7, G.m)).astype(np.int64)
        a = kernels.satisfied_nb(eu, ev, iso, C, G.n, 4, mode)
        b = kernels.satisfied_np(eu, ev, iso, C, G.n, 4, mode)
        assert np.array_equal(a, b)


def test_numpy_fallback_selected_by_env():
    code = (
        "from cfedge import kernels, _accel;"
        "print(_accel.USE_NUMBA, kernels.satisfied_rows is kernels.satisfied_np, kernels.peel is kernels.peel_py)"
    )
    env = dict(os.environ, CFEDGE_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "True", "True"]


def test_fallback_gives_same_colouring():
    code = (
        "import numpy as np;"
        "from cfedge.lab import gnp;"
        "from cfedge.chromatic import cf_total_by_chromatic;"
        "print(cf_total_by_chromatic(gnp(60, 0.2, 3)).colouring.colour.tolist())"
    )
    outs = []
    for flag in ("0", "1"):
        env = dict(os.environ, CFEDGE_NUMBA=flag)
        outs.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout)
    assert outs[0] == outs[1]


def test_batch_rows_independent():
    G = build_graph(5, C5)
    rows = np.array(list(itertools.product(range(1, 3), repeat=5)))
    M = satisfied_matrix(G, rows, "closed")
    for r, row in enumerate(rows):
        assert np.array_equal(M[r], satisfied_mask(G, Colouring(G, row), "closed"))
