import math

import numpy as np
import pytest

from cfedge import kernels
from cfedge.asymptotic import (
    PartitionInfeasible, PipelineError, check_initial_split, check_partitions, colour_asymptotic,
    expected_violations, explicit_bound, initial_split, partition_phase, plan, sample_partitions,
)
from cfedge.decompose import balanced_split
from cfedge.graph import build_graph
from cfedge.verify import is_conflict_free

from conftest import complete, cycle, random_graph


@pytest.mark.parametrize("delta, eps, d, k, s", [
    (2**10, 1.0, 10000, 5, 2),
    (2, 1.0, 10, 5, 1),
    (10**6, 0.5, math.floor(10 * math.log2(10**6) ** 3), 10, 2),
])
def test_plan_formulas(delta, eps, d, k, s):
    p = plan(delta, eps)
    assert (p.d, p.k, p.s) == (d, k, s)


def test_plan_rejects():
    with pytest.raises(ValueError):
        plan(1, 1.0)
    with pytest.raises(ValueError):
        plan(10, 0)
    with pytest.raises(ValueError):
        plan(10, 1.0, d=5)


def test_explicit_bound_shape():
    p = plan(2**10, 1.0)
    want = 2 * 5 + 4 * 2 + (3 * math.ceil(math.log2(21)) + 16) + (3 * math.ceil(math.log2(10000)) + 16) + 17
    assert explicit_bound(p) == want


def test_empty_core_is_degenerate():
    G = cycle(9)
    sp = initial_split(G, plan(G.max_degree, 1.0))
    assert sp.degenerate and len(sp.H) == 0 and len(sp.D) == G.m


def test_complete_graph_is_its_own_core():
    G = complete(40)
    p = plan(G.max_degree, 1.0, d=12)
    sp = initial_split(G, p)
    assert not sp.degenerate
    check_initial_split(G, sp, p)
    assert len(sp.H) + len(sp.F) == G.m and len(sp.D) == 0


def test_split_invariants_on_random_graphs(rng):
    for _ in range(10):
        G = random_graph(rng, 120, float(rng.uniform(0.2, 0.6)))
        G = G.edge_subgraph(np.setdiff1d(np.arange(G.m), G.isolated_edges()))
        p = plan(G.max_degree, 1.0, d=int(rng.integers(10, 40)))
        check_initial_split(G, initial_split(G, p), p)


def test_infeasible_partitions_fail_explicitly():
    G = complete(30)
    p = plan(G.max_degree, 1.0, d=12)
    sp = initial_split(G, p)
    Hg = G.edge_subgraph(sp.H)
    lab = balanced_split(Hg, p.s).labels(Hg.m)
    with pytest.raises(PartitionInfeasible):
        sample_partitions(Hg, lab, p, 0)


@pytest.fixture(scope="module")
def k513():
    G = complete(513)
    p = plan(G.max_degree, 2.5, d=300)
    sp = initial_split(G, p)
    Hg = G.edge_subgraph(sp.H)
    lab = balanced_split(Hg, p.s).labels(Hg.m)
    return G, p, Hg, lab


def test_partitions_certified_and_reproducible(k513):
    _, p, Hg, lab = k513
    assert expected_violations(Hg, lab, p) < 4
    a = sample_partitions(Hg, lab, p, 7)
    b = sample_partitions(Hg, lab, p, 7)
    assert np.array_equal(a.X, b.X) and np.array_equal(a.Z, b.Z)
    check_partitions(Hg, lab, a, p)
    U3 = [a.U3(i) for i in range(p.s)]
    assert sum(len(u) for u in U3) == int((Hg.degree > 0).sum())


def test_partition_phase_accounting(k513):
    _, p, Hg, lab = k513
    fam = sample_partitions(Hg, lab, p, 3)
    ph = partition_phase(Hg, lab, fam, p)
    used = np.unique(ph.colour[ph.colour > 0])
    assert used.max() <= p.s * p.k + 4 * p.s
    assert set(range(1, p.s * p.k + 1)) <= set(used.tolist())
    # every unsatisfied edge is always bad, recomputed from X and Z
    eu, ev = Hg.edges[:, 0].copy(), Hg.edges[:, 1].copy()
    ab = kernels.always_bad_np(eu, ev, fam.Z, fam.X)
    assert ab[ph.R].all()
    dR = np.bincount(Hg.edges[ph.R].reshape(-1), minlength=Hg.n)
    assert dR.max(initial=0) <= 2 * p.log2delta


def test_always_bad_twins_agree(rng):
    for _ in range(10):
        n, s, k = 50, int(rng.integers(1, 5)), int(rng.integers(1, 4))
        G = random_graph(rng, n, 0.3)
        eu, ev = G.edges[:, 0].copy(), G.edges[:, 1].copy()
        Z = rng.integers(0, s, size=n)
        X = rng.integers(1, 3, size=(n, s, k)).astype(np.int8)
        part = rng.integers(0, s, size=G.m)
        assert np.array_equal(kernels.always_bad_nb(eu, ev, Z, X), kernels.always_bad_np(eu, ev, Z, X))
        assert np.array_equal(kernels.u3_counts_nb(eu, ev, part, Z, n, s), kernels.u3_counts_np(eu, ev, part, Z, n, s))


def test_pipeline_partition_regime(k513):
    G = k513[0]
    c, rep = colour_asymptotic(G, 2.5, 0, d=300)
    assert rep.regime == "partition"
    assert rep.verdict and rep.disjoint and rep.within_bound
    names = [ph.name for ph in rep.phases]
    assert names[:2] == ["partition", "saturation"]
    assert rep.residual_max_degree <= 2 * math.log2(G.max_degree)
    assert c.is_total


@pytest.mark.parametrize("G", [cycle(5), complete(50), build_graph(6, [(0, 1), (1, 2), (3, 4)])],
                         ids=["C5", "K50", "with-isolated-edge"])
def test_pipeline_small_graphs(G):
    c, rep = colour_asymptotic(G, 1.0, 1)
    assert rep.verdict and c.is_total and rep.within_bound
    assert is_conflict_free(G, c, "hybrid").ok
    d = rep.as_dict()
    assert d["total_colours"] == c.num_colours


def test_pipeline_rejects_tiny_degree():
    with pytest.raises(ValueError):
        colour_asymptotic(build_graph(2, [(0, 1)]), 1.0, 0)


def test_pipeline_error_names_phase():
    err = PipelineError("partition_phase", "boom")
    assert err.phase == "partition_phase" and "partition_phase" in str(err)
