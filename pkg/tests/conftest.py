import itertools

import numpy as np
import pytest

from cfedge.graph import build_graph

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def random_graph(rng, n, p):
    iu, iv = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return build_graph(n, np.column_stack([iu[keep], iv[keep]]))


def complete(n):
    return build_graph(n, list(itertools.combinations(range(n), 2)))


def cycle(n):
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


C5 = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]
C5_PLUS = C5 + [(0, 2)]


def brute_satisfied(edges, colour, e, mode):
    """Direct reading of the definitions, independent of the package code.

    ``colour[f] == 0`` means uncoloured. ``edges`` is a list of pairs.
    """
    u, v = edges[e]
    closed = [f for f, (a, b) in enumerate(edges) if {a, b} & {u, v}]
    open_ = [f for f in closed if f != e]
    if mode in ("open", "hybrid") and not open_:
        return True
    if mode == "closed":
        pool = closed
    else:
        pool = open_
    for f in pool:
        if colour[f] == 0:
            continue
        if mode == "hybrid":
            # unique in the closed neighbourhood, carried by an edge other than e
            if sum(1 for g in closed if colour[g] == colour[f]) == 1:
                return True
        elif sum(1 for g in pool if colour[g] == colour[f]) == 1:
            return True
    return False


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_bipartite(rng, n, p=None):
    """Bipartite graph on ``n`` vertices (random sides) with every single-edge component removed.

    Returns ``(G, side)`` with side 0 for X and 1 for Y.
    """
    p = float(rng.uniform(0.05, 0.6)) if p is None else p
    side = rng.integers(0, 2, size=n)
    iu, iv = np.triu_indices(n, 1)
    keep = (side[iu] != side[iv]) & (rng.random(len(iu)) < p)
    G = build_graph(n, np.column_stack([iu[keep], iv[keep]]))
    drop = G.isolated_edges()
    if len(drop):
        G = build_graph(n, np.delete(G.edges, drop, axis=0))
    return G, side


def bipartite_plus_matching(rng, n):
    """``(G, h, m)``: a bipartite graph without trivial components plus a matching on its vertices."""
    H, _ = random_bipartite(rng, n)
    verts = rng.permutation(np.flatnonzero(H.degree > 0))
    have = {tuple(e) for e in H.edges.tolist()}
    extra = []
    for a, b in zip(verts[0::2].tolist(), verts[1::2].tolist()):
        key = (min(a, b), max(a, b))
        if key not in have and rng.random() < 0.7:
            extra.append(key)
    G = build_graph(n, H.edges.tolist() + extra)
    return G, np.arange(H.m), np.arange(H.m, G.m)
