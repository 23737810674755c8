"""Exact conflict-free chromatic indices and chromatic number on tiny graphs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .verify import Colouring, _mode, is_conflict_free

MAX_EDGES = 20
MAX_VERTICES = 20


class InstanceTooLarge(ValueError):
    pass


@dataclass
class ExactResult:
    value: int
    witness: np.ndarray
    nodes_explored: int


def _edge_satisfied(mode, e, hood, col, exempt):
    if exempt:
        return True
    counts = {}
    for f in hood:
        if mode == "open" and f == e:
            continue
        a = col[f]
        counts[a] = counts.get(a, 0) + 1
    if mode == "hybrid":
        ce = col[e]
        return any(cnt == 1 and a != ce for a, cnt in counts.items())
    return 1 in counts.values()


def exact_index(G: Graph, mode: str = "hybrid", max_edges: int = MAX_EDGES) -> ExactResult:
    """Minimum number of colours in a total colouring satisfying every required edge.

    Tries k = 1, 2, ... and runs a depth-first search for each. Edges are
    assigned in order of decreasing degree sum; an edge's constraint is
    checked as soon as its whole closed neighbourhood is coloured. Colours
    are canonical: the next edge may open at most one new colour.
    """
    mode = _mode(mode)
    m = G.m
    if m > max_edges:
        raise InstanceTooLarge(f"{m} edges exceeds the exact-search limit of {max_edges}")
    if m == 0:
        return ExactResult(0, np.zeros(0, dtype=np.int64), 0)

    dsum = G.degree[G.edges[:, 0]] + G.degree[G.edges[:, 1]]
    order = sorted(range(m), key=lambda e: (-int(dsum[e]), e))
    pos = {e: i for i, e in enumerate(order)}
    hoods = []
    for e in range(m):
        u, v = G.endpoints(e)
        hoods.append(sorted(set(G.incident(u).tolist()) | set(G.incident(v).tolist())))
    exempt = [len(h) == 1 and mode != "closed" for h in hoods]
    # edges whose check becomes possible at each depth
    ready = [[] for _ in range(m)]
    for e in range(m):
        ready[max(pos[f] for f in hoods[e])].append(e)

    nodes = 0
    for k in range(1, m + 1):
        col = [0] * m
        found = False

        def dfs(depth, used):
            nonlocal nodes, found
            if depth == m:
                found = True
                return
            e = order[depth]
            for a in range(1, min(used + 1, k) + 1):
                nodes += 1
                col[e] = a
                if all(_edge_satisfied(mode, f, hoods[f], col, exempt[f]) for f in ready[depth]):
                    dfs(depth + 1, max(used, a))
                    if found:
                        return
            col[e] = 0

        dfs(0, 0)
        if found:
            witness = np.array(col, dtype=np.int64)
            assert is_conflict_free(G, Colouring(G, witness), mode).ok
            return ExactResult(k, witness, nodes)
    raise AssertionError("a rainbow colouring is always conflict-free")


def exact_chromatic_number(G: Graph, max_vertices: int = MAX_VERTICES) -> ExactResult:
    n = G.n
    if n > max_vertices:
        raise InstanceTooLarge(f"{n} vertices exceeds the exact-search limit of {max_vertices}")
    if n == 0:
        return ExactResult(0, np.zeros(0, dtype=np.int64), 0)
    order = sorted(range(n), key=lambda v: (-int(G.degree[v]), v))
    nbrs = [set(G.neighbours(v).tolist()) for v in range(n)]
    nodes = 0
    for k in range(1, n + 1):
        col = [0] * n
        found = False

        def dfs(depth, used):
            nonlocal nodes, found
            if depth == n:
                found = True
                return
            v = order[depth]
            taken = {col[w] for w in nbrs[v]}
            for a in range(1, min(used + 1, k) + 1):
                if a in taken:
                    continue
                nodes += 1
                col[v] = a
                dfs(depth + 1, max(used, a))
                if found:
                    return
            col[v] = 0

        dfs(0, 0)
        if found:
            return ExactResult(k, np.array(col, dtype=np.int64), nodes)
    raise AssertionError("n colours always suffice")
