"""Immutable simple graphs keyed by dense edge ids."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised for malformed graph input (loops, duplicates, bad ids)."""


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Edge ``e`` joins ``edges[e, 0]`` and ``edges[e, 1]``; ids follow the input
    order and never change. Subgraphs made with :meth:`edge_subgraph` keep the
    vertex set and remember which edge of the immediate parent each of their
    edges came from (``origin``), so colourings on a piece can be lifted back.
    """

    __slots__ = ("n", "edges", "origin", "degree", "indptr", "inc", "nbr", "_index")

    def __init__(self, n: int, edges: np.ndarray, origin: np.ndarray | None = None):
        self.n = int(n)
        self.edges = edges
        self.edges.setflags(write=False)
        self.origin = origin
        m = len(edges)
        ends = edges.reshape(-1)
        self.degree = np.bincount(ends, minlength=self.n).astype(np.int64)
        self.indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(self.degree, out=self.indptr[1:])
        # incidence lists sorted by edge id
        eid = np.repeat(np.arange(m, dtype=np.int64), 2)
        order = np.argsort(ends, kind="stable")
        self.inc = eid[order]
        other = edges[:, ::-1].reshape(-1)
        self.nbr = other[order].astype(np.int64)
        for arr in (self.degree, self.indptr, self.inc, self.nbr):
            arr.setflags(write=False)
        self._index = None

    # -- basic queries ------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def max_degree(self) -> int:
        return int(self.degree.max()) if self.n else 0

    @property
    def min_degree(self) -> int:
        return int(self.degree.min()) if self.n else 0

    def incident(self, v: int) -> np.ndarray:
        return self.inc[self.indptr[v]:self.indptr[v + 1]]

    def neighbours(self, v: int) -> np.ndarray:
        return self.nbr[self.indptr[v]:self.indptr[v + 1]]

    def endpoints(self, e: int) -> tuple[int, int]:
        u, v = self.edges[e]
        return int(u), int(v)

    def edge_id(self, u: int, v: int) -> int:
        if self._index is None:
            self._index = {(min(a, b), max(a, b)): i for i, (a, b) in enumerate(self.edges.tolist())}
        try:
            return self._index[(min(u, v), max(u, v))]
        except KeyError:
            raise GraphError(f"no edge {u}-{v}") from None

    def check_edge(self, e: int) -> int:
        if not 0 <= e < self.m:
            raise GraphError(f"invalid edge id {e} (graph has {self.m} edges)")
        return int(e)

    def non_isolated(self) -> np.ndarray:
        return np.flatnonzero(self.degree > 0)

    def isolated_edges(self) -> np.ndarray:
        """Edges that form a whole component on their own."""
        u, v = self.edges[:, 0], self.edges[:, 1]
        return np.flatnonzero((self.degree[u] == 1) & (self.degree[v] == 1))

    def edge_subgraph(self, ids: Iterable[int]) -> "Graph":
        ids = np.unique(np.asarray(list(ids) if not isinstance(ids, np.ndarray) else ids, dtype=np.int64))
        return Graph(self.n, self.edges[ids].copy(), ids)

    def canonical_edges(self) -> list[tuple[int, int]]:
        return sorted((min(u, v), max(u, v)) for u, v in self.edges.tolist())

    def components(self) -> np.ndarray:
        """Component label per vertex, numbered by lowest vertex (isolated vertices get their own)."""
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import connected_components

        A = coo_matrix((np.ones(self.m), (self.edges[:, 0], self.edges[:, 1])), shape=(self.n, self.n))
        _, label = connected_components(A, directed=False)
        _, first = np.unique(label, return_index=True)
        rank = np.empty(len(first), dtype=np.int64)
        rank[np.argsort(first)] = np.arange(len(first))
        return rank[label]

    def edge_components(self) -> list[np.ndarray]:
        """Edge ids of each component that has at least one edge, ordered by lowest vertex."""
        if self.m == 0:
            return []
        label = self.components()
        lab = label[self.edges[:, 0]]
        order = np.argsort(lab, kind="stable")
        cuts = np.flatnonzero(np.diff(lab[order])) + 1
        return np.split(order, cuts)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m}, Δ={self.max_degree})"


def build_graph(n: int, pairs: Sequence[tuple[int, int]] | np.ndarray) -> Graph:
    arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2) if len(pairs) else np.zeros((0, 2), dtype=np.int64)
    if n < 0:
        raise GraphError("vertex count must be non-negative")
    if arr.size:
        if arr.min() < 0 or arr.max() >= n:
            bad = int(np.flatnonzero((arr < 0).any(1) | (arr >= n).any(1))[0])
            raise GraphError(f"pair {bad} {tuple(arr[bad])} has a vertex outside 0..{n - 1}")
        loops = np.flatnonzero(arr[:, 0] == arr[:, 1])
        if len(loops):
            raise GraphError(f"pair {loops[0]} is a loop at vertex {arr[loops[0], 0]}")
        key = np.sort(arr, axis=1)
        _, first, counts = np.unique(key, axis=0, return_index=True, return_counts=True)
        if (counts > 1).any():
            dup = key[first[np.flatnonzero(counts > 1)[0]]]
            raise GraphError(f"duplicate edge {tuple(int(x) for x in dup)}")
    return Graph(n, arr.copy())


# --------------------------------------------------------------------------
# edge sets and vertex partitions


def edge_set(G: Graph, ids: Iterable[int]) -> np.ndarray:
    """Sorted array of distinct edge ids, validated against ``G``."""
    arr = np.unique(np.fromiter(ids, dtype=np.int64) if not isinstance(ids, np.ndarray) else ids.astype(np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= G.m):
        raise GraphError("edge id outside the host graph")
    return arr


def edge_neighbourhood(G: Graph, e: int, mode: str = "closed") -> np.ndarray:
    e = G.check_edge(e)
    u, v = G.endpoints(e)
    both = np.union1d(G.incident(u), G.incident(v))
    if mode == "closed":
        return both
    if mode == "open":
        return both[both != e]
    raise ValueError(f"mode must be 'closed' or 'open', not {mode!r}")


@dataclass(frozen=True)
class VertexPartition:
    blocks: tuple[frozenset, ...]
    universe: frozenset

    def __post_init__(self):
        seen: set = set()
        for b in self.blocks:
            if seen & b:
                raise GraphError("partition blocks overlap")
            seen |= b
        if seen != set(self.universe):
            raise GraphError("partition blocks do not cover the universe")

    @classmethod
    def of(cls, *blocks: Iterable[int], universe: Iterable[int] | None = None) -> "VertexPartition":
        bs = tuple(frozenset(int(x) for x in b) for b in blocks)
        uni = frozenset().union(*bs) if universe is None else frozenset(int(x) for x in universe)
        return cls(bs, uni)

    def side_array(self, n: int) -> np.ndarray:
        """Block index per vertex, -1 for vertices outside the universe."""
        side = np.full(n, -1, dtype=np.int64)
        for i, b in enumerate(self.blocks):
            if b:
                side[np.fromiter(b, dtype=np.int64)] = i
        return side


def spanning_forest(G: Graph) -> np.ndarray:
    """BFS forest, each tree rooted at the lowest vertex of its component."""
    seen = np.zeros(G.n, dtype=bool)
    picked = []
    for root in range(G.n):
        if seen[root] or G.degree[root] == 0:
            continue
        seen[root] = True
        queue = [root]
        head = 0
        while head < len(queue):
            x = queue[head]
            head += 1
            lo, hi = G.indptr[x], G.indptr[x + 1]
            for e, y in zip(G.inc[lo:hi].tolist(), G.nbr[lo:hi].tolist()):
                if not seen[y]:
                    seen[y] = True
                    picked.append(e)
                    queue.append(y)
    return np.sort(np.asarray(picked, dtype=np.int64))


def two_colour(G: Graph) -> np.ndarray | None:
    """0/1 side per vertex from BFS (lowest vertex of a component gets 0), or None if not bipartite."""
    side = np.full(G.n, -1, dtype=np.int64)
    for root in range(G.n):
        if side[root] >= 0:
            continue
        side[root] = 0
        stack = [root]
        while stack:
            x = stack.pop()
            for y in G.neighbours(x).tolist():
                if side[y] < 0:
                    side[y] = 1 - side[x]
                    stack.append(y)
                elif side[y] == side[x]:
                    return None
    return side


def is_matching(G: Graph, ids: Iterable[int]) -> bool:
    ids = np.asarray(list(ids) if not isinstance(ids, np.ndarray) else ids, dtype=np.int64)
    ends = G.edges[ids].reshape(-1)
    return len(np.unique(ends)) == len(ends)


def is_forest(G: Graph, ids: Iterable[int]) -> bool:
    parent = list(range(G.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in ids:
        a, b = find(int(G.edges[e, 0])), find(int(G.edges[e, 1]))
        if a == b:
            return False
        parent[a] = b
    return True
