"""Core peeling, balanced k-way edge splits and degeneracy colouring."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import Graph


class DecompositionError(RuntimeError):
    pass


@dataclass
class CoreSplit:
    H: np.ndarray  # edges with both ends in the d-core
    D: np.ndarray  # the (d-1)-degenerate remainder
    removal_order: np.ndarray
    d: int

    def core_vertices(self, G: Graph) -> np.ndarray:
        removed = np.zeros(G.n, dtype=bool)
        removed[self.removal_order] = True
        return np.flatnonzero(~removed & (G.degree > 0))


@dataclass
class BalancedSplit:
    parts: list[np.ndarray]

    def labels(self, m: int) -> np.ndarray:
        lab = np.full(m, -1, dtype=np.int64)
        for i, p in enumerate(self.parts):
            lab[p] = i
        return lab


def core_split(G: Graph, d: int) -> CoreSplit:
    """Peel minimum-degree vertices while some vertex has degree below ``d``."""
    if d < 0:
        raise ValueError("d must be non-negative")
    order, _ = kernels.peel(G.indptr, G.nbr, d)
    removed = np.zeros(G.n, dtype=bool)
    removed[order] = True
    touches = removed[G.edges[:, 0]] | removed[G.edges[:, 1]]
    split = CoreSplit(np.flatnonzero(~touches), np.flatnonzero(touches), order, d)
    check_core_split(G, split)
    return split


def check_core_split(G: Graph, split: CoreSplit) -> None:
    d = split.d
    if len(np.intersect1d(split.H, split.D)) or len(split.H) + len(split.D) != G.m:
        raise DecompositionError("H and D do not partition E")
    removed = np.zeros(G.n, dtype=bool)
    removed[split.removal_order] = True
    if len(split.H):
        hdeg = np.bincount(G.edges[split.H].reshape(-1), minlength=G.n)
        if hdeg[hdeg > 0].min() < d:
            raise DecompositionError("core has a vertex of degree below d")
    both_core = ~removed[G.edges[split.D, 0]] & ~removed[G.edges[split.D, 1]]
    if both_core.any():
        raise DecompositionError("a D edge has both ends in the core")
    # reversed removal order: each vertex sees at most d-1 later-removed or core neighbours
    rank = np.full(G.n, G.n, dtype=np.int64)
    rank[split.removal_order] = np.arange(len(split.removal_order))
    for v in split.removal_order.tolist():
        back = int((rank[G.neighbours(v)] > rank[v]).sum())
        if back > max(d - 1, 0):
            raise DecompositionError(f"vertex {v} breaks (d-1)-degeneracy")


def degeneracy_order(G: Graph) -> np.ndarray:
    """Full min-degree peel order (lowest id breaks ties)."""
    order, _ = kernels.peel(G.indptr, G.nbr, np.iinfo(np.int64).max)
    return order


def degeneracy(G: Graph) -> int:
    _, back = kernels.peel(G.indptr, G.nbr, np.iinfo(np.int64).max)
    return int(back.max()) if len(back) else 0


def degeneracy_colouring(G: Graph) -> np.ndarray:
    """Greedy proper vertex colouring (colours from 1) along the reversed peel order."""
    order = degeneracy_order(G)
    col = np.zeros(G.n, dtype=np.int64)
    for v in order[::-1].tolist():
        taken = set(col[G.neighbours(v)].tolist())
        a = 1
        while a in taken:
            a += 1
        col[v] = a
    return col


# --------------------------------------------------------------------------
# balanced splits


def _euler_halve(pairs: np.ndarray, nv: int, prefer: int | None = None, rng=None) -> np.ndarray:
    """0/1 label per edge of ``pairs`` (local vertex ids ``0..nv-1``).

    Odd-degree vertices are joined to a dummy vertex, Euler circuits are
    walked and labels alternate along each circuit. Circuits through the
    dummy start at the dummy; the others start at ``prefer`` when it lies in
    them, else at their lowest vertex. Every vertex except a circuit start
    ends up with ``|d0 - d1| <= 1``; a start vertex with ``<= 2``.
    """
    m = len(pairs)
    deg = np.bincount(pairs.reshape(-1), minlength=nv)
    odd = np.flatnonzero(deg % 2)
    dummy = nv
    allp = pairs
    if len(odd):
        allp = np.vstack([pairs, np.column_stack([odd, np.full(len(odd), dummy)])])
    total = len(allp)
    nn = nv + 1
    ends = allp.reshape(-1)
    order = np.argsort(ends, kind="stable")
    eid = np.repeat(np.arange(total), 2)[order]
    other = allp[:, ::-1].reshape(-1)[order]
    indptr = np.zeros(nn + 1, dtype=np.int64)
    np.cumsum(np.bincount(ends, minlength=nn), out=indptr[1:])
    eid_l = eid.tolist()
    oth_l = other.tolist()
    ptr = indptr[:-1].tolist()
    end = indptr[1:].tolist()
    used = bytearray(total)
    label = np.full(total, -1, dtype=np.int64)

    starts = []
    if len(odd):
        starts.append(dummy)
    if prefer is not None:
        starts.append(prefer)
    cand = np.flatnonzero(deg > 0)
    if rng is not None:
        cand = rng.permutation(cand)
    starts.extend(cand.tolist())

    for s in starts:
        if ptr[s] >= end[s]:
            continue
        # Hierholzer; circuit collected in reverse
        stack = [(s, -1)]
        circuit = []
        while stack:
            v, ein = stack[-1]
            p = ptr[v]
            while p < end[v] and used[eid_l[p]]:
                p += 1
            ptr[v] = p
            if p < end[v]:
                e = eid_l[p]
                used[e] = 1
                stack.append((oth_l[p], e))
            else:
                stack.pop()
                if ein >= 0:
                    circuit.append(ein)
        circuit.reverse()
        label[circuit] = np.arange(len(circuit)) % 2
    assert (label >= 0).all()
    return label[:m]


def _part_degrees(G: Graph, lab: np.ndarray, k: int) -> np.ndarray:
    deg = np.zeros((G.n, k), dtype=np.int64)
    np.add.at(deg, (G.edges[:, 0], lab), 1)
    np.add.at(deg, (G.edges[:, 1], lab), 1)
    return deg


def check_balanced_split(G: Graph, split: BalancedSplit) -> None:
    k = len(split.parts)
    lab = split.labels(G.m)
    if (lab < 0).any() or sum(len(p) for p in split.parts) != G.m:
        raise DecompositionError("parts do not partition E")
    deg = _part_degrees(G, lab, k)
    target = G.degree[:, None] / k
    if (deg < target - 2).any() or (deg > target + 2).any():
        v = int(np.flatnonzero(((deg < target - 2) | (deg > target + 2)).any(axis=1))[0])
        raise DecompositionError(f"vertex {v} part degrees {deg[v].tolist()} outside d/k±2 (d={G.degree[v]})")


def _rebalance(G: Graph, lab: np.ndarray, i: int, j: int, v: int, rng=None) -> None:
    """Re-halve the component through ``v`` of parts ``i`` and ``j``."""
    sel = np.flatnonzero((lab == i) | (lab == j))
    pairs = G.edges[sel]
    # restrict to the component containing v
    verts, local = np.unique(pairs, return_inverse=True)
    local = local.reshape(-1, 2)
    nv = len(verts)
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in local.tolist():
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    lv = int(np.searchsorted(verts, v))
    root = find(lv)
    keep = np.fromiter((find(a) == root for a in local[:, 0].tolist()), dtype=bool, count=len(local))
    sub = local[keep]
    half = _euler_halve(sub, nv, prefer=lv, rng=rng)
    lab[sel[keep]] = np.where(half == 0, i, j)


def balanced_split(G: Graph, k: int, seed: int | None = None, max_rounds: int | None = None) -> BalancedSplit:
    """Split ``E`` into ``k`` parts with ``d(v)/k - 2 <= d_i(v) <= d(v)/k + 2``.

    Powers of two: recursive Euler halving. Otherwise a greedy least-loaded
    assignment is repaired by re-halving, for a vertex whose heaviest and
    lightest parts differ by more than 2, the component of those two parts
    that contains it. Each repair strictly lowers ``sum_v sum_i d_i(v)^2`` so
    the loop terminates; the bound is checked before returning.
    """
    if k < 1:
        raise ValueError("k must be positive")
    m = G.m
    rng = np.random.default_rng(seed) if seed is not None else None
    if k == 1:
        split = BalancedSplit([np.arange(m, dtype=np.int64)])
        check_balanced_split(G, split)
        return split

    lab = np.zeros(m, dtype=np.int64)
    if k & (k - 1) == 0:
        groups = [np.arange(m, dtype=np.int64)]
        for _ in range(int(math.log2(k))):
            nxt = []
            for g in groups:
                if len(g) == 0:
                    nxt += [g, g]
                    continue
                verts, local = np.unique(G.edges[g], return_inverse=True)
                half = _euler_halve(local.reshape(-1, 2), len(verts), rng=rng)
                nxt += [g[half == 0], g[half == 1]]
            groups = nxt
        for i, g in enumerate(groups):
            lab[g] = i
    else:
        load = np.zeros((G.n, k), dtype=np.int64)
        for e, (u, v) in enumerate(G.edges.tolist()):
            i = int(np.argmin(load[u] + load[v]))
            lab[e] = i
            load[u, i] += 1
            load[v, i] += 1

    deg = _part_degrees(G, lab, k)
    rounds = 0
    limit = max_rounds if max_rounds is not None else 4 * m + 10
    while True:
        spread = deg.max(axis=1) - deg.min(axis=1)
        bad = np.flatnonzero(spread > 2)
        if not len(bad):
            break
        rounds += 1
        if rounds > limit:
            raise DecompositionError(f"balanced split did not converge in {limit} repairs")
        v = int(bad[0])
        i, j = int(deg[v].argmax()), int(deg[v].argmin())
        before = lab.copy()
        _rebalance(G, lab, i, j, v, rng=rng)
        changed = np.flatnonzero(before != lab)
        for e in changed.tolist():
            a, b = G.edges[e]
            deg[a, before[e]] -= 1
            deg[b, before[e]] -= 1
            deg[a, lab[e]] += 1
            deg[b, lab[e]] += 1

    split = BalancedSplit([np.flatnonzero(lab == i) for i in range(k)])
    check_balanced_split(G, split)
    return split
