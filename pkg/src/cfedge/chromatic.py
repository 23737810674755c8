"""Conflict-free colourings driven by a proper vertex colouring.

With ``alpha`` vertex colours:

* :func:`cf_by_chromatic_partial` uses ``3*ceil(log2 alpha)`` colours and may
  leave an uncoloured matching unsatisfied;
* :func:`cf_by_chromatic` adds 16 colours on a spanning forest plus that
  matching and satisfies every non-isolated edge;
* :func:`cf_total_by_chromatic` fills the rest with one more colour.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bipartite import ConstructionError, sixteen_colour, three_colour
from .decompose import degeneracy_colouring
from .graph import Graph, is_matching, spanning_forest
from .verify import Colouring, is_conflict_free


@dataclass
class ChromaticCFResult:
    colouring: Colouring
    residue: np.ndarray  # uncoloured matching left unsatisfied (partial variant)
    palette_size: int  # colours set aside by the construction
    alpha: int


def log2_ceil(a: int) -> int:
    return 0 if a <= 1 else (int(a) - 1).bit_length()


def _slot_map(classes: list[int], sizes: dict[int, int], beta: int, lo: int, out: dict[int, int]) -> None:
    """Place colour classes into ``beta`` slots, halving recursively by total size."""
    if beta == 1:
        assert len(classes) <= 1
        for c in classes:
            out[c] = lo
        return
    half = beta // 2
    groups: list[list[int]] = [[], []]
    load = [0, 0]
    for c in classes:
        if len(groups[0]) >= half:
            g = 1
        elif len(groups[1]) >= half:
            g = 0
        else:
            g = 0 if load[0] <= load[1] else 1
        groups[g].append(c)
        load[g] += sizes[c]
    _slot_map(groups[0], sizes, half, lo, out)
    _slot_map(groups[1], sizes, half, lo + half, out)


def _swap_loop(G: Graph, sub: Graph, slot: np.ndarray, mid: int) -> int:
    """Swap the colours of ``x, y`` while ``xy`` is an isolated cut edge touching another edge.

    Each swap turns the other edges at ``x`` and ``y`` into cut edges, so the
    cut grows strictly and the loop stops after at most ``|E|`` swaps.
    """
    n = G.n
    ends = sub.edges
    deg = sub.degree
    indptr, nbr, inc = sub.indptr, sub.nbr.tolist(), sub.inc.tolist()
    upper = slot >= mid
    cutdeg = np.zeros(n, dtype=np.int64)
    is_cut = upper[ends[:, 0]] != upper[ends[:, 1]]
    np.add.at(cutdeg, ends[is_cut].reshape(-1), 1)

    def recount(v):
        cutdeg[v] = sum(1 for w in nbr[indptr[v]:indptr[v + 1]] if upper[w] != upper[v])

    work = np.flatnonzero(is_cut).tolist()
    swaps = 0
    while work:
        e = work.pop()
        x, y = int(ends[e, 0]), int(ends[e, 1])
        if upper[x] == upper[y] or cutdeg[x] != 1 or cutdeg[y] != 1 or deg[x] + deg[y] <= 2:
            continue
        slot[x], slot[y] = slot[y], slot[x]
        upper[x], upper[y] = upper[y], upper[x]
        swaps += 1
        if swaps > sub.m:
            raise ConstructionError("swap loop exceeded |E| swaps")
        touched = {x, y}
        for v in (x, y):
            touched.update(nbr[indptr[v]:indptr[v + 1]])
        for v in touched:
            recount(v)
        for v in touched:
            work.extend(inc[indptr[v]:indptr[v + 1]])
    return swaps


def cf_by_chromatic_partial(G: Graph, vcol) -> ChromaticCFResult:
    """Partial colouring with ``3*ceil(log2 alpha)`` colours; unsatisfied edges form a matching.

    The ``alpha`` classes of ``vcol`` go into ``beta = 2**ceil(log2 alpha)``
    slots. At each level the lower half of the slot range is X and the upper
    half Y; the cut ``G[X, Y]`` is repaired by swaps, its nontrivial part is
    three-coloured with that level's three colours and both halves recurse,
    sharing the colours of the next level.
    """
    vcol = np.asarray(vcol, dtype=np.int64)
    if len(vcol) != G.n:
        raise ValueError("vertex colouring length differs from vertex count")
    if G.m and (vcol[G.edges[:, 0]] == vcol[G.edges[:, 1]]).any():
        raise ValueError("vertex colouring is not proper")
    classes, sizes = np.unique(vcol, return_counts=True)
    alpha = len(classes)
    L = log2_ceil(alpha)
    beta = 1 << L
    order = sorted(range(alpha), key=lambda i: (-int(sizes[i]), int(classes[i])))
    slots: dict[int, int] = {}
    _slot_map([int(classes[i]) for i in order], {int(c): int(s) for c, s in zip(classes, sizes)}, beta, 0, slots)
    slot = np.array([slots[int(c)] for c in vcol], dtype=np.int64) if G.n else np.zeros(0, dtype=np.int64)

    out = Colouring(G)
    residue: list[np.ndarray] = []
    # (edge ids, slot range lo, hi, level)
    stack = [(np.arange(G.m, dtype=np.int64), 0, beta, 0)]
    while stack:
        edges, lo, hi, level = stack.pop()
        if len(edges) == 0:
            continue
        if hi - lo == 1:
            raise ConstructionError("edge inside a single colour class")
        mid = (lo + hi) // 2
        sub = G.edge_subgraph(edges)
        _swap_loop(G, sub, slot, mid)
        upper = slot >= mid
        if (slot[sub.edges[:, 0]] == slot[sub.edges[:, 1]]).any():
            raise ConstructionError("swap broke the vertex colouring")
        a, b = upper[sub.edges[:, 0]], upper[sub.edges[:, 1]]
        cut = a != b
        iso = (sub.degree[sub.edges[:, 0]] == 1) & (sub.degree[sub.edges[:, 1]] == 1)
        cutdeg = np.bincount(sub.edges[cut].reshape(-1), minlength=G.n)
        lone = cut & (cutdeg[sub.edges[:, 0]] == 1) & (cutdeg[sub.edges[:, 1]] == 1)
        if (lone & ~iso).any():
            raise ConstructionError("isolated cut edge adjacent to another edge after swaps")
        residue.append(sub.origin[cut & iso])
        body = np.flatnonzero(cut & ~iso)
        if len(body):
            piece = sub.edge_subgraph(body)
            c3 = three_colour(piece, upper.astype(np.int64))
            done = c3.colour > 0
            out.colour[sub.origin[body[done]]] = c3.colour[done] + 3 * level
        stack.append((sub.origin[~cut & ~a], lo, mid, level + 1))
        stack.append((sub.origin[~cut & a], mid, hi, level + 1))

    res = np.sort(np.concatenate(residue)) if residue else np.zeros(0, dtype=np.int64)
    if not is_matching(G, res):
        raise ConstructionError("residue is not a matching")
    bad = np.setdiff1d(is_conflict_free(G, out, "hybrid").unsatisfied, res)
    if len(bad):
        raise ConstructionError(f"edges outside the residue left unsatisfied: {bad[:10].tolist()}")
    return ChromaticCFResult(out, res, 3 * L, alpha)


def _vertex_colouring(G: Graph, vcol, exact_chi: bool) -> np.ndarray:
    if vcol is not None:
        return np.asarray(vcol, dtype=np.int64)
    if exact_chi and G.n <= 20:
        from .exact import exact_chromatic_number

        return exact_chromatic_number(G).witness
    return degeneracy_colouring(G)


def cf_by_chromatic(G: Graph, vcol=None, exact_chi: bool = False) -> ChromaticCFResult:
    """Partial colouring with ``3*ceil(log2 alpha) + 16`` colours satisfying all non-isolated edges.

    ``vcol`` defaults to the degeneracy greedy colouring (exact chromatic
    colouring instead when ``exact_chi`` and at most 20 vertices).
    """
    vcol = _vertex_colouring(G, vcol, exact_chi)
    T = spanning_forest(G)
    rest = np.setdiff1d(np.arange(G.m), T)
    Gp = G.edge_subgraph(rest)
    part = cf_by_chromatic_partial(Gp, vcol)
    out = part.colouring.lift(G)
    offset = part.palette_size
    residue = Gp.origin[part.residue]
    # single-edge trees are isolated edges of G: exempt, left out
    trees = np.setdiff1d(T, G.isolated_edges())
    if len(trees) or len(residue):
        F = G.edge_subgraph(np.concatenate([trees, residue]))
        h = np.flatnonzero(np.isin(F.origin, trees))
        mm = np.flatnonzero(np.isin(F.origin, residue))
        c16 = sixteen_colour(F, h, mm)
        c16.lift(G, into=out, offset=offset)
    v = is_conflict_free(G, out, "hybrid")
    if not v.ok:
        raise ConstructionError(f"non-isolated edges left unsatisfied: {v.unsatisfied[:10]}")
    return ChromaticCFResult(out, np.zeros(0, dtype=np.int64), offset + 16, part.alpha)


def cf_total_by_chromatic(G: Graph, vcol=None, exact_chi: bool = False) -> ChromaticCFResult:
    """:func:`cf_by_chromatic` with one extra colour on every uncoloured edge."""
    res = cf_by_chromatic(G, vcol, exact_chi)
    c = res.colouring
    c.colour[c.colour == 0] = res.palette_size + 1
    v = is_conflict_free(G, c, "hybrid")
    if not v.ok:
        raise ConstructionError(f"total colouring not conflict-free at {v.unsatisfied[:10]}")
    return ChromaticCFResult(c, res.residue, res.palette_size + 1, res.alpha)


def chromatic_bound(alpha: int, total: bool = False) -> int:
    return 3 * log2_ceil(alpha) + (17 if total else 16)


__all__ = [
    "ChromaticCFResult",
    "cf_by_chromatic_partial",
    "cf_by_chromatic",
    "cf_total_by_chromatic",
    "chromatic_bound",
    "log2_ceil",
]

