"""Partial colourings of bipartite graphs (and bipartite graphs plus a matching).

The bipartition is always passed in explicitly as a :class:`VertexPartition`
``(X, Y)``; callers decide which side is which.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, VertexPartition, two_colour
from .verify import Colouring, is_conflict_free, saturated_vertices


class PreconditionError(ValueError):
    """Input outside an operation's domain; ``reason`` names which check failed."""

    def __init__(self, reason: str, msg: str):
        super().__init__(f"{reason}: {msg}")
        self.reason = reason


class ConstructionError(AssertionError):
    """A post-hoc audit of a colouring construction failed."""


STAR_AT_X = "star-at-X"
SUBDIVIDED_AT_Y = "subdivided-star-at-Y"


@dataclass
class StarComponent:
    kind: str
    centre: int
    edges: np.ndarray


@dataclass
class StarCover:
    H: np.ndarray
    components: list[StarComponent] = field(default_factory=list)


def _sides(G: Graph, part) -> np.ndarray:
    if isinstance(part, VertexPartition):
        if len(part.blocks) != 2:
            raise ValueError("need a bipartition (X, Y)")
        side = part.side_array(G.n)
    else:
        side = np.asarray(part, dtype=np.int64)
    u, v = G.edges[:, 0], G.edges[:, 1]
    if len(u):
        if (side[u] < 0).any() or (side[v] < 0).any():
            raise PreconditionError("not-bipartite", "an edge has an endpoint outside X ∪ Y")
        if (side[u] == side[v]).any():
            e = int(np.flatnonzero(side[u] == side[v])[0])
            raise PreconditionError("not-bipartite", f"edge {e} lies inside one side")
    return side


def _component_labels(G: Graph, alive: np.ndarray | None = None) -> np.ndarray:
    """Component id per edge (over ``alive`` edges only; others get -1)."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    ids = np.arange(G.m) if alive is None else np.flatnonzero(alive)
    lab = np.full(G.m, -1, dtype=np.int64)
    if not len(ids):
        return lab
    u, v = G.edges[ids, 0], G.edges[ids, 1]
    A = coo_matrix((np.ones(len(ids)), (u, v)), shape=(G.n, G.n))
    _, vl = connected_components(A, directed=False)
    # renumber by first edge so output order is deterministic
    _, first = np.unique(vl[u], return_inverse=True)
    lab[ids] = first
    return lab


def _is_star_at_y(G: Graph, side: np.ndarray, edges: np.ndarray) -> int | None:
    ys = np.unique(np.where(side[G.edges[edges, 0]] == 1, G.edges[edges, 0], G.edges[edges, 1]))
    if len(ys) == 1 and len(edges) >= 2:
        return int(ys[0])
    return None


def _cover(G: Graph, side: np.ndarray, include: np.ndarray) -> np.ndarray:
    """Alive-edge mask after the three reduction rules, on the ``include`` edges."""
    alive = include.copy()
    ends = G.edges
    hdeg = np.zeros(G.n, dtype=np.int64)
    np.add.at(hdeg, ends[alive].reshape(-1), 1)
    inc, nbr, indptr = G.inc, G.nbr, G.indptr
    xs = np.flatnonzero((side == 0) & (hdeg > 0))
    in_xp = np.zeros(G.n, dtype=bool)
    in_xp[xs] = True

    def drop_vertex(v):
        for p in range(indptr[v], indptr[v + 1]):
            e = inc[p]
            if alive[e]:
                alive[e] = False
                hdeg[v] -= 1
                hdeg[nbr[p]] -= 1
        in_xp[v] = False

    # X' degrees never fall to 1 later, so rule 1 applies to the initial leaves only
    for v in xs.tolist():
        if hdeg[v] == 1:
            drop_vertex(v)
    # once some neighbour of x is singly covered it stays so: one sweep suffices
    for v in xs.tolist():
        if not in_xp[v]:
            continue
        ok = True
        for p in range(indptr[v], indptr[v + 1]):
            if alive[inc[p]] and hdeg[nbr[p]] < 2:
                ok = False
                break
        if ok:
            drop_vertex(v)
    for v in xs.tolist():
        if not in_xp[v]:
            continue
        for p in range(indptr[v], indptr[v + 1]):
            if hdeg[v] < 3:
                break
            e = inc[p]
            u = nbr[p]
            if alive[e] and hdeg[u] >= 2:
                alive[e] = False
                hdeg[v] -= 1
                hdeg[u] -= 1
    return alive


def _classify(G: Graph, side: np.ndarray, alive: np.ndarray) -> list[StarComponent]:
    lab = _component_labels(G, alive)
    comps = []
    if not alive.any():
        return comps
    ids = np.flatnonzero(alive)
    order = np.argsort(lab[ids], kind="stable")
    groups = np.split(ids[order], np.flatnonzero(np.diff(lab[ids][order])) + 1)
    for edges in groups:
        ends = G.edges[edges]
        verts, cnt = np.unique(ends.reshape(-1), return_counts=True)
        multi = verts[cnt >= 2]
        ymulti = multi[side[multi] == 1]
        if len(ymulti):
            comps.append(StarComponent(SUBDIVIDED_AT_Y, int(ymulti[0]), edges))
        else:
            comps.append(StarComponent(STAR_AT_X, int(multi[0]) if len(multi) else -1, edges))
    return comps


def check_star_cover(G: Graph, side: np.ndarray, cover: StarCover, covered=None) -> None:
    hdeg = np.bincount(G.edges[cover.H].reshape(-1), minlength=G.n)
    ys = np.flatnonzero((side == 1) & (G.degree > 0)) if covered is None else covered
    if (hdeg[ys] == 0).any():
        raise ConstructionError(f"Y vertex {int(ys[hdeg[ys] == 0][0])} not covered")
    for comp in cover.components:
        ends = G.edges[comp.edges]
        verts, cnt = np.unique(ends.reshape(-1), return_counts=True)
        c = comp.centre
        if comp.kind == STAR_AT_X:
            ok = (len(comp.edges) >= 2 and side[c] == 0 and (ends == c).any(axis=1).all()
                  and (cnt[verts != c] == 1).all())
        else:
            at_c = (ends == c).any(axis=1)
            mids = np.where(ends[at_c, 0] == c, ends[at_c, 1], ends[at_c, 0])
            ok = (len(comp.edges) >= 4 and side[c] == 1 and at_c.sum() * 2 == len(comp.edges)
                  and (cnt[np.isin(verts, mids)] == 2).all()
                  and (cnt[~np.isin(verts, mids) & (verts != c)] == 1).all())
        if not ok:
            raise ConstructionError(f"component centred at {c} is not a valid {comp.kind}")
        # every multiply-covered Y vertex is a centre
        ymulti = verts[(cnt >= 2) & (side[verts] == 1)]
        if len(ymulti) and (comp.kind != SUBDIVIDED_AT_Y or list(ymulti) != [c]):
            raise ConstructionError("multiply-covered Y vertex that is not a centre")


def star_cover(G: Graph, part) -> StarCover:
    """Subgraph covering Y whose components are stars at X or subdivided stars at Y.

    ``G`` must be connected (ignoring isolated vertices), have at least two
    edges, be bipartite for ``part`` and not be a star centred in Y.
    """
    side = _sides(G, part)
    if G.m < 2:
        raise PreconditionError("trivial", "graph has fewer than two edges")
    if len(G.edge_components()) != 1:
        raise PreconditionError("disconnected", "graph has more than one component")
    if _is_star_at_y(G, side, np.arange(G.m)) is not None:
        raise PreconditionError("star-at-Y", "graph is a star centred in Y")
    alive = _cover(G, side, np.ones(G.m, dtype=bool))
    cover = StarCover(np.flatnonzero(alive), _classify(G, side, alive))
    check_star_cover(G, side, cover)
    return cover


def _three_colour(G: Graph, side: np.ndarray) -> tuple[Colouring, StarCover]:
    lab = _component_labels(G)
    col = np.zeros(G.m, dtype=np.int64)
    include = np.ones(G.m, dtype=bool)
    special = []
    counts = np.bincount(lab, minlength=lab.max() + 1 if G.m else 0)
    if (counts == 1).any():
        e = int(np.flatnonzero(counts[lab] == 1)[0])
        raise PreconditionError("trivial", f"edge {e} is a trivial component")
    order = np.argsort(lab, kind="stable")
    for edges in np.split(order, np.flatnonzero(np.diff(lab[order])) + 1) if G.m else []:
        if _is_star_at_y(G, side, edges) is not None:
            include[edges] = False
            special.append(edges)
            col[edges[0]] = 1
            col[edges[1]] = 2
            col[edges[2:]] = 3
    alive = _cover(G, side, include)
    cover = StarCover(np.flatnonzero(alive), _classify(G, side, alive))
    covered = np.flatnonzero((side == 1) & (G.degree > 0))
    covered = covered[np.isin(covered, G.edges[np.flatnonzero(include)].reshape(-1))]
    check_star_cover(G, side, cover, covered)
    for comp in cover.components:
        e = comp.edges
        if comp.kind == STAR_AT_X:
            col[e[0]] = 1
            col[e[1]] = 2
            col[e[2:]] = 3
        else:
            at_c = (G.edges[e] == comp.centre).any(axis=1)
            spokes = e[at_c]
            col[spokes[0]] = 3
            col[spokes[1:]] = 2
            col[e[~at_c]] = 1
    return Colouring(G, col), cover


def _audit(G: Graph, c: Colouring, side: np.ndarray, saturate_x: str) -> None:
    v = is_conflict_free(G, c, "hybrid")
    if not v.ok:
        raise ConstructionError(f"edges left unsatisfied: {v.unsatisfied[:10]}")
    sat = saturated_vertices(G, c)
    live = G.degree > 0
    ys = live & (side == 1)
    if not sat[ys].all():
        raise ConstructionError("a Y vertex has no uniquely coloured edge")
    xs = live & (side == 0)
    if saturate_x == "all":
        need = xs
    else:
        touched = np.zeros(G.n, dtype=bool)
        touched[G.edges[c.colour > 0].reshape(-1)] = True
        need = xs & touched
    if not sat[need].all():
        raise ConstructionError("an X vertex has no uniquely coloured edge")


def three_colour(G: Graph, part) -> Colouring:
    """Partial colouring with colours 1..3 satisfying every edge.

    Every Y vertex, and every X vertex with some coloured edge, ends up with
    an incident edge whose colour is unique at it. Components must have at
    least two edges.
    """
    side = _sides(G, part)
    c, _ = _three_colour(G, side)
    _audit(G, c, side, "coloured")
    return c


def four_colour_saturating(G: Graph, part) -> Colouring:
    """:func:`three_colour` plus colour 4 on one edge at each still-bare X vertex."""
    side = _sides(G, part)
    c, _ = _three_colour(G, side)
    col = c.colour
    touched = np.zeros(G.n, dtype=bool)
    touched[G.edges[col > 0].reshape(-1)] = True
    for x in np.flatnonzero((side == 0) & (G.degree > 0) & ~touched).tolist():
        col[G.incident(x)[0]] = 4
    _audit(G, c, side, "all")
    return c


def maximal_bipartite_extension(G: Graph, h_edges: np.ndarray, m_edges: np.ndarray):
    """Grow the bipartite ``h_edges`` by matching edges while bipartiteness allows.

    Returns ``(F, M, side)``: the grown edge set, the leftover matching edges
    and a 0/1 side per vertex of the result.
    """
    H0 = G.edge_subgraph(h_edges)
    side0 = two_colour(H0)
    if side0 is None:
        raise PreconditionError("not-bipartite", "H' is not bipartite")
    comp = H0.components()
    n = G.n
    parent = np.arange(n)
    par = np.zeros(n, dtype=np.int64)  # parity to parent

    def find(x):
        path = []
        while parent[x] != x:
            path.append(x)
            x = parent[x]
        acc = 0
        for y in reversed(path):
            acc ^= par[y]
            par[y] = acc
            parent[y] = x
        return x, (par[path[0]] if path else 0)

    roots = {}
    for v in np.flatnonzero(G.degree > 0).tolist():
        c0 = comp[v]
        if c0 not in roots:
            roots[c0] = v
        else:
            root = roots[c0]
            parent[v] = root
            par[v] = side0[v] ^ side0[root]
    added = np.zeros(len(m_edges), dtype=bool)
    changed = True
    while changed:
        changed = False
        for idx, e in enumerate(m_edges.tolist()):
            if added[idx]:
                continue
            a, b = G.endpoints(e)
            ra, pa = find(a)
            rb, pb = find(b)
            if ra != rb:
                parent[ra] = rb
                par[ra] = pa ^ pb ^ 1
                added[idx] = True
                changed = True
            elif pa != pb:
                added[idx] = True
                changed = True
    side = np.array([find(v)[1] for v in range(n)], dtype=np.int64)
    F = np.sort(np.concatenate([h_edges, m_edges[added]]))
    M = m_edges[~added]
    return F, M, side


def sixteen_colour(G: Graph, h_edges, m_edges) -> Colouring:
    """Partial colouring with at most 16 colours satisfying every edge of ``G``.

    ``E(G)`` must be the disjoint union of ``h_edges`` (bipartite, touching
    every non-isolated vertex, no single-edge components) and ``m_edges``
    (a matching). Colours are triples ``(c, ω(x), ω(y))`` packed as
    ``4(c-1) + 2ω(x) + ω(y) + 1`` with ω in {0, 1} with ``x`` on the X side.
    """
    h_edges = np.asarray(h_edges, dtype=np.int64)
    m_edges = np.asarray(m_edges, dtype=np.int64)
    if len(np.intersect1d(h_edges, m_edges)) or len(h_edges) + len(m_edges) != G.m \
            or len(np.union1d(h_edges, m_edges)) != G.m:
        raise PreconditionError("not-a-decomposition", "h_edges and m_edges must partition E")
    ends = G.edges[m_edges].reshape(-1)
    if len(np.unique(ends)) != len(ends):
        raise PreconditionError("not-a-matching", "m_edges is not a matching")
    hdeg = np.bincount(G.edges[h_edges].reshape(-1), minlength=G.n)
    if ((hdeg == 0) & (G.degree > 0)).any():
        v = int(np.flatnonzero((hdeg == 0) & (G.degree > 0))[0])
        raise PreconditionError("not-spanning", f"vertex {v} has no H' edge")
    if len(h_edges):
        Hs = G.edge_subgraph(h_edges)
        if len(Hs.isolated_edges()):
            raise PreconditionError("trivial", "H' has a single-edge component")

    F, M, side = maximal_bipartite_extension(G, h_edges, m_edges)
    if len(M) and (side[G.edges[M, 0]] != side[G.edges[M, 1]]).any():
        raise ConstructionError("a leftover matching edge joins X and Y")
    Hf = G.edge_subgraph(F)
    c4 = four_colour_saturating(Hf, side)
    omega = np.zeros(G.n, dtype=np.int64)
    for e in M.tolist():
        a, b = G.endpoints(e)
        omega[max(a, b)] = 1
    out = np.zeros(G.m, dtype=np.int64)
    sub = c4.colour
    mask = sub > 0
    fe = F[mask]
    a, b = G.edges[fe, 0], G.edges[fe, 1]
    x = np.where(side[a] == 0, a, b)
    y = np.where(side[a] == 0, b, a)
    out[fe] = 4 * (sub[mask] - 1) + 2 * omega[x] + omega[y] + 1
    c = Colouring(G, out)
    v = is_conflict_free(G, c, "hybrid")
    if not v.ok:
        raise ConstructionError(f"sixteen-colouring leaves edges unsatisfied: {v.unsatisfied[:10]}")
    return c
