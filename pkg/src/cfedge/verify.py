"""Satisfaction of edges under the closed, open and hybrid conflict-free rules.

Colours are positive integers; ``0`` in a colour array means *uncoloured*.
Uncoloured edges carry nothing and never spoil uniqueness. For a partial
colouring in closed mode, uniqueness is judged among the coloured edges of
``E[e]``.

hybrid
    some coloured ``e' != e`` in ``E[e]`` whose colour occurs nowhere else in
    ``E[e]`` (``e`` itself included). Edges with empty open neighbourhood are
    exempt.
closed
    some colour occurs exactly once in ``E[e]``.
open
    some colour occurs exactly once in ``E[e] - {e}``; exempt when that is empty.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from . import kernels
from .graph import Graph, GraphError

MODES = {"closed": kernels.CLOSED, "open": kernels.OPEN, "hybrid": kernels.HYBRID}
# CLI spellings
MODE_ALIASES = {"ccf": "closed", "ocf": "open", "cf": "hybrid"}


def _mode(mode: str) -> str:
    mode = MODE_ALIASES.get(mode, mode)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    return mode


class Colouring:
    """Partial edge colouring of a fixed graph.

    ``colour[e]`` is the colour of edge ``e`` or 0 when uncoloured.
    """

    __slots__ = ("graph", "colour")

    def __init__(self, graph: Graph, colour=None):
        self.graph = graph
        if colour is None:
            colour = np.zeros(graph.m, dtype=np.int64)
        else:
            colour = np.array(colour, dtype=np.int64).reshape(-1)
        if len(colour) != graph.m:
            raise GraphError(f"colouring has {len(colour)} entries for {graph.m} edges")
        if (colour < 0).any():
            raise GraphError("colours must be positive (0 marks uncoloured)")
        self.colour = colour

    @classmethod
    def from_mapping(cls, graph: Graph, mapping: dict[int, int]) -> "Colouring":
        c = cls(graph)
        for e, a in mapping.items():
            graph.check_edge(e)
            if a is not None:
                if a <= 0:
                    raise GraphError("colours must be positive")
                c.colour[e] = a
        return c

    def __getitem__(self, e):
        return int(self.colour[e])

    def copy(self) -> "Colouring":
        return Colouring(self.graph, self.colour.copy())

    def palette(self) -> np.ndarray:
        return np.unique(self.colour[self.colour > 0])

    @property
    def num_colours(self) -> int:
        return len(self.palette())

    @property
    def is_total(self) -> bool:
        return bool((self.colour > 0).all())

    def uncoloured(self) -> np.ndarray:
        return np.flatnonzero(self.colour == 0)

    def as_dict(self) -> dict[int, int]:
        return {int(e): int(a) for e, a in enumerate(self.colour) if a > 0}

    def lift(self, parent: Graph, into: "Colouring | None" = None, offset: int = 0) -> "Colouring":
        """Copy this subgraph colouring onto ``parent`` via ``graph.origin``.

        ``parent`` must be the graph this one was cut from directly.
        """
        out = into if into is not None else Colouring(parent)
        origin = self.graph.origin
        if origin is None:
            raise GraphError("graph is not a subgraph")
        mask = self.colour > 0
        out.colour[origin[mask]] = self.colour[mask] + offset
        return out

    def __repr__(self):
        return f"Colouring(m={len(self.colour)}, colours={self.num_colours}, uncoloured={len(self.uncoloured())})"


@dataclass(frozen=True)
class SatisfactionCertificate:
    edge: int
    witness: int
    colour: int
    mode: str


class Verdict(NamedTuple):
    ok: bool
    unsatisfied: list[int]


SMALL_BATCH = 256


def _compress(C: np.ndarray) -> tuple[np.ndarray, int]:
    """Relabel positive colours to 1..P, keeping 0."""
    vals, inv = np.unique(C, return_inverse=True)
    inv = inv.reshape(C.shape).astype(np.int64)
    if vals.size and vals[0] == 0:
        return inv, len(vals) - 1
    return inv + 1, len(vals)


def satisfied_matrix(G: Graph, colours, mode: str = "hybrid") -> np.ndarray:
    """Satisfaction flags for many colourings at once.

    ``colours`` has one row per colouring of ``G``; the result has the same
    shape. This is the batch form of :func:`satisfied_mask`.
    """
    mode = _mode(mode)
    C = np.asarray(colours, dtype=np.int64)
    if C.ndim == 1:
        C = C[None, :]
    if C.shape[1] != G.m:
        raise GraphError("colour rows do not match the edge count")
    if G.m == 0:
        return np.zeros(C.shape, dtype=bool)
    C, P = _compress(C)
    eu = np.ascontiguousarray(G.edges[:, 0])
    ev = np.ascontiguousarray(G.edges[:, 1])
    iso = (G.degree[eu] + G.degree[ev]) == 2
    # tiny batches are not worth waking the jit dispatcher for
    rows = kernels.satisfied_np if C.size <= SMALL_BATCH else kernels.satisfied_rows
    return rows(eu, ev, iso, np.ascontiguousarray(C), G.n, P, MODES[mode])


def satisfied_mask(G: Graph, c: Colouring, mode: str = "hybrid") -> np.ndarray:
    return satisfied_matrix(G, c.colour, mode)[0]


def _colour_of(c) -> np.ndarray:
    return c.colour if isinstance(c, Colouring) else np.asarray(c, dtype=np.int64)


def satisfied(G: Graph, c: Colouring, e: int, mode: str = "hybrid") -> SatisfactionCertificate | None:
    """Certificate for edge ``e`` or None.

    In closed mode the witness may be ``e`` itself. Exempt edges (empty open
    neighbourhood, open/hybrid modes) get a certificate with ``witness=-1``.
    """
    mode = _mode(mode)
    e = G.check_edge(e)
    col = _colour_of(c)
    u, v = G.endpoints(e)
    hood = np.union1d(G.incident(u), G.incident(v))
    if len(hood) == 1 and mode != "closed":
        return SatisfactionCertificate(e, -1, 0, mode)
    counts: dict[int, int] = {}
    for f in hood.tolist():
        a = int(col[f])
        if a and not (mode == "open" and f == e):
            counts[a] = counts.get(a, 0) + 1
    for f in hood.tolist():
        a = int(col[f])
        if not a or counts.get(a) != 1:
            continue
        if f == e and mode != "closed":
            continue
        return SatisfactionCertificate(e, f, a, mode)
    return None


def is_conflict_free(G: Graph, c, mode: str = "hybrid") -> Verdict:
    """Check every edge; exempt edges (see module doc) always pass."""
    bad = np.flatnonzero(~satisfied_matrix(G, _colour_of(c), mode)[0])
    return Verdict(len(bad) == 0, bad.tolist())


def incident_unique(G: Graph, c, v: int) -> tuple[int, int] | None:
    """Lowest-id coloured edge at ``v`` whose colour is unique among ``E(v)``."""
    col = _colour_of(c)
    inc = G.incident(v)
    cols = col[inc]
    vals, counts = np.unique(cols[cols > 0], return_counts=True)
    once = set(vals[counts == 1].tolist())
    for e, a in zip(inc.tolist(), cols.tolist()):
        if a in once:
            return e, a
    return None


def saturated_vertices(G: Graph, c) -> np.ndarray:
    """Boolean mask: vertex has an incident edge with a colour unique at it."""
    col = _colour_of(c)
    m = G.m
    ends = G.edges.reshape(-1)
    cols = np.repeat(col, 2)
    keep = cols > 0
    key = ends[keep] * (int(col.max(initial=0)) + 1) + cols[keep]
    vals, counts = np.unique(key, return_counts=True)
    out = np.zeros(G.n, dtype=bool)
    if m and vals.size:
        out[(vals[counts == 1] // (int(col.max()) + 1))] = True
    return out


def unsatisfied_required(G: Graph, c, mode: str = "hybrid", edges: Iterable[int] | None = None) -> np.ndarray:
    """Unsatisfied edges, optionally restricted to ``edges``."""
    mask = ~satisfied_matrix(G, _colour_of(c), mode)[0]
    if edges is not None:
        sel = np.zeros(G.m, dtype=bool)
        sel[np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)] = True
        mask &= sel
    return np.flatnonzero(mask)
