"""Random graphs, the palette-collision lower-bound witness, and experiment sweeps."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, build_graph
from .verify import Colouring, is_conflict_free, satisfied

CSV_HEADER = ["n", "p", "delta", "method", "seed", "colours", "log2delta", "bound", "verdict"]


def gnp(n: int, p: float, seed=None) -> Graph:
    """Binomial random graph; edges come out in lexicographic order."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} is not a probability")
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = np.random.default_rng(seed)
    iu, iv = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return build_graph(n, np.column_stack([iu[keep], iv[keep]]))


def lower_bound_params(n: int, p: float) -> tuple[int, int]:
    """Set size ``ceil(p^-1 log2(n)^2)`` and edge threshold ``floor(2 p^-1 log2(n)^3)``."""
    lg = math.log2(n)
    return math.ceil(lg**2 / p), math.floor(2 * lg**3 / p)


@dataclass
class DensityReport:
    s: int
    threshold: int
    samples: int
    min_edges: int
    mean_edges: float
    below: int  # samples spanning fewer than ``threshold`` edges


def density_check(G: Graph, s: int, threshold: int, samples: int = 1000, seed=None) -> DensityReport:
    """Edges spanned by random ``s``-subsets; a statistical probe only."""
    if not 0 <= s <= G.n:
        raise ValueError("subset size outside 0..n")
    rng = np.random.default_rng(seed)
    counts = np.empty(samples, dtype=np.int64)
    inside = np.zeros(G.n, dtype=bool)
    u, v = G.edges[:, 0], G.edges[:, 1]
    for t in range(samples):
        S = rng.choice(G.n, size=s, replace=False)
        inside[:] = False
        inside[S] = True
        counts[t] = int((inside[u] & inside[v]).sum())
    if samples == 0:
        return DensityReport(s, threshold, 0, 0, 0.0, 0)
    return DensityReport(s, threshold, samples, int(counts.min()), float(counts.mean()), int((counts < threshold).sum()))


class PaletteMap:
    """Palette (sorted tuple of colours on incident edges) per vertex."""

    def __init__(self, G: Graph, c: Colouring):
        col = c.colour
        self.palettes = [tuple(sorted(set(col[G.incident(v)].tolist()))) for v in range(G.n)]

    def __getitem__(self, v: int) -> tuple[int, ...]:
        return self.palettes[v]

    def classes(self) -> dict[tuple[int, ...], list[int]]:
        """Vertices grouped by palette, isolated vertices left out."""
        out: dict[tuple[int, ...], list[int]] = {}
        for v, P in enumerate(self.palettes):
            if P:
                out.setdefault(P, []).append(v)
        return out


@dataclass(frozen=True)
class LowerBoundWitness:
    S: tuple[int, ...]
    palette: tuple[int, ...]
    alpha: int
    F: tuple[int, ...]  # edge ids inside S coloured alpha
    edge: int  # the unsatisfied edge uv
    v: int  # endpoint with d_F(v) >= 3


def collision_witness(G: Graph, c: Colouring) -> LowerBoundWitness | None:
    """Look in the largest palette class for a colour class of degree at least 3 at some vertex.

    Every colour near such an edge ``uv`` sits at both ``u`` and ``v``, and
    the colour of ``uv`` occurs at least twice more at ``v``, so ``uv`` has
    no unique colour in its open or its closed neighbourhood. The returned
    witness is checked against the verifier in both modes.
    """
    if not c.is_total:
        raise ValueError("collision witness needs a total colouring")
    classes = PaletteMap(G, c).classes()
    if not classes:
        return None
    P, S = max(classes.items(), key=lambda kv: (len(kv[1]), [-x for x in kv[0]]))
    inside = np.zeros(G.n, dtype=bool)
    inside[S] = True
    spanned = np.flatnonzero(inside[G.edges[:, 0]] & inside[G.edges[:, 1]])
    col = c.colour
    for alpha in P:
        F = spanned[col[spanned] == alpha]
        if len(F) < 2:
            continue
        dF = np.bincount(G.edges[F].reshape(-1), minlength=G.n)
        for e in F.tolist():
            a, b = G.endpoints(e)
            v = a if dF[a] >= 3 else b if dF[b] >= 3 else -1
            if v < 0:
                continue
            w = LowerBoundWitness(tuple(S), P, int(alpha), tuple(F.tolist()), e, v)
            for mode in ("closed", "open"):
                if satisfied(G, c, e, mode) is not None:
                    raise AssertionError(f"witness edge {e} is satisfied in {mode} mode")
            return w
    return None


# --------------------------------------------------------------------------
# sweeps


def _run(G: Graph, method: str, seed: int, eps: float):
    from .asymptotic import colour_asymptotic
    from .chromatic import cf_total_by_chromatic, chromatic_bound
    from .exact import exact_index

    if method == "chromatic":
        r = cf_total_by_chromatic(G)
        return r.colouring.num_colours, chromatic_bound(r.alpha, total=True), r.colouring
    if method == "asymptotic":
        c, rep = colour_asymptotic(G, eps, seed)
        return rep.total_colours, rep.explicit_bound, c
    if method == "exact":
        r = exact_index(G, "hybrid")
        return r.value, "", Colouring(G, r.witness)
    raise ValueError(f"unknown method {method!r}")


def sweep(grid, methods, seeds, eps: float = 1.0) -> list[dict]:
    """One row per (n, p, method, seed); failures are kept as rows tagged ``error:...``."""
    from .exact import InstanceTooLarge

    rows = []
    for n, p in grid:
        for seed in seeds:
            G = gnp(int(n), float(p), seed)
            delta = G.max_degree
            lg = f"{math.log2(delta):.4f}" if delta > 0 else ""
            for method in methods:
                row = {"n": int(n), "p": p, "delta": delta, "method": method, "seed": seed, "log2delta": lg}
                try:
                    if G.m == 0:
                        colours, bound, ok = 0, "", True
                    else:
                        colours, bound, c = _run(G, method, seed, eps)
                        ok = is_conflict_free(G, c, "hybrid").ok and (bound == "" or colours <= bound)
                    row.update(colours=colours, bound=bound, verdict=str(ok).lower())
                except InstanceTooLarge:
                    row.update(colours="", bound="", verdict="error:too-large")
                except Exception as exc:  # recorded, not raised
                    row.update(colours="", bound="", verdict=f"error:{type(exc).__name__}")
                rows.append(row)
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_HEADER, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def read_grid(text: str) -> list[tuple[int, float]]:
    """Grid file: one ``n p`` (or ``n,p``) pair per line, ``#`` comments allowed."""
    grid = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].replace(",", " ").split()
        if not line:
            continue
        if len(line) != 2:
            raise ValueError(f"grid line {raw!r} needs exactly n and p")
        grid.append((int(line[0]), float(line[1])))
    return grid


__all__ = [
    "CSV_HEADER",
    "DensityReport",
    "LowerBoundWitness",
    "PaletteMap",
    "collision_witness",
    "density_check",
    "gnp",
    "lower_bound_params",
    "read_grid",
    "rows_to_csv",
    "sweep",
]
