"""The logarithmic conflict-free colouring pipeline.

Outline of :func:`colour_asymptotic`:

1. strip isolated edges (exempt) and split the rest into a core part ``H``,
   a degenerate part ``D`` and a forest ``F`` (:func:`initial_split`);
2. cut ``H`` into ``s`` balanced parts ``H_i`` and draw ``s*k`` random vertex
   partitions that pass the two local conditions, by event resampling
   (:func:`sample_partitions`);
3. give every partition a fresh colour and every part four more colours
   (:func:`partition_phase`); what stays unsatisfied is ``R``;
4. finish ``R``, ``D`` and ``F`` with fresh palettes and add one fill colour.

When the core is empty, or the partition conditions cannot hold at this
size, step 2-3 is skipped: ``H`` is empty and everything lands in ``D``.
The report says which regime ran.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .bipartite import ConstructionError, four_colour_saturating, sixteen_colour
from .chromatic import cf_by_chromatic, log2_ceil
from .decompose import balanced_split, core_split
from .graph import Graph, spanning_forest, two_colour
from .verify import Colouring, is_conflict_free, satisfied_mask


class PipelineError(RuntimeError):
    """A phase of the pipeline failed; ``phase`` says which."""

    def __init__(self, phase: str, msg: str):
        super().__init__(f"{phase}: {msg}")
        self.phase = phase


class PartitionInfeasible(PipelineError):
    """The local conditions on the random partitions cannot be met for this ``H``."""

    def __init__(self, msg: str):
        super().__init__("sample_partitions", msg)


class CandidateExhausted(PipelineError):
    def __init__(self, v: int, i: int, j: int):
        super().__init__("partition_phase", f"vertex {v} has no uncoloured H_{i} edge into U3 at step {j}")
        self.where = (v, i, j)


# --------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class Params:
    eps: float
    d: int
    k: int
    s: int
    delta_cap: int

    @property
    def log2delta(self) -> float:
        return math.log2(self.delta_cap)


def plan(delta: int, eps: float, d: int | None = None) -> Params:
    """``d = floor(10 log2(Δ)^3)``, ``k = ceil(5/eps)``, ``s = ceil(log2(Δ)/k)``.

    ``d`` may be overridden (at least 10) to reach the core at small ``Δ``.
    """
    if delta < 2:
        raise ValueError("maximum degree must be at least 2")
    if not eps > 0:
        raise ValueError("eps must be positive")
    lg = math.log2(delta)
    if d is None:
        d = math.floor(10 * lg**3)
    elif d < 10:
        raise ValueError("core threshold override must be at least 10")
    k = math.ceil(5 / eps)
    s = max(1, math.ceil(lg / k))
    return Params(float(eps), int(d), int(k), int(s), int(delta))


def explicit_bound(p: Params) -> int:
    lg = p.log2delta
    r_part = 3 * math.ceil(math.log2(2 * lg + 1)) + 16
    d_part = 3 * log2_ceil(p.d) + 16
    return p.s * p.k + 4 * p.s + r_part + d_part + 16 + 1


# --------------------------------------------------------------------------
# initial split


@dataclass
class InitialSplit:
    H: np.ndarray
    D: np.ndarray
    F: np.ndarray
    core_vertices: np.ndarray
    degenerate: bool
    reason: str = ""


def _degenerate_split(G: Graph, reason: str) -> InitialSplit:
    return InitialSplit(
        np.zeros(0, dtype=np.int64), np.arange(G.m, dtype=np.int64), np.zeros(0, dtype=np.int64),
        np.zeros(0, dtype=np.int64), True, reason,
    )


def _edge_degrees(G: Graph, ids: np.ndarray) -> np.ndarray:
    return np.bincount(G.edges[ids].reshape(-1), minlength=G.n)


def check_initial_split(G: Graph, sp: InitialSplit, p: Params) -> None:
    allid = np.concatenate([sp.H, sp.D, sp.F])
    if len(allid) != G.m or len(np.unique(allid)) != G.m:
        raise PipelineError("initial_split", "H, D, F do not partition E")
    if sp.degenerate:
        return
    hdeg = _edge_degrees(G, sp.H)
    if len(sp.H) and hdeg[hdeg > 0].min() < 0.65 * p.d:
        raise PipelineError("initial_split", "delta(H) < 0.65 d")
    if len(sp.D):
        Dg = G.edge_subgraph(sp.D)
        if len(Dg.isolated_edges()):
            raise PipelineError("initial_split", "D has a single-edge component")
        back = kernels.peel(Dg.indptr, Dg.nbr, np.iinfo(np.int64).max)[1]
        if len(back) and back.max() > p.d - 1:
            raise PipelineError("initial_split", "D is not (d-1)-degenerate")
    if len(sp.F):
        Fg = G.edge_subgraph(sp.F)
        if len(spanning_forest(Fg)) != Fg.m:
            raise PipelineError("initial_split", "F has a cycle")
        if len(Fg.isolated_edges()):
            raise PipelineError("initial_split", "F has a single-edge component")
    fdeg = _edge_degrees(G, sp.F)
    if ((hdeg > 0) & (fdeg == 0)).any():
        raise PipelineError("initial_split", "V(H) is not inside V(F)")


def initial_split(G: Graph, p: Params) -> InitialSplit:
    """Core ``H``, degenerate rest ``D`` and forest ``F``; ``G`` must have no isolated edges.

    The core is cut in three balanced parts and a spanning forest of the
    third is moved into ``F`` together with the isolated edges of the rest.
    Falls back to the degenerate split (everything in ``D``) when the core
    is empty or its minimum degree ends below ``0.65 d``.
    """
    if len(G.isolated_edges()):
        raise ValueError("strip isolated edges first")
    cs = core_split(G, p.d)
    if len(cs.H) == 0:
        sp = _degenerate_split(G, "empty core")
        check_initial_split(G, sp, p)
        return sp
    Hp = G.edge_subgraph(cs.H)
    thirds = balanced_split(Hp, 3)
    H3 = Hp.edge_subgraph(thirds.parts[2])
    Fp = cs.H[H3.origin[spanning_forest(H3)]]
    H = np.setdiff1d(cs.H, Fp)
    Dp = G.edge_subgraph(cs.D)
    J = cs.D[Dp.isolated_edges()]
    sp = InitialSplit(H, np.setdiff1d(cs.D, J), np.union1d(Fp, J), np.flatnonzero(_edge_degrees(G, H) > 0), False)
    hdeg = _edge_degrees(G, H)
    if hdeg[hdeg > 0].min() < 0.65 * p.d:
        sp = _degenerate_split(G, "core minimum degree below 0.65 d")
    check_initial_split(G, sp, p)
    return sp


# --------------------------------------------------------------------------
# random partitions


@dataclass
class PartitionFamily:
    """``X[v, i, j]`` in {1, 2} and ``Z[v]`` in ``0..s-1`` (``-1`` outside ``U``)."""

    X: np.ndarray
    Z: np.ndarray
    resamples: int = 0
    restarts: int = 0

    def U1(self, i: int, j: int) -> np.ndarray:
        return np.flatnonzero((self.Z >= 0) & (self.Z != i) & (self.X[:, i, j] == 1))

    def U2(self, i: int, j: int) -> np.ndarray:
        return np.flatnonzero((self.Z >= 0) & (self.Z != i) & (self.X[:, i, j] == 2))

    def U3(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.Z == i)


def _bad_probability(s: int, k: int) -> float:
    """Probability that a fixed edge is in a bad configuration in all ``s*k`` partitions."""
    if s == 1:
        return 1.0
    return (0.5 ** ((s - 1) * k)) / s + (s - 1) / s * 0.5 ** ((s - 2) * k)


def _violations(Hg: Graph, lab: np.ndarray, fam: PartitionFamily, p: Params, U: np.ndarray):
    eu, ev = Hg.edges[:, 0].copy(), Hg.edges[:, 1].copy()
    N = kernels.u3_counts(eu, ev, lab, fam.Z, Hg.n, p.s)
    bad = kernels.always_bad(eu, ev, fam.Z, fam.X)
    B = np.bincount(Hg.edges[bad].reshape(-1), minlength=Hg.n)
    lg = p.log2delta
    q = (N < lg) & U[:, None]
    a = (B > 2 * lg) & U
    return q, a, N, B


def check_partitions(Hg: Graph, lab: np.ndarray, fam: PartitionFamily, p: Params) -> None:
    U = Hg.degree > 0
    q, a, _, _ = _violations(Hg, lab, fam, p, U)
    if q.any():
        v, i = np.argwhere(q)[0]
        raise PipelineError("sample_partitions", f"event Q[{v},{i}] holds")
    if a.any():
        raise PipelineError("sample_partitions", f"event A[{int(np.flatnonzero(a)[0])}] holds")


def expected_violations(Hg: Graph, lab: np.ndarray, p: Params) -> float:
    """Sum over all events of their probability under a fresh draw (binomial tails)."""
    from scipy.stats import binom

    s, k, lg = p.s, p.k, p.log2delta
    U = Hg.degree > 0
    part_deg = np.zeros((Hg.n, s), dtype=np.int64)
    np.add.at(part_deg, (Hg.edges[:, 0], lab), 1)
    np.add.at(part_deg, (Hg.edges[:, 1], lab), 1)
    q = binom.cdf(math.ceil(lg) - 1, part_deg[U], 1.0 / s).sum()
    a = binom.sf(math.floor(2 * lg), Hg.degree[U], _bad_probability(s, k)).sum()
    return float(q + a)


def sample_partitions(Hg: Graph, lab: np.ndarray, p: Params, seed=None, budget: int = 10**6,
                      restarts: int = 3, max_rounds: int = 20000, max_expected: float = 4.0) -> PartitionFamily:
    """Draw ``X`` and ``Z`` and resample violated events until none remain.

    ``Hg`` is ``H`` as a graph and ``lab`` its part label per edge. Events
    are ``Q[v,i]`` (fewer than ``log2 Δ`` part-``i`` edges from ``v`` into
    ``U3^i``) and ``A[v]`` (more than ``2 log2 Δ`` always-bad edges at
    ``v``). Each round resamples a greedy set of violated events whose
    vertex scopes are pairwise disjoint.

    Raises :class:`PartitionInfeasible` when a degree precheck rules the
    conditions out, or when a fresh draw is expected to violate more than
    ``max_expected`` events: on dense graphs every scope covers nearly all
    of ``U``, resampling turns into rejection sampling, and that only ends
    in reasonable time when few events fail per draw.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n, s, k = Hg.n, p.s, p.k
    U = Hg.degree > 0
    lg = p.log2delta
    part_deg = np.zeros((n, s), dtype=np.int64)
    np.add.at(part_deg, (Hg.edges[:, 0], lab), 1)
    np.add.at(part_deg, (Hg.edges[:, 1], lab), 1)
    if (part_deg[U] < lg).any():
        raise PartitionInfeasible("some vertex has fewer than log2 Δ edges in a part")
    mu = expected_violations(Hg, lab, p)
    if mu > max_expected:
        raise PartitionInfeasible(f"a fresh draw is expected to violate {mu:.1f} events")

    indptr, nbr = Hg.indptr.tolist(), Hg.nbr.tolist()
    Uidx = np.flatnonzero(U)
    total = 0
    for attempt in range(restarts + 1):
        Z = np.full(n, -1, dtype=np.int64)
        Z[Uidx] = rng.integers(0, s, size=len(Uidx))
        X = rng.integers(1, 3, size=(n, s, k)).astype(np.int8)
        X[~U] = 0
        fam = PartitionFamily(X, Z, 0, attempt)
        used = rounds = 0
        while True:
            q, a, _, _ = _violations(Hg, lab, fam, p, U)
            if not q.any() and not a.any():
                fam.resamples = used
                check_partitions(Hg, lab, fam, p)
                return fam
            taken = np.zeros(n, dtype=bool)
            z_scope: list[int] = []
            x_scope: list[int] = []
            events = [(int(v), "A") for v in np.flatnonzero(a)] + [(int(v), "Q") for v in np.flatnonzero(q.any(axis=1))]
            for v, kind in events:
                scope = [v] + nbr[indptr[v]:indptr[v + 1]]
                if taken[scope].any():
                    continue
                taken[scope] = True
                z_scope += scope
                if kind == "A":
                    x_scope += scope
                used += 1
            Z[z_scope] = rng.integers(0, s, size=len(z_scope))
            if x_scope:
                X[x_scope] = rng.integers(1, 3, size=(len(x_scope), s, k))
            rounds += 1
            if used + total > budget or rounds > max_rounds:
                break
        total += used
    q, a, _, _ = _violations(Hg, lab, fam, p, U)
    if q.any():
        v, i = np.argwhere(q)[0]
        what = f"Q[{int(v)},{int(i)}]"
    else:
        what = f"A[{int(np.flatnonzero(a)[0])}]"
    raise PipelineError("sample_partitions", f"resample budget exhausted after {restarts} restarts; {what} still holds")


# --------------------------------------------------------------------------
# partition colouring


@dataclass
class PhaseResult:
    colour: np.ndarray  # per edge of Hg; partition colours 1..sk, saturation sk+1..sk+4s
    R: np.ndarray  # edge ids of Hg left unsatisfied
    always_bad: np.ndarray


def partition_phase(Hg: Graph, lab: np.ndarray, fam: PartitionFamily, p: Params) -> PhaseResult:
    """Colour ``c_{i,j} = i*k + j + 1`` on one edge per ``U2`` vertex, then saturate every ``U3^i``."""
    s, k = p.s, p.k
    col = np.zeros(Hg.m, dtype=np.int64)
    indptr, inc, nbr = Hg.indptr.tolist(), Hg.inc.tolist(), Hg.nbr.tolist()
    labl = lab.tolist()
    Z = fam.Z
    for i in range(s):
        in3 = (Z == i).tolist()
        for j in range(k):
            c = i * k + j + 1
            for v in fam.U2(i, j).tolist():
                for t in range(indptr[v], indptr[v + 1]):
                    e = inc[t]
                    if labl[e] == i and in3[nbr[t]] and col[e] == 0:
                        col[e] = c
                        break
                else:
                    raise CandidateExhausted(v, i, j)
        inside = np.flatnonzero((lab == i) & (Z[Hg.edges[:, 0]] == i) & (Z[Hg.edges[:, 1]] == i))
        if not len(inside):
            continue
        piece = Hg.edge_subgraph(inside)
        Fi = Hg.edge_subgraph(piece.origin[spanning_forest(piece)])
        c4 = four_colour_saturating(Fi, two_colour(Fi))
        done = c4.colour > 0
        col[Fi.origin[done]] = s * k + 4 * i + c4.colour[done]

    ok = satisfied_mask(Hg, Colouring(Hg, col))
    eu, ev = Hg.edges[:, 0].copy(), Hg.edges[:, 1].copy()
    ab = kernels.always_bad(eu, ev, fam.Z, fam.X)
    R = np.flatnonzero(~ok)
    if (col[R] > 0).any():
        raise ConstructionError("a coloured edge of H is unsatisfied")
    if not ab[R].all():
        raise ConstructionError("an unsatisfied edge of H is not always bad")
    return PhaseResult(col, R, ab)


# --------------------------------------------------------------------------
# report and driver


@dataclass
class Phase:
    name: str
    reserved: int
    colours: list[int]


@dataclass
class ColourReport:
    params: Params
    regime: str  # "partition" or "degenerate"
    reason: str
    phases: list[Phase] = field(default_factory=list)
    explicit_bound: int = 0
    total_colours: int = 0
    verdict: bool = False
    residual_max_degree: int = 0
    resamples: int = 0

    @property
    def disjoint(self) -> bool:
        seen: set[int] = set()
        for ph in self.phases:
            cur = set(ph.colours)
            if seen & cur:
                return False
            seen |= cur
        return True

    @property
    def within_bound(self) -> bool:
        return self.total_colours <= self.explicit_bound

    def as_dict(self) -> dict:
        return {
            "regime": self.regime,
            "reason": self.reason,
            "params": {"eps": self.params.eps, "d": self.params.d, "k": self.params.k,
                       "s": self.params.s, "delta": self.params.delta_cap},
            "phases": [{"name": ph.name, "reserved": ph.reserved, "used": len(ph.colours)} for ph in self.phases],
            "explicit_bound": self.explicit_bound,
            "total_colours": self.total_colours,
            "disjoint": self.disjoint,
            "within_bound": self.within_bound,
            "residual_max_degree": self.residual_max_degree,
            "resamples": self.resamples,
            "verdict": self.verdict,
        }


def _place(out: np.ndarray, ids: np.ndarray, colour: np.ndarray, offset: int) -> list[int]:
    mask = colour > 0
    out[ids[mask]] = colour[mask] + offset
    return np.unique(colour[mask] + offset).tolist()


def colour_asymptotic(G: Graph, eps: float = 1.0, seed=0, d: int | None = None) -> tuple[Colouring, ColourReport]:
    """Total colouring of ``G`` satisfying every non-isolated edge (hybrid rule), with its report.

    ``d`` overrides the core threshold; the default is far above any
    degree reachable in memory, so by default the degenerate regime runs.
    """
    if G.max_degree < 2:
        raise ValueError("maximum degree must be at least 2")
    p = plan(G.max_degree, eps, d)
    rng = np.random.default_rng(seed)
    keep = np.setdiff1d(np.arange(G.m), G.isolated_edges())
    Gs = G.edge_subgraph(keep)
    sp = initial_split(Gs, p)
    report = ColourReport(p, "degenerate" if sp.degenerate else "partition", sp.reason)
    report.explicit_bound = explicit_bound(p)
    out = np.zeros(Gs.m, dtype=np.int64)
    base = 0
    R = np.zeros(0, dtype=np.int64)

    if not sp.degenerate:
        Hg = Gs.edge_subgraph(sp.H)
        lab = balanced_split(Hg, p.s).labels(Hg.m)
        phase = None
        try:
            if p.delta_cap < 3:
                raise PartitionInfeasible("maximum degree below 3")
            for _ in range(4):
                fam = sample_partitions(Hg, lab, p, rng)
                report.resamples += fam.resamples
                try:
                    phase = partition_phase(Hg, lab, fam, p)
                    break
                except CandidateExhausted:
                    continue
            else:
                raise PartitionInfeasible("candidate edges exhausted on every draw")
        except PartitionInfeasible as exc:
            sp = _degenerate_split(Gs, str(exc))
            report.regime, report.reason = "degenerate", str(exc)
        if phase is not None:
            sk = p.s * p.k
            c = phase.colour
            report.phases.append(Phase("partition", sk, _place(out, Hg.origin, np.where(c <= sk, c, 0), 0)))
            report.phases.append(Phase("saturation", 4 * p.s, _place(out, Hg.origin, np.where(c > sk, c, 0), 0)))
            base = sk + 4 * p.s
            R = Hg.origin[phase.R]
            if len(R):
                report.residual_max_degree = int(_edge_degrees(Gs, R).max())
            if report.residual_max_degree > 2 * p.log2delta:
                raise PipelineError("partition_phase", "residual degree above 2 log2 Δ")

    # residue: isolated edges of R join F, the rest gets its own palette
    MR = np.zeros(0, dtype=np.int64)
    if len(R):
        Rg = Gs.edge_subgraph(R)
        MR = Rg.origin[Rg.isolated_edges()]
        Rp = np.setdiff1d(R, MR)
        if len(Rp):
            Rpg = Gs.edge_subgraph(Rp)
            res = cf_by_chromatic(Rpg)
            report.phases.append(Phase("residual", res.palette_size, _place(out, Rpg.origin, res.colouring.colour, base)))
            base += res.palette_size
    if len(sp.D):
        Dg = Gs.edge_subgraph(sp.D)
        res = cf_by_chromatic(Dg)
        report.phases.append(Phase("degenerate", res.palette_size, _place(out, Dg.origin, res.colouring.colour, base)))
        base += res.palette_size
    if len(sp.F) or len(MR):
        Fm = Gs.edge_subgraph(np.concatenate([sp.F, MR]))
        h = np.flatnonzero(np.isin(Fm.origin, sp.F))
        mm = np.flatnonzero(np.isin(Fm.origin, MR))
        c16 = sixteen_colour(Fm, h, mm)
        report.phases.append(Phase("forest", 16, _place(out, Fm.origin, c16.colour, base)))
        base += 16

    full = np.zeros(G.m, dtype=np.int64)
    full[Gs.origin] = out
    fill = base + 1
    if (full == 0).any():
        full[full == 0] = fill
        report.phases.append(Phase("fill", 1, [fill]))
    c = Colouring(G, full)
    report.total_colours = c.num_colours
    report.verdict = is_conflict_free(G, c, "hybrid").ok
    if not report.disjoint:
        raise PipelineError("report", "phase palettes overlap")
    return c, report


__all__ = [
    "CandidateExhausted",
    "ColourReport",
    "InitialSplit",
    "Params",
    "PartitionFamily",
    "PartitionInfeasible",
    "PipelineError",
    "check_initial_split",
    "check_partitions",
    "colour_asymptotic",
    "expected_violations",
    "explicit_bound",
    "initial_split",
    "partition_phase",
    "plan",
    "sample_partitions",
]
