"""Numba kernels against their numpy / python twins on the same inputs.

    python3 benchmarks/bench_kernels.py [--n 2000] [--p 0.05] [--rows 64] [--repeat 3]

The first numba call compiles (or loads the on-disk cache); it is run once
before timing so the table shows steady-state cost only.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from cfedge import kernels
from cfedge.lab import gnp


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--p", type=float, default=0.05)
    ap.add_argument("--rows", type=int, default=64, help="colourings per satisfaction batch")
    ap.add_argument("--colours", type=int, default=12)
    ap.add_argument("--s", type=int, default=4)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    G = gnp(args.n, args.p, args.seed)
    eu = np.ascontiguousarray(G.edges[:, 0])
    ev = np.ascontiguousarray(G.edges[:, 1])
    iso = (G.degree[eu] + G.degree[ev]) == 2
    C = rng.integers(1, args.colours + 1, size=(args.rows, G.m)).astype(np.int64)
    part = rng.integers(0, args.s, size=G.m).astype(np.int64)
    Z = rng.integers(0, args.s, size=G.n).astype(np.int64)
    X = rng.integers(1, 3, size=(G.n, args.s, args.k)).astype(np.int8)
    big = np.iinfo(np.int64).max

    cases = {
        "satisfied (hybrid)": (
            lambda: kernels.satisfied_nb(eu, ev, iso, C, G.n, args.colours, kernels.HYBRID),
            lambda: kernels.satisfied_np(eu, ev, iso, C, G.n, args.colours, kernels.HYBRID),
        ),
        "peel (full order)": (
            lambda: kernels.peel_nb(G.indptr, G.nbr, big),
            lambda: kernels.peel_py(G.indptr, G.nbr, big),
        ),
        "u3 counts": (
            lambda: kernels.u3_counts_nb(eu, ev, part, Z, G.n, args.s),
            lambda: kernels.u3_counts_np(eu, ev, part, Z, G.n, args.s),
        ),
        "always bad": (
            lambda: kernels.always_bad_nb(eu, ev, Z, X),
            lambda: kernels.always_bad_np(eu, ev, Z, X),
        ),
    }
    print(f"G(n={G.n}, p={args.p}) m={G.m}  rows={args.rows}  numba active={kernels.USE_NUMBA}")
    print(f"{'kernel':<22}{'numba s':>12}{'numpy s':>12}{'ratio':>10}  same")
    for name, (fast, slow) in cases.items():
        a, b = fast(), slow()
        same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) else np.array_equal(a, b)
        tf, ts = _best(fast, args.repeat), _best(slow, args.repeat)
        print(f"{name:<22}{tf:>12.4f}{ts:>12.4f}{ts / tf:>10.1f}  {same}")


if __name__ == "__main__":
    main()
