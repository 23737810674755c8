"""Command-line front end.

Exit codes: 0 success, 1 verification verdict false, 2 usage or input
error, 3 algorithm failure. The default seed comes from ``CFEDGE_SEED``
(0 when unset).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .graph import GraphError, spanning_forest, two_colour
from .io import colouring_from_json, colouring_to_json, read_graph, write_graph
from .verify import is_conflict_free

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_ALGO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("CFEDGE_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"CFEDGE_SEED={raw!r} is not an integer") from None


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _seed_range(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
        if hi < lo:
            raise UsageError(f"empty seed range {text!r}")
        return list(range(lo, hi + 1))
    return [int(x) for x in text.split(",") if x]


# --------------------------------------------------------------------------
# subcommands


def _colour(args) -> int:
    from .asymptotic import colour_asymptotic
    from .bipartite import PreconditionError, four_colour_saturating, sixteen_colour, three_colour
    from .chromatic import cf_by_chromatic, cf_total_by_chromatic

    G = read_graph(_read_text(args.input), args.format)
    extra: dict = {"method": args.method}
    seed = default_seed() if args.seed is None else args.seed
    try:
        if args.method in ("three", "four"):
            side = two_colour(G)
            if side is None:
                raise PreconditionError("not-bipartite", "graph is not bipartite")
            c = (three_colour if args.method == "three" else four_colour_saturating)(G, side)
        elif args.method == "sixteen":
            T = spanning_forest(G)
            c = sixteen_colour(G, T, np.setdiff1d(np.arange(G.m), T))
        elif args.method == "chromatic":
            r = (cf_total_by_chromatic if args.total else cf_by_chromatic)(G, exact_chi=args.exact_chi)
            c = r.colouring
            extra.update(alpha=r.alpha, palette_size=r.palette_size)
        else:
            c, rep = colour_asymptotic(G, args.eps, seed, d=args.core_d)
            extra["report"] = rep.as_dict()
            extra["seed"] = seed
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.total and not c.is_total:
        fill = int(c.colour.max(initial=0)) + 1
        c.colour[c.colour == 0] = fill
    verdict = is_conflict_free(G, c, "hybrid")
    extra.update(colours=c.num_colours, verdict=verdict.ok)
    _write(colouring_to_json(c, **extra), args.output)
    if not verdict.ok:
        print(f"error: colouring leaves edges unsatisfied: {verdict.unsatisfied[:10]}", file=sys.stderr)
        return EXIT_ALGO
    return EXIT_OK


def _verify(args) -> int:
    c = colouring_from_json(_read_text(args.input))
    v = is_conflict_free(c.graph, c, args.mode)
    _write(json.dumps({"mode": args.mode, "ok": v.ok, "unsatisfied": v.unsatisfied}), args.output)
    return EXIT_OK if v.ok else EXIT_FALSE


def _exact(args) -> int:
    from .exact import InstanceTooLarge, exact_chromatic_number, exact_index

    G = read_graph(_read_text(args.input), args.format)
    try:
        r = exact_chromatic_number(G) if args.mode == "chi" else exact_index(G, args.mode)
    except InstanceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write(str(r.value), args.output)
    return EXIT_OK


def _decompose(args) -> int:
    from .decompose import balanced_split, core_split

    G = read_graph(_read_text(args.input), args.format)
    if args.core is not None:
        sp = core_split(G, args.core)
        doc = {"d": args.core, "H": sp.H.tolist(), "D": sp.D.tolist(), "removal_order": sp.removal_order.tolist()}
    else:
        seed = default_seed() if args.seed is None else args.seed
        sp = balanced_split(G, args.balanced, seed=seed)
        doc = {"k": args.balanced, "parts": [p.tolist() for p in sp.parts]}
    _write(json.dumps(doc), args.output)
    return EXIT_OK


def _gnp(args) -> int:
    from .lab import gnp

    seed = default_seed() if args.seed is None else args.seed
    G = gnp(args.n, args.p, seed)
    _write(write_graph(G, args.out_format), args.output)
    return EXIT_OK


def _lab(args) -> int:
    from .lab import read_grid, rows_to_csv, sweep

    grid = read_grid(_read_text(args.grid))
    seeds = _seed_range(args.seeds)
    methods = [m for m in args.methods.split(",") if m]
    for m in methods:
        if m not in ("chromatic", "asymptotic", "exact"):
            raise UsageError(f"unknown method {m!r}")
    rows = sweep(grid, methods, seeds, eps=args.eps)
    _write(rows_to_csv(rows), args.output)
    return EXIT_OK if all(r["verdict"] == "true" for r in rows) else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cfedge", description="Conflict-free edge colouring toolkit.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def graph_input(p):
        p.add_argument("input", nargs="?", default="-", help="graph file, '-' for stdin")
        p.add_argument("--format", choices=["edgelist", "dimacs", "auto"], default="auto")
        p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("colour", help="colour a graph and self-verify")
    graph_input(p)
    p.add_argument("--method", choices=["three", "four", "sixteen", "chromatic", "asymptotic"], default="chromatic")
    p.add_argument("--total", action="store_true", help="colour every edge (one extra fill colour)")
    p.add_argument("--exact-chi", action="store_true", help="use an optimal vertex colouring (n <= 20)")
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--core-d", type=int, default=None, help="override the core threshold (>= 10)")
    p.set_defaults(func=_colour)

    p = sub.add_parser("verify", help="check a colouring JSON")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--mode", choices=["ccf", "ocf", "cf"], default="cf")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_verify)

    p = sub.add_parser("exact", help="exact index or chromatic number of a small graph")
    graph_input(p)
    p.add_argument("--mode", choices=["ccf", "ocf", "cf", "chi"], default="cf")
    p.set_defaults(func=_exact)

    p = sub.add_parser("decompose", help="core split or balanced split")
    graph_input(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--core", type=int, metavar="D")
    g.add_argument("--balanced", type=int, metavar="K")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_decompose)

    p = sub.add_parser("gnp", help="binomial random graph")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-p", type=float, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out-format", choices=["edgelist", "dimacs"], default="edgelist")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_gnp)

    p = sub.add_parser("lab", help="experiments")
    labsub = p.add_subparsers(dest="labcmd", required=True)
    q = labsub.add_parser("sweep", help="CSV of palettes over a (n, p) grid")
    q.add_argument("--grid", required=True, help="file with one 'n p' pair per line")
    q.add_argument("--seeds", default="0..0", help="range a..b or list a,b,c")
    q.add_argument("--methods", default="chromatic")
    q.add_argument("--eps", type=float, default=1.0)
    q.add_argument("-o", "--output", default=None)
    q.set_defaults(func=_lab)
    return ap


def main(argv=None) -> int:
    from .asymptotic import PipelineError
    from .bipartite import ConstructionError
    from .decompose import DecompositionError

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PipelineError, ConstructionError, DecompositionError, AssertionError) as exc:
        print(f"algorithm failure: {exc}", file=sys.stderr)
        return EXIT_ALGO


if __name__ == "__main__":
    sys.exit(main())
