"""Edge-list / DIMACS graph files and colouring JSON."""
from __future__ import annotations

import json

import numpy as np

from .graph import Graph, GraphError, build_graph
from .verify import Colouring


class ParseError(GraphError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _lines(text):
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return text.splitlines()


def sniff_format(text) -> str:
    for line in _lines(text):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        return "dimacs" if s[0] in "pce" and not s[0].isdigit() else "edgelist"
    return "edgelist"


def read_graph(text, format: str = "edgelist") -> Graph:
    if format == "auto":
        format = sniff_format(text)
    if format == "edgelist":
        return _read_edgelist(text)
    if format == "dimacs":
        return _read_dimacs(text)
    raise ValueError(f"unknown graph format {format!r}")


def _read_edgelist(text) -> Graph:
    pairs = []
    n = 0
    for lineno, line in enumerate(_lines(text), 1):
        s = line.split("#", 1)[0].strip()
        if not s:
            continue
        parts = s.split()
        if len(parts) != 2:
            raise ParseError(lineno, f"expected 'u v', got {line.strip()!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(lineno, f"non-integer vertex in {line.strip()!r}") from None
        if u < 0 or v < 0:
            raise ParseError(lineno, "negative vertex id")
        if u == v:
            raise ParseError(lineno, f"loop at vertex {u}")
        pairs.append((u, v))
        n = max(n, u + 1, v + 1)
    try:
        return build_graph(n, pairs)
    except GraphError as exc:
        raise _locate(exc, pairs, text, skip_header=False)


def _read_dimacs(text) -> Graph:
    n = None
    pairs = []
    rows = []
    for lineno, line in enumerate(_lines(text), 1):
        s = line.strip()
        if not s or s[0] == "c" or s[0] == "#":
            continue
        parts = s.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError(lineno, "second problem line")
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise ParseError(lineno, f"expected 'p edge n m', got {s!r}")
            try:
                n, _m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(lineno, "non-integer size in problem line") from None
        elif parts[0] == "e":
            if n is None:
                raise ParseError(lineno, "edge before problem line")
            if len(parts) != 3:
                raise ParseError(lineno, f"expected 'e u v', got {s!r}")
            try:
                u, v = int(parts[1]) - 1, int(parts[2]) - 1
            except ValueError:
                raise ParseError(lineno, f"non-integer vertex in {s!r}") from None
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(lineno, f"vertex out of range 1..{n}")
            if u == v:
                raise ParseError(lineno, f"loop at vertex {u + 1}")
            pairs.append((u, v))
            rows.append(lineno)
        else:
            raise ParseError(lineno, f"unrecognised line {s!r}")
    if n is None:
        raise ParseError(0, "missing 'p edge' line")
    seen = {}
    for (u, v), lineno in zip(pairs, rows):
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(lineno, f"duplicate edge {u + 1} {v + 1} (first on line {seen[key]})")
        seen[key] = lineno
    return build_graph(n, pairs)


def _locate(exc, pairs, text, skip_header):
    # map a duplicate-edge error back to the line that repeats it
    seen = {}
    idx = 0
    for lineno, line in enumerate(_lines(text), 1):
        s = line.split("#", 1)[0].strip()
        if not s:
            continue
        u, v = pairs[idx]
        idx += 1
        key = (min(u, v), max(u, v))
        if key in seen:
            return ParseError(lineno, f"duplicate edge {u} {v} (first on line {seen[key]})")
        seen[key] = lineno
    return exc


def write_graph(G: Graph, format: str = "edgelist") -> str:
    if format == "edgelist":
        return "".join(f"{u} {v}\n" for u, v in G.edges.tolist())
    if format == "dimacs":
        head = f"p edge {G.n} {G.m}\n"
        return head + "".join(f"e {u + 1} {v + 1}\n" for u, v in G.edges.tolist())
    raise ValueError(f"unknown graph format {format!r}")


def colouring_to_json(c: Colouring, **extra) -> str:
    doc = {
        "n": c.graph.n,
        "edges": c.graph.edges.tolist(),
        "colour": [int(a) if a > 0 else None for a in c.colour.tolist()],
    }
    doc.update(extra)
    return json.dumps(doc)


def colouring_from_json(text) -> Colouring:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, f"invalid JSON: {exc.msg}") from None
    if not isinstance(doc, dict) or "edges" not in doc or "colour" not in doc:
        raise ParseError(1, "colouring JSON needs 'edges' and 'colour'")
    edges = doc["edges"]
    cols = doc["colour"]
    if len(edges) != len(cols):
        raise ParseError(1, "'edges' and 'colour' lengths differ")
    n = doc.get("n")
    if n is None:
        n = 1 + max((max(p) for p in edges), default=-1)
    G = build_graph(int(n), [tuple(p) for p in edges])
    arr = np.array([0 if a is None else int(a) for a in cols], dtype=np.int64)
    if (arr < 0).any() or any(a is not None and int(a) == 0 for a in cols):
        raise ParseError(1, "colours must be positive integers or null")
    return Colouring(G, arr)
