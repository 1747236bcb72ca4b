"""Reading and writing instances in an extended DIMACS edge format.

Layout of an instance file (UTF-8, line oriented)::

    c meta k=<int> p=<float> q=<float> pcc=<int> seed=<int> ...  (optional)
    c community <v> <g>      (one per vertex when communities are known)
    p edge <n> <m>
    e <u> <v>                (m lines, 1-based endpoints, u < v in canon form)
    n <v> <c>                (one per precoloured vertex)

Vertex ids are 1-based on disk and 0-based in memory. Unknown ``c``
comment lines are ignored, so files remain readable by standard DIMACS
tools. The happiness proportion rho is a run parameter and is never part
of the file; generated files carry an advisory ``rho_suggested`` in the
meta line.

``write_instance`` emits a canonical serialization (sorted edges and
metadata); parse/write round-trips are byte-identical.
"""
from __future__ import annotations

import io
from typing import IO

import numpy as np

from .errors import ParseError, ValidationError
from .graph import Graph
from .instance import Colouring, GenParams, Instance, validate_colouring

_META_INT_KEYS = ("k", "pcc", "seed", "extra_edges")
_META_FLOAT_KEYS = ("p", "q", "rho_suggested")


def _format_float(x: float) -> str:
    # repr() is the shortest string that round-trips through float().
    return repr(float(x))


def parse_instance(source: str | bytes | IO) -> Instance:
    """Parse an instance file from text, bytes, or a file-like object."""
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")

    n = None
    m_declared = None
    edges: list[tuple[int, int]] = []
    precolour: dict[int, int] = {}
    community: dict[int, int] = {}
    meta: dict[str, str] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "c":
            if len(parts) >= 2 and parts[1] == "meta":
                for field in parts[2:]:
                    key, sep, value = field.partition("=")
                    if sep != "=":
                        raise ParseError(f"malformed meta field {field!r}", lineno)
                    meta[key] = value
            elif len(parts) >= 2 and parts[1] == "community":
                if len(parts) != 4:
                    raise ParseError("expected 'c community <v> <g>'", lineno)
                v, g = _ints(parts[2:4], lineno)
                if v in community:
                    raise ParseError(f"duplicate community line for vertex {v}", lineno)
                community[v] = g
            # any other comment: ignore
        elif tag == "p":
            if n is not None:
                raise ParseError("second problem line", lineno)
            if len(parts) != 4 or parts[1] != "edge":
                raise ParseError("expected 'p edge <n> <m>'", lineno)
            n, m_declared = _ints(parts[2:4], lineno)
        elif tag == "e":
            if len(parts) != 3:
                raise ParseError("expected 'e <u> <v>'", lineno)
            u, v = _ints(parts[1:3], lineno)
            edges.append((u - 1, v - 1))
        elif tag == "n":
            if len(parts) != 3:
                raise ParseError("expected 'n <v> <c>'", lineno)
            v, c = _ints(parts[1:3], lineno)
            if v in precolour:
                raise ParseError(f"duplicate precolour line for vertex {v}", lineno)
            precolour[v] = c
        else:
            raise ParseError(f"unrecognised line tag {tag!r}", lineno)

    if n is None:
        raise ParseError("missing 'p edge' line")
    if m_declared != len(edges):
        raise ParseError(f"problem line declares {m_declared} edges, file has {len(edges)}")

    graph = Graph(n, edges)

    if "k" in meta:
        k = _meta_int(meta, "k")
    else:
        # No meta header: take the smallest k consistent with the ids used.
        observed = list(precolour.values()) + list(community.values())
        k = max(observed, default=2)
        k = max(k, 2)

    comm = None
    if community:
        comm = {v - 1: g for v, g in community.items()}
    pre = {v - 1: c for v, c in precolour.items()}
    # Out-of-file-range vertex ids surface as vertex-range validation errors.
    for v in list(pre) + (list(comm) if comm else []):
        if not 0 <= v < n:
            raise ValidationError("vertex-range", f"vertex {v + 1} outside 1..{n}")

    params = None
    if any(key in meta for key in ("p", "q", "pcc", "seed")):
        params = GenParams(
            p=_meta_float(meta, "p", required=True),
            q=_meta_float(meta, "q", required=True),
            pcc=_meta_int(meta, "pcc", required=True),
            seed=_meta_int(meta, "seed", required=True),
            rho_suggested=_meta_float(meta, "rho_suggested"),
            extra_edges=_meta_int(meta, "extra_edges") or 0,
        )

    return Instance(graph, k, pre, comm, params)


def _ints(fields, lineno):
    try:
        return tuple(int(f) for f in fields)
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(fields)!r}", lineno) from None


def _meta_int(meta, key, required=False):
    if key not in meta:
        if required:
            raise ParseError(f"meta line missing required field {key!r}")
        return None
    try:
        return int(meta[key])
    except ValueError:
        raise ParseError(f"meta field {key}={meta[key]!r} is not an integer") from None


def _meta_float(meta, key, required=False):
    if key not in meta:
        if required:
            raise ParseError(f"meta line missing required field {key!r}")
        return None
    try:
        return float(meta[key])
    except ValueError:
        raise ParseError(f"meta field {key}={meta[key]!r} is not a number") from None


def write_instance(inst: Instance) -> str:
    """Canonical serialization; parse(write(inst)) == inst."""
    out = io.StringIO()
    meta_fields = [f"k={inst.k}"]
    if inst.params is not None:
        pr = inst.params
        meta_fields += [f"p={_format_float(pr.p)}", f"q={_format_float(pr.q)}",
                        f"pcc={pr.pcc}", f"seed={pr.seed}"]
        if pr.rho_suggested is not None:
            meta_fields.append(f"rho_suggested={_format_float(pr.rho_suggested)}")
        if pr.extra_edges:
            meta_fields.append(f"extra_edges={pr.extra_edges}")
    out.write("c meta " + " ".join(meta_fields) + "\n")
    if inst.community is not None:
        for v in range(inst.n):
            out.write(f"c community {v + 1} {int(inst.community[v])}\n")
    out.write(f"p edge {inst.n} {inst.graph.m}\n")
    for u, v in inst.graph.edges:  # already sorted with u < v
        out.write(f"e {u + 1} {v + 1}\n")
    for v in inst.precoloured_vertices:
        out.write(f"n {int(v) + 1} {int(inst.precolour[v])}\n")
    return out.getvalue()


def read_instance_file(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def write_instance_file(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(write_instance(inst))


def parse_colouring(source: str | IO, inst: Instance) -> Colouring:
    """Read a colouring file: one '<v> <colour>' pair per line, 1-based."""
    text = source if isinstance(source, str) else source.read()
    colours = np.zeros(inst.n, dtype=np.int64)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("expected '<vertex> <colour>'", lineno)
        v, c = _ints(parts, lineno)
        if not 1 <= v <= inst.n:
            raise ParseError(f"vertex {v} outside 1..{inst.n}", lineno)
        colours[v - 1] = c
    return validate_colouring(inst, colours)


def write_colouring(colours: Colouring) -> str:
    return "".join(f"{v + 1} {int(c)}\n" for v, c in enumerate(colours))


def read_colouring_file(path, inst: Instance) -> Colouring:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_colouring(fh.read(), inst)


def write_colouring_file(colours: Colouring, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(write_colouring(colours))
