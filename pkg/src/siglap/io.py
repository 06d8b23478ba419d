"""Edge-list files, directed-data symmetrization and report/CSV emission.

Edge-list format: one ``u v w`` triple per line, whitespace separated, with
``w`` a signed decimal or a rational ``p/q``.  ``#`` starts a comment.  Two
comment headers are understood::

    # vertices 16      vertex ids are 0..15 and kept as they are
    # mode float       force floating weights even if all parse as rationals

Without a ``vertices`` header the ids may be arbitrary non-negative integers;
they are compacted to ``0..k-1`` in increasing order and the original ids are
kept in ``id_map``.
"""

from __future__ import annotations

import csv
import io
import math
import re
from fractions import Fraction
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence, TextIO

import numpy as np

from .errors import DuplicateEdge, ParseError, SignedGraphError, ZeroWeight
from .graph import SignedGraph, count_components, flexibility, is_connected, subgraph_negative, subgraph_positive

_VERTICES_RE = re.compile(r"^#\s*vertices\s+(\d+)\s*$", re.IGNORECASE)
_MODE_RE = re.compile(r"^#\s*mode\s+(exact|float)\s*$", re.IGNORECASE)

# dense spectral work is skipped above this size
DENSE_LIMIT = 2000
POLY_LIMIT = 40


class LoadedGraph(NamedTuple):
    graph: SignedGraph
    id_map: list[int]  # compacted id -> original id


def _parse_weight(token: str, lineno: int):
    try:
        return Fraction(token), True
    except (ValueError, ZeroDivisionError):
        pass
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"weight {token!r} is not a number", lineno) from None
    if not math.isfinite(value):
        raise ParseError(f"weight {token!r} is not finite", lineno)
    return value, False


def _parse_vertex(token: str, lineno: int) -> int:
    try:
        v = int(token)
    except ValueError:
        raise ParseError(f"vertex id {token!r} is not an integer", lineno) from None
    if v < 0:
        raise ParseError(f"vertex id {v} is negative", lineno)
    return v


def _read_lines(source) -> Iterable[str]:
    if isinstance(source, (str, Path)) and not (isinstance(source, str) and "\n" in source):
        with open(source, encoding="utf-8") as fh:
            yield from fh
    elif isinstance(source, str):
        yield from io.StringIO(source)
    else:
        yield from source


def load_edge_list(
    source,
    *,
    multigraph: bool = False,
    exact: bool | None = None,
    directed: bool = False,
) -> LoadedGraph:
    """Read an edge list from a path, a text blob or an open text stream.

    ``multigraph`` sums repeated undirected pairs instead of rejecting them.
    ``directed`` reads ``i j sign`` lines as one-way relations and merges the
    two directions with :func:`symmetrize_directed`.
    """
    n_header = None
    mode_header = None
    triples = []
    all_rational = True
    for lineno, raw in enumerate(_read_lines(source), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _VERTICES_RE.match(line)
            if m:
                n_header = int(m.group(1))
            m = _MODE_RE.match(line)
            if m:
                mode_header = m.group(1).lower()
            continue
        line = line.split("#", 1)[0]
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'u v w', got {len(parts)} fields", lineno)
        u = _parse_vertex(parts[0], lineno)
        v = _parse_vertex(parts[1], lineno)
        w, rational = _parse_weight(parts[2], lineno)
        all_rational &= rational
        triples.append((u, v, w, lineno))

    if exact is None:
        exact = all_rational and mode_header != "float"
    if exact and not all_rational:
        raise ParseError("exact mode requested but some weights are not rational")

    if directed:
        entries = []
        for u, v, w, lineno in triples:
            if w not in (1, -1):
                raise ParseError(f"directed input needs signs +1/-1, got {w}", lineno)
            entries.append((u, v, int(w)))
        merged = _symmetrize(entries)
        triples = [(u, v, Fraction(s), 0) for (u, v), s in merged.items()]

    ids = sorted({x for u, v, _, _ in triples for x in (u, v)})
    if n_header is not None:
        bad = [x for x in ids if x >= n_header]
        if bad:
            ln = next(t[3] for t in triples if t[0] in bad or t[1] in bad)
            raise ParseError(f"vertex id {bad[0]} >= declared vertex count {n_header}", ln)
        n = n_header
        id_map = list(range(n))
        remap = None
    else:
        n = len(ids)
        id_map = ids
        remap = {x: i for i, x in enumerate(ids)} if ids != list(range(n)) else None

    edges = []
    seen: dict[tuple[int, int], int] = {}
    for u, v, w, lineno in triples:
        if u == v:
            raise ParseError(f"loop at vertex {u}", lineno)
        if w == 0:
            raise ZeroWeight(f"line {lineno}: zero weight on ({u}, {v})")
        if remap is not None:
            u, v = remap[u], remap[v]
        key = (min(u, v), max(u, v))
        if key in seen:
            if not multigraph:
                raise DuplicateEdge(f"duplicate edge {key}", lineno)
            i = seen[key]
            edges[i] = (key[0], key[1], edges[i][2] + w)
            continue
        seen[key] = len(edges)
        edges.append((key[0], key[1], w))
    # pairs that summed to zero carry no edge
    edges = [e for e in edges if e[2] != 0]
    if not exact:
        edges = [(u, v, float(w)) for u, v, w in edges]
    return LoadedGraph(SignedGraph(n, edges, exact=exact), id_map)


def parse_edge_list(source, **options) -> SignedGraph:
    return load_edge_list(source, **options).graph


def _symmetrize(entries: Iterable[tuple[int, int, int]]) -> dict[tuple[int, int], int]:
    one_way: dict[tuple[int, int], int] = {}
    for i, j, s in entries:
        if i == j:
            continue
        one_way[(i, j)] = s
    merged = {}
    for (i, j), s in one_way.items():
        key = (min(i, j), max(i, j))
        if key in merged:
            continue
        back = one_way.get((j, i), 0)
        if back == 0 or back == s:
            merged[key] = s
        # opposite signs cancel: no edge
    return dict(sorted(merged.items()))


def symmetrize_directed(entries: Iterable[tuple[int, int, int]], n_vertices: int | None = None) -> SignedGraph:
    """Undirected signs from one-way relations.

    Agreeing directions keep their sign, a relation answered by silence is
    extended to both directions, and opposite signs cancel to no edge.
    """
    entries = list(entries)
    for _, _, s in entries:
        if s not in (1, -1):
            raise ValueError(f"signs must be +1 or -1, got {s}")
    merged = _symmetrize(entries)
    n = n_vertices
    if n is None:
        n = 1 + max((max(i, j) for i, j, _ in entries), default=-1)
    return SignedGraph(n, [(u, v, s) for (u, v), s in merged.items()], exact=True)


def format_value(x) -> str:
    """Exact values as ``p/q`` (or an integer), floats with 17 significant digits."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def write_edge_list(g: SignedGraph, target: TextIO | None = None) -> str:
    lines = [f"# vertices {g.n_vertices}"]
    if not g.exact:
        lines.append("# mode float")
    lines += [f"{u} {v} {format_value(w)}" for u, v, w in g.edges]
    text = "\n".join(lines) + "\n"
    if target is not None:
        target.write(text)
    return text


# -- reports -----------------------------------------------------------------------


def json_value(x):
    """JSON-safe scalar: exact values and infinities become strings."""
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if math.isinf(x):
        return "inf"
    return x


def topology_report(g: SignedGraph) -> dict:
    """Sparse-only summary: sizes, component counts and flexibility."""
    c = count_components(g)
    c_plus = count_components(subgraph_positive(g))
    c_minus = count_components(subgraph_negative(g))
    n_neg = len(g.negative_edge_ids())
    return {
        "n_vertices": g.n_vertices,
        "n_edges": g.n_edges,
        "n_positive_edges": g.n_edges - n_neg,
        "n_negative_edges": n_neg,
        "components": c,
        "c_plus": c_plus,
        "c_minus": c_minus,
        "tau": g.n_vertices - c_plus - c_minus + 1 if c == 1 else None,
    }


def analysis_report(
    g: SignedGraph,
    id_map: Sequence[int] | None = None,
    zero_tolerance: float | None = None,
    poly_limit: int = POLY_LIMIT,
) -> dict:
    """Everything the library knows about a connected signed graph, as a dict."""
    from . import homology, spectral, treepoly

    report = {
        "exact": g.exact,
        "id_map": list(id_map) if id_map is not None else list(range(g.n_vertices)),
        **topology_report(g),
    }
    if not is_connected(g):
        raise SignedGraphError(f"analysis needs a connected graph ({report['components']} components)")
    if g.n_vertices > DENSE_LIMIT:
        return report

    bounds = spectral.check_bounds(g, zero_tolerance=zero_tolerance)
    report["index"] = {
        "n_minus": bounds.index.n_minus,
        "n_zero": bounds.index.n_zero,
        "n_plus": bounds.index.n_plus,
        "zero_tolerance": bounds.index.zero_tolerance,
    }
    report["bounds"] = {
        name: {"lower": b.lower, "value": b.value, "upper": b.upper, "slack": list(b.slack), "ok": b.ok}
        for name, b in bounds.checks().items()
    }

    report["crossing_polynomial"] = None
    report["roots"] = None
    if g.n_vertices <= poly_limit:
        poly = treepoly.crossing_polynomial(g)
        report["crossing_polynomial"] = {
            "coeffs": [json_value(c) for c in poly.coeffs],
            "k_min": poly.k_min,
            "k_max": poly.k_max,
            "text": str(poly),
        }
        if g.negative_edge_ids():
            roots = treepoly.polynomial_roots(poly, graph=g)
            report["roots"] = {
                "method": roots.method,
                "values": [
                    {"value": json_value(r.value), "multiplicity": r.multiplicity, "exact": r.exact}
                    for r in roots.roots
                ],
                "positive_count": roots.positive_count(),
            }
    report["t_star"] = json_value(treepoly.t_star(g, method="polynomial" if g.n_vertices <= poly_limit else "bisection").t_star)

    gr = spectral.gershgorin(g)
    report["gershgorin"] = {"n_mixed": gr.n_mixed, "tau": gr.tau, "holds": gr.holds}

    dec = homology.decompose(g)
    report["subspaces"] = {
        "dim_free": dec.dim_free,
        "dim_fixed": dec.dim_fixed,
        "orthogonal": dec.orthogonal,
        "projected_index": list(dec.projected.as_tuple()),
    }
    report["asymptotics"] = {}
    for limit, key in (("inf", "t_infinity"), ("0", "t_zero")):
        a = spectral.asymptotic_spectrum(g, limit)
        report["asymptotics"][key] = {
            "linear_rates": list(a.linear_rates),
            "finite_limits": list(a.finite_limits),
        }
    return report


def report_text(report: dict) -> str:
    """Human-readable rendering of :func:`analysis_report` output."""
    out = [
        f"vertices {report['n_vertices']}  edges {report['n_edges']} "
        f"(+{report['n_positive_edges']} / -{report['n_negative_edges']})  "
        f"{'exact' if report['exact'] else 'float'} weights",
        f"c(G+) = {report['c_plus']}  c(G-) = {report['c_minus']}  tau = {report['tau']}",
    ]
    if "index" in report:
        idx = report["index"]
        out.append(f"index (n-, n0, n+) = ({idx['n_minus']}, {idx['n_zero']}, {idx['n_plus']})")
        for name, b in report["bounds"].items():
            flag = "ok" if b["ok"] else "VIOLATED"
            out.append(f"  {b['lower']} <= {name} = {b['value']} <= {b['upper']}  [{flag}]")
    if report.get("crossing_polynomial"):
        out.append(f"M(G(t)) = {report['crossing_polynomial']['text']}")
    if report.get("roots"):
        vals = ", ".join(
            f"{r['value']}" + (f" (x{r['multiplicity']})" if r["multiplicity"] > 1 else "")
            for r in report["roots"]["values"]
        )
        out.append(f"roots: {vals}")
    if "t_star" in report:
        out.append(f"t_star = {report['t_star']}")
    if "gershgorin" in report:
        gr = report["gershgorin"]
        out.append(f"gershgorin: {gr['n_mixed']} discs contain 0 in their interior")
    if "subspaces" in report:
        s = report["subspaces"]
        out.append(
            f"dim S_free = {s['dim_free']}  dim S_fixed = {s['dim_fixed']}  "
            f"projected index = {tuple(s['projected_index'])}"
        )
    if "asymptotics" in report:
        for key, a in report["asymptotics"].items():
            rates = ", ".join(f"{x:.6g}" for x in a["linear_rates"])
            lims = ", ".join(f"{x:.6g}" for x in a["finite_limits"])
            out.append(f"{key}: rates [{rates}]  limits [{lims}]")
    return "\n".join(out) + "\n"


def write_csv(rows: Iterable[Sequence], header: Sequence[str], target: TextIO) -> None:
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(x) if not isinstance(x, str) else x for x in row])


def curves_csv(curve, target: TextIO) -> None:
    n = curve.values.shape[1]
    header = ["t"] + [f"lambda_{i + 1}" for i in range(n)]
    write_csv(([t, *vals] for t, vals in zip(curve.t_grid, curve.values)), header, target)


def records_csv(records, target: TextIO) -> None:
    header = ["sample", "accepted", "reason", "t_star", "n_plus_edges", "n_minus_edges"]
    rows = (
        [r.sample, "1" if r.accepted else "0", r.reason or "", "" if r.t_star is None else r.t_star,
         r.n_plus_edges, r.n_minus_edges]
        for r in records
    )
    write_csv(rows, header, target)


def qq_csv(summary, target: TextIO) -> None:
    rows = [["normal", a, b] for a, b in summary.qq_normal]
    rows += [["lognormal", a, b] for a, b in summary.qq_lognormal]
    write_csv(rows, ["reference", "theoretical", "sample"], target)
