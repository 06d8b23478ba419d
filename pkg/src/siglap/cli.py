"""Command line interface: ``siglap <command> [options]``.

Exit status is 0 on success, 1 when the input fails validation (or a
``verify`` check fails) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import ensemble as ens
from . import homology, io, spectral, treepoly
from .errors import SignedGraphError
from .graph import flexibility, require_connected

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class _Fail(Exception):
    """Validation failure reported with exit status 1."""


def _load(args):
    loaded = io.load_edge_list(
        args.file,
        multigraph=args.multigraph,
        exact=False if args.float else None,
        directed=args.directed,
    )
    return loaded


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _figures_dir(args) -> Path | None:
    return Path(args.figures) if getattr(args, "figures", None) else None


# -- commands ----------------------------------------------------------------------


def cmd_analyze(args) -> int:
    loaded = _load(args)
    report = io.analysis_report(loaded.graph, loaded.id_map, zero_tolerance=args.tol)
    _emit(args, report, io.report_text(report))
    return EXIT_OK


def cmd_poly(args) -> int:
    g = _load(args).graph
    require_connected(g)
    p = treepoly.crossing_polynomial(g, method=args.method)
    payload = {
        "coeffs": [io.json_value(c) for c in p.coeffs],
        "k_min": p.k_min,
        "k_max": p.k_max,
        "text": str(p),
    }
    lines = [f"M(G(t)) = {p}"]
    lines += [f"a_{k} = {io.format_value(c)}" for k, c in enumerate(p.coeffs) if c != 0]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_roots(args) -> int:
    g = _load(args).graph
    require_connected(g)
    p = treepoly.crossing_polynomial(g)
    roots = treepoly.polynomial_roots(p, graph=g)
    payload = {
        "method": roots.method,
        "roots": [
            {"value": io.json_value(r.value), "multiplicity": r.multiplicity, "exact": r.exact}
            for r in roots.roots
        ],
    }
    lines = [f"# method {roots.method}"]
    lines += [
        f"{io.format_value(r.value)}" + (f"  x{r.multiplicity}" if r.multiplicity > 1 else "")
        for r in roots.roots
    ]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_tstar(args) -> int:
    g = _load(args).graph
    bp = treepoly.t_star(g, method=args.method, rtol=args.rtol)
    _emit(args, {"t_star": io.json_value(bp.t_star), "method": bp.method}, f"t_star = {bp}")
    return EXIT_OK


def cmd_curves(args) -> int:
    g = _load(args).graph
    if args.tmin < 0 or args.tmax <= args.tmin:
        raise _Fail("need 0 <= --tmin < --tmax")
    if args.points < 2:
        raise _Fail("--points must be at least 2")
    grid = np.linspace(args.tmin, args.tmax, args.points)
    curve = spectral.eigen_curves(g, grid)
    if args.out:
        out = Path(args.out)
        with open(out, "w", newline="") as fh:
            io.curves_csv(curve, fh)
        with open(out.with_suffix(".crossings.csv"), "w", newline="") as fh:
            io.write_csv(([t] for t in curve.crossings), ["t_crossing"], fh)
    else:
        io.curves_csv(curve, sys.stdout)
    for t in curve.crossings:
        print(f"# crossing t = {io.format_value(t)}", file=sys.stderr)
    figs = _figures_dir(args)
    if figs is not None:
        from .plotting import plot_eigen_curves

        plot_eigen_curves(curve, figs / "eigen_curves.png")
    return EXIT_OK


def cmd_decompose(args) -> int:
    g = _load(args).graph
    dec = homology.decompose(g)
    payload = {
        "tau": dec.tau,
        "c_plus": dec.c_plus,
        "c_minus": dec.c_minus,
        "dim_free": dec.dim_free,
        "dim_fixed": dec.dim_fixed,
        "orthogonal": dec.orthogonal,
        "projected_index": list(dec.projected.as_tuple()),
        "free_basis": dec.free.matrix(g.n_vertices).tolist(),
        "fixed_basis": dec.fixed.basis.tolist(),
    }
    lines = [
        f"tau = {dec.tau}  dim S_free = {dec.dim_free}  dim S_fixed = {dec.dim_fixed}",
        f"S_free orthogonal to S_fixed: {dec.orthogonal}",
        f"projected index (n-, n0, n+) = {dec.projected.as_tuple()}",
        "free basis:",
    ]
    lines += ["  " + " ".join(f"{int(x):+d}" for x in v) for v in dec.free.vectors]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_asymptotics(args) -> int:
    g = _load(args).graph
    a = spectral.asymptotic_spectrum(g, args.limit)
    payload = {"limit": a.limit, "linear_rates": list(a.linear_rates), "finite_limits": list(a.finite_limits)}
    text = (
        f"t -> {a.limit}\n"
        f"linear rates:  {' '.join(io.format_value(x) for x in a.linear_rates)}\n"
        f"finite limits: {' '.join(io.format_value(x) for x in a.finite_limits)}"
    )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_gershgorin(args) -> int:
    g = _load(args).graph
    gr = spectral.gershgorin(g)
    payload = {
        "n_mixed": gr.n_mixed,
        "tau": gr.tau,
        "holds": gr.holds,
        "discs": [{"center": c, "radius": r} for c, r in gr.discs],
    }
    lines = [f"{gr.n_mixed} of {g.n_vertices} discs contain 0 in their interior"]
    if gr.tau is not None:
        lines.append(f"tau + 1 = {gr.tau + 1}  n_mixed >= tau + 1: {gr.holds}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_ensemble(args) -> int:
    config = ens.EnsembleConfig(
        n=args.n,
        p_plus=args.p_plus,
        p_minus=args.p_minus,
        samples=args.samples,
        seed=args.seed,
        t_star_method=args.method,
        target_accepted=args.target_accepted,
    )
    records, summary = ens.run_ensemble(config, workers=args.workers)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "records.csv", "w", newline="") as fh:
        io.records_csv(records, fh)
    with open(out / "qq.csv", "w", newline="") as fh:
        io.qq_csv(summary, fh)
    reasons: dict[str, int] = {}
    for r in records:
        if not r.accepted:
            reasons[r.reason] = reasons.get(r.reason, 0) + 1
    summary_doc = {
        "n": config.n,
        "p_plus": config.p_plus,
        "p_minus": config.p_minus,
        "seed": config.seed,
        "method": config.t_star_method,
        "draws": len(records),
        "accepted": summary.count,
        "rejected": reasons,
        "mean": None if math.isnan(summary.mean) else summary.mean,
        "std": None if math.isnan(summary.std) else summary.std,
        "qq_r2_normal": ens.qq_r_squared(summary.qq_normal) if summary.qq_normal else None,
        "qq_r2_lognormal": ens.qq_r_squared(summary.qq_lognormal) if summary.qq_lognormal else None,
    }
    (out / "summary.json").write_text(json.dumps(summary_doc, indent=2) + "\n")
    figs = _figures_dir(args)
    if figs is not None and summary.count:
        from . import plotting

        plotting.plot_histogram(summary.values, figs / "t_star_hist.png")
        if summary.qq_normal:
            plotting.plot_qq(summary.qq_normal, figs / "qq_normal.png", "normal")
        if summary.qq_lognormal:
            plotting.plot_qq(summary.qq_lognormal, figs / "qq_lognormal.png", "lognormal")
    _emit(args, summary_doc, f"accepted {summary.count} of {len(records)}  mean t_star = {summary.mean:.6g}")
    return EXIT_OK


def _verify_checks(g, zero_tolerance):
    """Yield ``(name, status, detail)`` with status PASS, FAIL or SKIP."""
    require_connected(g)
    poly = treepoly.crossing_polynomial(g)

    if g.n_vertices <= treepoly.ENUMERATION_CAP:
        oracle = treepoly.crossing_polynomial_oracle(g)
        if g.exact:
            same = oracle.coeffs == poly.coeffs
        else:
            a, b = np.asarray(oracle.coeffs, float), np.asarray(poly.coeffs, float)
            same = a.shape == b.shape and np.allclose(a, b, rtol=1e-9, atol=0)
        yield "deletion-contraction vs tree enumeration", same, f"{poly}"
    else:
        yield "deletion-contraction vs tree enumeration", None, f"N > {treepoly.ENUMERATION_CAP}"

    if g.negative_edge_ids() and poly.k_max is not None:
        roots = treepoly.polynomial_roots(poly, graph=g)
        ours = np.asarray(roots.values(), dtype=float)
        ours = ours[ours > 0]
        pencil = np.asarray(spectral.gsep_roots(g).values(), dtype=float)
        pencil = np.sort(pencil[pencil > 0])
        ok = ours.shape == pencil.shape and np.allclose(ours, pencil, rtol=1e-6, atol=0)
        yield "polynomial roots vs pencil eigenvalues", ok, f"{ours.size} positive roots"
    else:
        yield "polynomial roots vs pencil eigenvalues", None, "no negative edges"

    flex = flexibility(g)
    ts = [1.0]
    if g.negative_edge_ids():
        vals = np.asarray(spectral.gsep_roots(g).values(), dtype=float)
        vals = vals[vals > 0]
        if vals.size:
            ts = [float(vals.min()) / 2, 1.0, float(vals.max()) * 2]
    bad = []
    for t in ts:
        rep = spectral.check_bounds(g, t=t, zero_tolerance=zero_tolerance)
        if not rep.ok:
            bad.append(f"t={t:.6g} index {rep.index.as_tuple()}")
    yield "index bounds", not bad, "; ".join(bad) or f"tau = {flex.tau}"

    try:
        dec = homology.decompose(g)
        ok = dec.orthogonal and dec.dim_free == flex.tau
        detail = f"dim S_free = {dec.dim_free}, tau = {flex.tau}"
    except AssertionError as exc:
        ok, detail = False, str(exc)
    yield "subspace orthogonality", ok, detail


def cmd_verify(args) -> int:
    g = _load(args).graph
    failed = 0
    results = []
    for name, ok, detail in _verify_checks(g, args.tol):
        status = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
        failed += status == "FAIL"
        results.append({"check": name, "status": status, "detail": detail})
    text = "\n".join(f"{r['status']}  {r['check']}: {r['detail']}" for r in results)
    _emit(args, {"checks": results, "failed": failed}, text)
    return EXIT_INVALID if failed else EXIT_OK


# -- parser ------------------------------------------------------------------------


def _probability(s: str) -> float:
    p = float(s)
    if not 0.0 <= p <= 1.0:
        raise argparse.ArgumentTypeError(f"{s} is not in [0, 1]")
    return p


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"{s} must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--tol", type=float, default=None, help="zero tolerance for eigenvalue counts")
    common.add_argument("--seed", type=int, default=0)

    graph_in = argparse.ArgumentParser(add_help=False)
    graph_in.add_argument("file", help="edge list ('u v w' per line)")
    graph_in.add_argument("--multigraph", action="store_true", help="sum repeated pairs")
    graph_in.add_argument("--float", action="store_true", help="use floating-point weights")
    graph_in.add_argument("--directed", action="store_true", help="symmetrize one-way 'i j sign' lines")

    parser = argparse.ArgumentParser(prog="siglap", description="Signed graph Laplacian analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common, graph_in], help="full report")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("poly", parents=[common, graph_in], help="crossing polynomial")
    p.add_argument("--method", choices=("auto", "dc", "interpolate"), default="auto")
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("roots", parents=[common, graph_in], help="crossing polynomial roots")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("tstar", parents=[common, graph_in], help="bifurcation point")
    p.add_argument("--method", choices=("polynomial", "bisection"), default="polynomial")
    p.add_argument("--rtol", type=float, default=1e-8)
    p.set_defaults(func=cmd_tstar)

    p = sub.add_parser("curves", parents=[common, graph_in], help="eigenvalues along t (CSV)")
    p.add_argument("--tmin", type=float, default=0.0)
    p.add_argument("--tmax", type=float, default=4.0)
    p.add_argument("--points", type=int, default=401)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--figures", metavar="DIR", help="also render PNG figures into DIR")
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("decompose", parents=[common, graph_in], help="fixed/free subspaces")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("asymptotics", parents=[common, graph_in], help="limiting spectra")
    p.add_argument("--limit", choices=("inf", "0"), default="inf")
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("gershgorin", parents=[common, graph_in], help="disc summary")
    p.set_defaults(func=cmd_gershgorin)

    p = sub.add_parser("ensemble", parents=[common], help="signed random graph statistics")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--p-plus", type=_probability, required=True)
    p.add_argument("--p-minus", type=_probability, required=True)
    p.add_argument("--samples", type=_positive_int, default=1000)
    p.add_argument("--target-accepted", type=_positive_int, default=None)
    p.add_argument("--method", choices=("polynomial", "bisection"), default="bisection")
    p.add_argument("--workers", type=_positive_int, default=None,
                   help=f"worker processes (default: ${ens.THREADS_ENV} or 1)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--figures", metavar="DIR", help="also render PNG figures into DIR")
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("verify", parents=[common, graph_in], help="oracle cross-checks")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol is not None and not (args.tol >= 0):
        parser.error("--tol must be non-negative")
    try:
        return args.func(args)
    except (_Fail, SignedGraphError, ValueError, OSError) as exc:
        print(f"siglap: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
