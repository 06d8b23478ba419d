"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line (shown in the pytest terminal
summary, or on stdout when this file is run as a script) and then asserts.
"""

from __future__ import annotations

import math
import random
import tempfile
import time
from collections import Counter
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from acceptance_log import record
from helpers import atlas_corpus, random_connected, rational_corpus, reweight, signed_rational, unit_sign
from siglap import ensemble as ens
from siglap import families, io, spectral
from siglap.graph import contract_edge, delete_edge, flexibility, is_connected, subgraph_positive
from siglap.homology import decompose, projected_index
from siglap.treepoly import (
    crossing_polynomial,
    crossing_polynomial_oracle,
    enumerate_spanning_trees,
    polynomial_roots,
    t_star,
    tree_constant,
)


def check(key: str, ok: bool, detail: str) -> None:
    record(key, "PASS" if ok else "FAIL", detail)
    assert ok, detail


def test_c01_ring_bifurcation():
    start = time.perf_counter()
    got = {n: t_star(families.ring(n, 1)).t_star for n in range(3, 13)}
    elapsed = time.perf_counter() - start
    wrong = [n for n, t in got.items() if not (isinstance(t, Fraction) and t == Fraction(1, n - 1))]
    check("C1", not wrong and elapsed < 1.0,
          f"R_N, one edge flipped, N=3..12: t* = 1/(N-1) exactly ({len(got) - len(wrong)}/10), {elapsed:.3f}s (< 1s)")


def test_c02_complete_graph():
    bad = []
    worst = 0.0
    for n in range(3, 10):
        g = families.complete(n, 1)
        if t_star(g).t_star != Fraction(n - 2, 2):
            bad.append(f"t* N={n}")
        for t in (0.5, 1.0, 5.0):
            vals, _ = spectral.eigensystem(spectral.assemble(g, t))
            # the edge direction e_0 - e_1 carries 2t - (N - 2), which vanishes at t* = (N - 2) / 2
            expect = np.sort([0.0] + [-float(n)] * (n - 2) + [2 * t - (n - 2)])
            err = float(np.abs(vals - expect).max())
            worst = max(worst, err)
            if err > 1e-8:
                bad.append(f"spectrum N={n} t={t}")
    check("C2", not bad,
          f"K_N, one -1 edge, N=3..9: t* = (N-2)/2 exactly; spectrum {{0}} u {{-N}}^(N-2) u {{2t-(N-2)}} "
          f"max error {worst:.1e} (<= 1e-8){'; failures: ' + ', '.join(bad) if bad else ''}")


def test_c03_deletion_contraction_example():
    g = families.deletion_contraction_example()
    e = g.negative_edge_ids()[0]
    trees = list(enumerate_spanning_trees(g))
    off = sorted(int(t.weight) for t in trees if e not in t.edge_ids)
    on = sorted(int(abs(t.weight)) for t in trees if e in t.edge_ids)
    poly = crossing_polynomial(g)
    # polynomial form of the identity: M(G(t)) = M(G \ e) + gamma_e(t) M(G.e), gamma_e(t) = -5t
    deleted = crossing_polynomial(delete_edge(g, e)).standard()
    contracted, _ = contract_edge(g, e)
    rhs = [deleted[0], g.edges[e][2] * tree_constant(contracted)]
    identity_poly = poly.standard() == rhs
    identity_all = all(
        tree_constant(g) == tree_constant(delete_edge(g, i), allow_disconnected=True)
        + g.edges[i][2] * tree_constant(contract_edge(g, i)[0])
        for i in range(g.n_edges)
    )
    ok = off == [8, 12, 24] and on == [10, 15, 20, 30, 40] and str(poly) == "44 - 115t" and identity_poly and identity_all
    check("C3", ok, f"tree weights off e {off}, on e {on}; M(G(t)) = {poly}; "
                    f"M = M(G\\e) + gamma_e M(G.e) exact on every edge: {identity_all}")


def test_c04_contracted_asymptotics():
    lap = [[-3, 2, 1], [2, -4, 2], [1, 2, -3]]
    vals = spectral.contracted_pencil_eigenvalues(lap, [3, 2, 4])
    r = math.sqrt(33)
    expect = np.sort([0.0, (r - 15) / 8, (-r - 15) / 8])
    err = float(np.abs(vals - expect).max())
    # the same pencil arises from the reference graph contracted on its negative edges
    limits = spectral.asymptotic_spectrum(families.asymptotics_example(), "inf").finite_limits
    err_graph = float(np.abs(np.asarray(limits) - expect[:2]).max())
    check("C4", err <= 1e-10 and err_graph <= 1e-10,
          f"L v = lam S v, S = diag(3,2,4): {{0, (sqrt33-15)/8, (-sqrt33-15)/8}} error {err:.1e}; "
          f"via t->inf contraction {err_graph:.1e} (<= 1e-10)")


def test_c05_oracle_equivalence():
    start = time.perf_counter()
    atlas = atlas_corpus()
    rational = rational_corpus()
    mismatches = 0
    for g in atlas + rational:
        if crossing_polynomial(g).coeffs != crossing_polynomial_oracle(g).coeffs:
            mismatches += 1
    elapsed = time.perf_counter() - start
    check("C5", mismatches == 0 and elapsed < 300,
          f"{len(atlas)} atlas graphs N<=6 under +-1 signs (capped at 1e4) + {len(rational)} rational N<=7: "
          f"{mismatches} coefficient mismatches, {elapsed:.0f}s (< 300s)")


def _bound_samples(count: int):
    config = ens.EnsembleConfig(n=10, p_plus=0.45, p_minus=0.2, seed=2024)
    out, idx = [], 0
    while len(out) < count:
        g = ens.sample_graph(config, idx)
        idx += 1
        if is_connected(g):
            out.append(g)
    return out


def test_c06_bounds_and_tightness():
    samples = _bound_samples(1000)
    violations = sum(not spectral.check_bounds(g).ok for g in samples)

    rng = random.Random(606)
    tight = 0
    topologies = 0
    while topologies < 20:
        g = random_connected(rng, rng.randint(6, 10), 0.45, unit_sign)
        if flexibility(g).tau == 0 or not g.negative_edge_ids():
            continue
        topologies += 1
        w = reweight(g, rng)
        flex = flexibility(w)
        roots = [v for v in spectral.gsep_roots(w).values() if v > 0]
        t_small = min(roots) / 2 if roots else 1e-3
        t_large = max(roots) * 2 if roots else 1e3
        lo = spectral.check_bounds(w, t=t_small)
        hi = spectral.check_bounds(w, t=t_large)
        if lo.index.n_plus == flex.c_plus - 1 and hi.index.n_plus == w.n_vertices - flex.c_minus and lo.ok and hi.ok:
            tight += 1
    check("C6", violations == 0 and tight == 20,
          f"bounds violated on {violations}/1000 connected N=10 ensemble samples; "
          f"n+ attains c(G+)-1 below the smallest root and N-c(G-) above the largest on {tight}/20 topologies")


def test_c07_homology_consistency():
    rng = random.Random(707)
    failures = Counter()
    cases = 0
    for g in atlas_corpus() + rational_corpus():
        cases += 1
        flex = flexibility(g)
        expected = (flex.c_minus - 1, 1, flex.c_plus - 1)
        dec = decompose(g)
        if dec.dim_free != flex.tau:
            failures["dim"] += 1
        if not dec.orthogonal:
            failures["orthogonal"] += 1
        if dec.projected.as_tuple() != expected:
            failures["projected"] += 1
        for _ in range(10):
            if projected_index(reweight(g, rng)).as_tuple() != expected:
                failures["reweighted"] += 1
    check("C7", not failures,
          f"{cases} graphs (criterion-5 corpus) x 11 weightings: dim mixed-cycle group = tau, S_free _|_ S_fixed, "
          f"projected index = (c(G-)-1, 1, c(G+)-1); failures {dict(failures) or 0}")


def test_c08_root_agreement():
    rng = random.Random(808)
    worst = 0.0
    bad = 0
    roots_seen = 0
    for _ in range(100):
        g = random_connected(rng, 8, 0.5, signed_rational)
        while not g.negative_edge_ids():
            g = random_connected(rng, 8, 0.5, signed_rational)
        exact = [float(v) for v in polynomial_roots(crossing_polynomial(g)).values() if v > 0]
        pencil = [v for v in spectral.gsep_roots(g).values() if v > 0]
        if not exact:
            bad += bool(pencil)
            continue
        grid = np.linspace(0.0, 1.25 * max(exact), 241)
        crossings = spectral.eigen_curves(g, grid).crossings
        roots_seen += len(exact)
        if not (len(exact) == len(pencil) == len(crossings)):
            bad += 1
            continue
        e = np.asarray(exact)
        rel = max(float(np.max(np.abs(np.asarray(other) - e) / e)) for other in (pencil, crossings))
        worst = max(worst, rel)
        bad += rel > 1e-6
    check("C8", bad == 0 and worst <= 1e-6,
          f"100 random N=8 rational graphs, {roots_seen} positive roots: Sturm vs pencil vs curve crossings "
          f"max relative difference {worst:.1e} (<= 1e-6), {bad} disagreements")


def test_c09_gershgorin():
    samples = [g for g in atlas_corpus() + rational_corpus() + tuple(_bound_samples(1000))]
    two_sign = 0
    failures = 0
    for g in samples:
        rep = spectral.gershgorin(g)
        if rep.holds is None:
            continue
        two_sign += 1
        failures += not rep.holds
    cycles_ok = all(
        (lambda r: r.n_mixed == n and r.tau == 1)(spectral.gershgorin(families.alternating_cycle(n)))
        for n in range(4, 41, 2)
    )
    check("C9", failures == 0 and cycles_ok,
          f"n_mixed >= tau+1 failed on {failures}/{two_sign} connected two-sign graphs; "
          f"alternating cycles N=4..40 even: n_mixed = N, tau = 1: {cycles_ok}")


def test_c10_ensemble_trend(tmp_path):
    start = time.perf_counter()
    means = []
    qq_written = []
    for p_plus in (0.35, 0.45, 0.55, 0.65):
        cfg = ens.EnsembleConfig(n=10, p_plus=p_plus, p_minus=0.2, samples=256, seed=10, target_accepted=1000)
        records, summary = ens.run_ensemble(cfg)
        assert summary.count == 1000
        means.append(summary.mean)
        qq = tmp_path / f"qq_{p_plus:.2f}.csv"
        with open(qq, "w", newline="") as fh:
            io.qq_csv(summary, fh)
        qq_written.append(qq.stat().st_size > 0)
    elapsed = time.perf_counter() - start
    increasing = all(a < b for a, b in zip(means, means[1:]))
    check("C10", increasing and all(qq_written) and elapsed < 600,
          f"N=10, p-=0.20, p+=0.35/0.45/0.55/0.65, 1000 accepted each: mean t* = "
          f"{', '.join(f'{m:.4f}' for m in means)} (strictly increasing: {increasing}); QQ CSV written; {elapsed:.0f}s (< 600s)")


def test_c11_external_datasets():
    # the loader path for such data is exercised by the directed-input and large-file tests
    record("C11", "SKIP",
           "network crossing-polynomial coefficients and signed social-network counts need external datasets; "
           "ingestion/symmetrization supported, substance covered by C5-C9")
    pytest.skip("requires external datasets not shipped with the package")


def test_t_star_range_monitor():
    """Single negative edge with connected G+: is t* within [1/(N-1), (N-2)/2]?  Reported only."""
    checked = outside = 0
    for g in atlas_corpus():
        if g.n_vertices < 3 or len(g.negative_edge_ids()) != 1 or not is_connected(subgraph_positive(g)):
            continue
        checked += 1
        t = t_star(g).t_star
        n = g.n_vertices
        outside += not (Fraction(1, n - 1) <= t <= Fraction(n - 2, 2))
    record("monitor", "INFO", f"t* range conjecture (one negative edge, G+ connected): "
                              f"{outside} of {checked} atlas cases outside [1/(N-1), (N-2)/2]")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                if "tmp_path" in fn.__code__.co_varnames[: fn.__code__.co_argcount]:
                    with tempfile.TemporaryDirectory() as d:
                        fn(Path(d))
                else:
                    fn()
            except AssertionError:
                pass
            except pytest.skip.Exception:
                pass
