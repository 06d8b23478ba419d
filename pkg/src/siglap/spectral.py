"""Dense spectral computations for the signed Laplacian and its homotopy.

Sign convention: off-diagonal entries are the edge weights and the diagonal
is minus the row sum, so an all-positive connected graph gives a negative
semi-definite Laplacian with a simple kernel spanned by the constant vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceFailure, EmptyNegativePart, NegativeParameter
from .graph import (
    SignedGraph,
    contract_subgraph,
    count_components,
    flexibility,
    require_connected,
    subgraph_negative,
    subgraph_positive,
)
from .treepoly import Root, RootList, _cluster

RESIDUAL_FACTOR = 1e-10
RANK_THRESHOLD = 1e-12
MATCH_TOL = 1e-6


@dataclass(frozen=True)
class LaplacianMatrix:
    entries: np.ndarray
    source: int
    t: float = 1.0

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class IndexTriple:
    n_minus: int
    n_zero: int
    n_plus: int
    zero_tolerance: float = 0.0

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n_minus, self.n_zero, self.n_plus)

    def __iter__(self):
        return iter(self.as_tuple())


def laplacian_array(g: SignedGraph, t: float = 1.0) -> np.ndarray:
    """``L(G(t))`` as a float array; parallel edges add up and loops drop out."""
    n = g.n_vertices
    m = np.zeros((n, n))
    for u, v, w in g.edges:
        if u == v:
            continue
        w = float(w) if w > 0 else t * float(w)
        m[u, v] += w
        m[v, u] += w
        m[u, u] -= w
        m[v, v] -= w
    return m


def laplacian_exact(g: SignedGraph, t=1) -> list[list[Fraction]]:
    t = Fraction(t)
    n = g.n_vertices
    m = [[Fraction(0)] * n for _ in range(n)]
    for u, v, w in g.edges:
        if u == v:
            continue
        w = Fraction(w) if w > 0 else t * Fraction(w)
        m[u][v] += w
        m[v][u] += w
        m[u][u] -= w
        m[v][v] -= w
    return m


def assemble(g: SignedGraph, t: float = 1.0) -> LaplacianMatrix:
    """Laplacian of ``G+ + t G-``; ``t = 1`` gives ``L(G)``."""
    if t < 0:
        raise NegativeParameter(f"homotopy parameter must be >= 0, got {t}")
    return LaplacianMatrix(laplacian_array(g, t), hash(g.canonical_key()), float(t))


def _as_array(m) -> np.ndarray:
    return m.entries if isinstance(m, LaplacianMatrix) else np.asarray(m, dtype=float)


def eigensystem(m) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors (columns)."""
    a = _as_array(m)
    n = a.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0))
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    norm = max(np.linalg.norm(a, 2), 1.0)
    resid = np.linalg.norm(a @ vecs - vecs * vals, axis=0)
    if resid.max() > RESIDUAL_FACTOR * n * norm:
        raise ConvergenceFailure(f"eigenpair residual {resid.max():.3e} too large")
    return vals, vecs


def default_zero_tolerance(a: np.ndarray) -> float:
    n = a.shape[0]
    return 1e-9 * n * float(np.abs(a).max(initial=0.0))


def inertia(m, zero_tolerance: float | None = None) -> IndexTriple:
    """Counts of eigenvalues below ``-tol``, within ``tol``, above ``tol``."""
    a = _as_array(m)
    tol = default_zero_tolerance(a) if zero_tolerance is None else float(zero_tolerance)
    vals = np.linalg.eigvalsh(a) if a.size else np.zeros(0)
    return IndexTriple(
        int(np.sum(vals < -tol)), int(np.sum(np.abs(vals) <= tol)), int(np.sum(vals > tol)), tol
    )


@lru_cache(maxsize=64)
def mean_zero_basis(n: int) -> np.ndarray:
    """Orthonormal basis of the complement of the constant vector (n x n-1)."""
    q, _ = np.linalg.qr(np.column_stack([np.ones(n), np.eye(n)[:, : n - 1]]))
    basis = q[:, 1:]
    basis.setflags(write=False)
    return basis


def restricted_eigenvalues(g: SignedGraph, t: float) -> np.ndarray:
    """Spectrum of ``L(G(t))`` on mean-zero vectors, ascending (N-1 values)."""
    q = mean_zero_basis(g.n_vertices)
    return np.linalg.eigvalsh(q.T @ laplacian_array(g, t) @ q)


def unstable(g: SignedGraph, t: float) -> bool:
    """Whether ``L(G(t))`` has a positive eigenvalue.

    The constant kernel vector is projected out first, so the remaining zero
    threshold only has to absorb rounding.
    """
    vals = restricted_eigenvalues(g, t)
    a = laplacian_array(g, t)
    tol = 64 * np.finfo(float).eps * a.shape[0] * float(np.abs(a).max(initial=1.0))
    return bool(vals[-1] > tol)


# -- bounds ------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundCheck:
    lower: int
    value: int
    upper: int

    @property
    def ok(self) -> bool:
        return self.lower <= self.value <= self.upper

    @property
    def slack(self) -> tuple[int, int]:
        return (self.value - self.lower, self.upper - self.value)


@dataclass(frozen=True)
class BoundsReport:
    index: IndexTriple
    c_plus: int
    c_minus: int
    tau: int
    n_plus: BoundCheck
    n_minus: BoundCheck
    n_zero: BoundCheck

    @property
    def ok(self) -> bool:
        return self.n_plus.ok and self.n_minus.ok and self.n_zero.ok

    def checks(self) -> dict[str, BoundCheck]:
        return {"n_plus": self.n_plus, "n_minus": self.n_minus, "n_zero": self.n_zero}


def bounds_for(n: int, c_plus: int, c_minus: int, index: IndexTriple) -> BoundsReport:
    return BoundsReport(
        index=index,
        c_plus=c_plus,
        c_minus=c_minus,
        tau=n - c_plus - c_minus + 1,
        n_plus=BoundCheck(c_plus - 1, index.n_plus, n - c_minus),
        n_minus=BoundCheck(c_minus - 1, index.n_minus, n - c_plus),
        n_zero=BoundCheck(1, index.n_zero, n + 2 - c_minus - c_plus),
    )


def check_bounds(g: SignedGraph, t: float = 1.0, zero_tolerance: float | None = None) -> BoundsReport:
    """Index of ``L(G(t))`` against the topological upper and lower bounds."""
    flex = flexibility(g)
    index = inertia(assemble(g, t), zero_tolerance)
    return bounds_for(g.n_vertices, flex.c_plus, flex.c_minus, index)


# -- homotopy curves ---------------------------------------------------------------


@dataclass
class EigenCurve:
    t_grid: np.ndarray
    values: np.ndarray  # (len(t_grid), N) full sorted spectra
    restricted: np.ndarray  # (len(t_grid), N-1) spectra on mean-zero vectors
    branches: np.ndarray  # restricted spectra reordered into matched branches
    crossings: list[float] = field(default_factory=list)


def _match_branches(restricted: np.ndarray, vectors: list[np.ndarray]) -> np.ndarray:
    # sorted order is the nearest-value assignment; near-ties are reassigned
    # by eigenvector overlap with the previous grid point
    out = restricted.copy()
    perm_prev = np.arange(restricted.shape[1])
    for j in range(1, restricted.shape[0]):
        vals = restricted[j]
        perm = np.arange(len(vals))
        start = 0
        while start < len(vals):
            stop = start + 1
            while stop < len(vals) and vals[stop] - vals[stop - 1] <= MATCH_TOL:
                stop += 1
            if stop - start > 1:
                from scipy.optimize import linear_sum_assignment

                block = np.abs(vectors[j - 1][:, start:stop].T @ vectors[j][:, start:stop])
                _, cols = linear_sum_assignment(-block)
                perm[start:stop] = start + cols
            start = stop
        # branch b at j-1 sat in sorted slot perm_prev[b]; follow it
        perm_prev = perm[perm_prev]
        out[j] = vals[perm_prev]
    return out


def eigen_curves(g: SignedGraph, t_grid, refine: bool = True) -> EigenCurve:
    """Spectra of ``L(G(t))`` along ``t_grid`` with zero crossings located.

    A crossing is recorded for every mean-zero branch that is negative at the
    first grid point and positive at the last; it is refined by root finding
    on that (monotone) sorted eigenvalue.  Crossings before ``t_grid[0]`` are
    not reported.
    """
    require_connected(g)
    grid = np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("t_grid must be a non-empty 1-d sequence")
    if np.any(grid < 0):
        raise NegativeParameter("t_grid must be non-negative")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    n = g.n_vertices
    q = mean_zero_basis(n)
    values = np.empty((grid.size, n))
    restricted = np.empty((grid.size, n - 1))
    vectors = []
    tols = np.empty(grid.size)
    for j, t in enumerate(grid):
        a = laplacian_array(g, t)
        values[j] = np.linalg.eigvalsh(a)
        rv, rvec = np.linalg.eigh(q.T @ a @ q)
        restricted[j] = rv
        vectors.append(rvec)
        tols[j] = default_zero_tolerance(a)
    branches = _match_branches(restricted, vectors)
    crossings = []
    for i in range(n - 1):
        col = restricted[:, i]
        if not (col[0] < -tols[0] and col[-1] > tols[-1]):
            continue
        j = int(np.argmax(col > tols))
        lo, hi = grid[j - 1], grid[j]
        if not refine:
            crossings.append(float(hi))
            continue

        def branch(t, i=i):
            return restricted_eigenvalues(g, t)[i]

        flo, fhi = branch(lo), branch(hi)
        if flo < 0 < fhi:
            crossings.append(brentq(branch, lo, hi, xtol=1e-15, rtol=1e-14))
        else:
            # a grid point sits on the root and rounding hides the sign change
            crossings.append(float(lo) if abs(flo) <= abs(fhi) else float(hi))
    crossings.sort()
    return EigenCurve(grid, values, restricted, branches, crossings)


# -- generalized symmetric pencil ------------------------------------------------------


def gsep_eigenvalues(g: SignedGraph) -> np.ndarray:
    """Finite eigenvalues ``t`` of ``-L+ v = t L- v`` on mean-zero vectors.

    ``L-`` (the Laplacian of the negative part, positive semi-definite) is
    split by its eigendecomposition into range and kernel; the kernel block
    carries the infinite eigenvalues and is eliminated by a Schur complement,
    leaving a standard symmetric problem on the range.
    """
    require_connected(g)
    if not g.negative_edge_ids():
        raise EmptyNegativePart("the negative subgraph has no edges")
    n = g.n_vertices
    q = mean_zero_basis(n)
    a = q.T @ (-laplacian_array(subgraph_positive(g))) @ q
    c = q.T @ laplacian_array(subgraph_negative(g), 1.0) @ q
    s, u = np.linalg.eigh(c)
    keep = s > RANK_THRESHOLD * max(float(s.max(initial=0.0)), 1.0)
    r, z = u[:, keep], u[:, ~keep]
    a11 = r.T @ a @ r
    if z.shape[1]:
        a12 = r.T @ a @ z
        a22 = z.T @ a @ z
        schur = a11 - a12 @ np.linalg.solve(a22, a12.T)
    else:
        schur = a11
    inv_sqrt = 1.0 / np.sqrt(s[keep])
    reduced = (schur * inv_sqrt[:, None]) * inv_sqrt[None, :]
    vals = np.linalg.eigvalsh(0.5 * (reduced + reduced.T))
    return np.sort(vals)


def gsep_roots(g: SignedGraph, rtol: float = 1e-8) -> RootList:
    """Crossing-polynomial roots recovered as pencil eigenvalues, clustered."""
    vals = gsep_eigenvalues(g)
    scale = max(1.0, float(np.abs(vals).max(initial=0.0)))
    vals = [0.0 if abs(v) <= 1e-10 * scale else float(v) for v in vals]
    return RootList(tuple(Root(v, m, False) for v, m in _cluster(vals, rtol)), "gsep-numeric")


# -- asymptotics ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticSpectrum:
    limit: str  # "inf" or "0"
    linear_rates: tuple[float, ...]  # eigenvalues ~ rate * t
    finite_limits: tuple[float, ...]  # eigenvalues -> limit


def _weighted_quotient_spectrum(quotient: SignedGraph, weights) -> np.ndarray:
    lq = laplacian_array(quotient)
    d = 1.0 / np.sqrt(np.asarray(weights, dtype=float))
    vals = np.linalg.eigvalsh((lq * d[:, None]) * d[None, :])
    # drop the single constant mode
    return np.delete(vals, int(np.argmin(np.abs(vals))))


def _drop_kernel(vals: np.ndarray, dim: int) -> np.ndarray:
    order = np.argsort(np.abs(vals))
    return np.sort(vals[order[dim:]])


def asymptotic_spectrum(g: SignedGraph, limit: str = "inf") -> AsymptoticSpectrum:
    """Leading-order eigenvalues of ``L(G(t))`` as ``t -> inf`` or ``t -> 0+``.

    ``t -> inf``: rates are the nonzero Laplacian eigenvalues of ``G-``; the
    bounded eigenvalues tend to the nonzero solutions of ``L_c v = lam S v``
    with ``L_c`` the graph contracted on its negative edges and ``S`` the
    diagonal of component sizes.  ``t -> 0+`` swaps the roles of the signs.
    """
    require_connected(g)
    if limit in ("inf", "infinity", "oo"):
        neg = subgraph_negative(g)
        rates = _drop_kernel(np.linalg.eigvalsh(laplacian_array(neg)), count_components(neg))
        quotient, sizes = contract_subgraph(g, "-")
        finite = _weighted_quotient_spectrum(quotient, sizes)
        return AsymptoticSpectrum("inf", tuple(map(float, rates)), tuple(map(float, np.sort(finite))))
    if limit in ("0", "zero", "0+"):
        pos = subgraph_positive(g)
        finite = _drop_kernel(np.linalg.eigvalsh(laplacian_array(pos)), count_components(pos))
        quotient, sizes = contract_subgraph(g, "+")
        # negative quotient edges enter L(G(t)) scaled by t
        rates = _weighted_quotient_spectrum(quotient, sizes)
        return AsymptoticSpectrum("0", tuple(map(float, np.sort(rates))), tuple(map(float, finite)))
    raise ValueError(f"limit must be 'inf' or '0', got {limit!r}")


def contracted_pencil_eigenvalues(laplacian, weights) -> np.ndarray:
    """All solutions of ``L v = lam S v`` for ``S = diag(weights)`` (ascending)."""
    lq = np.asarray(laplacian, dtype=float)
    d = 1.0 / np.sqrt(np.asarray(weights, dtype=float))
    return np.linalg.eigvalsh((lq * d[:, None]) * d[None, :])


# -- Gershgorin --------------------------------------------------------------------------


@dataclass(frozen=True)
class GershgorinReport:
    discs: tuple[tuple[float, float], ...]  # (center, radius) per vertex
    n_mixed: int
    tau: int | None  # None when the comparison does not apply
    holds: bool | None  # n_mixed >= tau + 1, when it applies

    def contains(self, value: float, slack: float = 1e-9) -> bool:
        return any(abs(value - c) <= r + slack * max(1.0, abs(c) + r) for c, r in self.discs)


def gershgorin(g: SignedGraph) -> GershgorinReport:
    """Gershgorin discs of ``L(G)`` and the count of discs with 0 in the interior."""
    n = g.n_vertices
    entries: dict[tuple[int, int], object] = {}
    for u, v, w in g.edges:
        if u != v:
            entries[(u, v)] = entries.get((u, v), 0) + w
    center = [0] * n
    radius = [0] * n
    for (u, v), w in entries.items():
        center[u] -= w
        center[v] -= w
        radius[u] += abs(w)
        radius[v] += abs(w)
    n_mixed = sum(1 for c, r in zip(center, radius) if abs(c) < r)
    discs = tuple((float(c), float(r)) for c, r in zip(center, radius))
    has_both = any(w > 0 for w in entries.values()) and any(w < 0 for w in entries.values())
    tau = holds = None
    if has_both and count_components(g) == 1:
        tau = flexibility(g).tau
        holds = n_mixed >= tau + 1
    return GershgorinReport(discs, n_mixed, tau, holds)


def spectral_radius_bound(g: SignedGraph) -> float:
    """Largest |lambda| any disc allows; a safe horizon for homotopy grids."""
    return max((abs(c) + r for c, r in gershgorin(g).discs), default=0.0)


def largest_root_bound(g: SignedGraph) -> float:
    """Upper bound on the largest finite crossing parameter."""
    vals = gsep_eigenvalues(g)
    top = float(vals.max(initial=0.0))
    return top if math.isfinite(top) else math.inf
