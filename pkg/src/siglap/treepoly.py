"""Spanning-tree sums, the crossing polynomial and the bifurcation point.

For a connected signed graph the homotopy ``G(t) = G+ + t G-`` has reduced
Laplacian determinant ``M(G(t)) = sum_k a_k (-t)**k`` with ``a_k >= 0`` the
total |weight product| of spanning trees using exactly ``k`` negative edges.
:func:`crossing_polynomial` computes the ``a_k`` by deletion-contraction on
the negative edges; :func:`enumerate_spanning_trees` is the brute-force
oracle it is tested against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from . import polyroots
from .errors import (
    ConvergenceFailure,
    DisconnectedGraph,
    PreconditionViolated,
    TooLarge,
    ZeroPolynomial,
)
from .graph import (
    DisjointSet,
    SignedGraph,
    contract_edge,
    delete_edge,
    flexibility,
    is_connected,
    require_connected,
    subgraph_positive,
)

ENUMERATION_CAP = 12
# above this many negative edges exact mode switches to interpolation
DC_NEGATIVE_EDGE_LIMIT = 18


class SpanningTree(NamedTuple):
    edge_ids: tuple[int, ...]
    weight: object  # product of the edge weights, sign included
    k: int  # number of negative edges


@dataclass(frozen=True)
class CrossingPolynomial:
    """Coefficients ``a_k`` of ``M(G(t)) = sum_k a_k (-t)**k``."""

    coeffs: tuple
    exact: bool = True
    graph: SignedGraph | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        coeffs = list(self.coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        conv = Fraction if self.exact else float
        object.__setattr__(self, "coeffs", tuple(conv(c) for c in coeffs))

    @classmethod
    def from_standard(cls, standard: Sequence, exact: bool = True, graph=None):
        """Build from ordinary coefficients ``c_k`` of ``sum_k c_k t**k``."""
        return cls(tuple(c if k % 2 == 0 else -c for k, c in enumerate(standard)), exact, graph)

    def standard(self) -> list:
        return [c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def k_min(self) -> int | None:
        return next((k for k, c in enumerate(self.coeffs) if c != 0), None)

    @property
    def k_max(self) -> int | None:
        nz = [k for k, c in enumerate(self.coeffs) if c != 0]
        return nz[-1] if nz else None

    @property
    def degree(self) -> int:
        return self.k_max if self.k_max is not None else -1

    def __call__(self, t):
        acc = 0
        for c in reversed(self.standard()):
            acc = acc * t + c
        return acc

    evaluate = __call__

    def log_concave(self) -> bool:
        a = self.coeffs
        return all(a[k + 1] * a[k - 1] <= a[k] * a[k] for k in range(1, len(a) - 1))

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            sign = "-" if k % 2 else "+"
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            terms.append(f"{sign} {c}{mono}")
        s = " ".join(terms) or "0"
        if s.startswith("+ "):
            return s[2:]
        return "-" + s[2:] if s.startswith("- ") else s


class Root(NamedTuple):
    value: object  # Fraction when exact, float otherwise
    multiplicity: int
    exact: bool
    lo: object = None
    hi: object = None


@dataclass(frozen=True)
class RootList:
    roots: tuple[Root, ...]
    method: str  # "sturm-exact" | "gsep-numeric" | "companion-numeric"

    def positive(self) -> list[Root]:
        return [r for r in self.roots if r.value > 0]

    def positive_count(self) -> int:
        return sum(r.multiplicity for r in self.positive())

    def values(self, with_multiplicity: bool = True) -> list[float]:
        out = []
        for r in self.roots:
            out.extend([float(r.value)] * (r.multiplicity if with_multiplicity else 1))
        return out


@dataclass(frozen=True)
class BifurcationPoint:
    t_star: object  # 0, math.inf, Fraction or float
    method: str

    @property
    def finite(self) -> bool:
        return self.t_star != math.inf

    def __float__(self):
        return float(self.t_star)

    def __str__(self):
        t = self.t_star
        if t == math.inf:
            return "inf"
        return str(t)


# -- spanning tree oracle ------------------------------------------------------


def enumerate_spanning_trees(g: SignedGraph, cap: int = ENUMERATION_CAP) -> Iterator[SpanningTree]:
    """Yield every spanning tree once, with its weight product and negative count.

    Brute force over (N-1)-edge subsets with union-find acyclicity; meant as
    an independent oracle for small graphs only.
    """
    n = g.n_vertices
    if n > cap:
        raise TooLarge(f"enumeration capped at {cap} vertices, graph has {n}")
    require_connected(g)
    edges = [(i, u, v, w) for i, (u, v, w) in enumerate(g.edges) if u != v]
    one = Fraction(1) if g.exact else 1.0
    for subset in combinations(edges, n - 1):
        ds = DisjointSet(n)
        if all(ds.union(u, v) for _, u, v, _ in subset):
            prod = one
            k = 0
            for _, _, _, w in subset:
                prod *= w
                k += w < 0
            yield SpanningTree(tuple(e[0] for e in subset), prod, k)


def crossing_polynomial_oracle(g: SignedGraph, cap: int = ENUMERATION_CAP) -> CrossingPolynomial:
    """``a_k`` by bucketing enumerated spanning trees on their negative count."""
    zero = Fraction(0) if g.exact else 0.0
    a = [zero] * max(g.n_vertices, 1)
    for tree in enumerate_spanning_trees(g, cap):
        a[tree.k] += abs(tree.weight)
    return CrossingPolynomial(tuple(a), g.exact, g)


# -- Kirchhoff determinant -----------------------------------------------------


def _bareiss(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    m = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            mik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def _reduced_laplacian_det(n: int, edges, exact: bool):
    # cofactor of the combinatorial Laplacian (degree - adjacency), row/col 0 removed
    if n <= 1:
        return Fraction(1) if exact else 1.0
    if exact:
        den = lcm(*(w.denominator for _, _, w in edges)) if edges else 1
        m = [[0] * (n - 1) for _ in range(n - 1)]
        for u, v, w in edges:
            if u == v:
                continue
            iw = int(w * den)
            if u:
                m[u - 1][u - 1] += iw
            if v:
                m[v - 1][v - 1] += iw
            if u and v:
                m[u - 1][v - 1] -= iw
                m[v - 1][u - 1] -= iw
        return Fraction(_bareiss(m), den ** (n - 1))
    m = np.zeros((n, n))
    for u, v, w in edges:
        if u == v:
            continue
        m[u, u] += w
        m[v, v] += w
        m[u, v] -= w
        m[v, u] -= w
    return float(np.linalg.det(m[1:, 1:]))


def reduced_determinant(g: SignedGraph):
    """Matrix-tree value ``M(G)`` straight from the Laplacian cofactor.

    Equals the signed spanning-tree sum; zero for a disconnected graph.
    """
    return _reduced_laplacian_det(g.n_vertices, g.edges, g.exact)


# -- deletion-contraction ------------------------------------------------------


def _connected(n: int, edges) -> bool:
    if n <= 1:
        return True
    ds = DisjointSet(n)
    for u, v, _ in edges:
        ds.union(u, v)
    return ds.n_sets == 1


def _padd(p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] = out[i] + c
    return out


def _contract(n: int, edges: tuple, idx: int):
    a, b, _ = edges[idx]
    out = []
    for i, (u, v, w) in enumerate(edges):
        if i == idx:
            continue
        u = a if u == b else u - (u > b)
        v = a if v == b else v - (v > b)
        if u == v:
            continue  # loops never lie on a spanning tree
        out.append((u, v, w) if u < v else (v, u, w))
    return n - 1, tuple(out)


def _dc_standard(n: int, edges: tuple, exact: bool, memo: dict) -> list:
    """Ordinary coefficients of M(G(t)) by deletion-contraction on negative edges."""
    key = (n, tuple(sorted(edges)))
    hit = memo.get(key)
    if hit is not None:
        return hit
    zero = Fraction(0) if exact else 0.0
    if not _connected(n, edges):
        result = [zero]
    else:
        neg = next((i for i, e in enumerate(edges) if e[2] < 0), None)
        if neg is None:
            result = [_reduced_laplacian_det(n, edges, exact)]
        else:
            w = edges[neg][2]
            deleted = _dc_standard(n, edges[:neg] + edges[neg + 1:], exact, memo)
            cn, ce = _contract(n, edges, neg)
            contracted = _dc_standard(cn, ce, exact, memo)
            # gamma_e(t) = t * w, w < 0
            shifted = [zero] + [w * c for c in contracted]
            result = _padd(deleted, shifted)
    memo[key] = result
    return result


def _interpolated_standard(g: SignedGraph) -> list:
    """Exact Newton interpolation of the cofactor at t = 0..N-1."""
    n = g.n_vertices
    pos = [e for e in g.edges if e[2] > 0 and e[0] != e[1]]
    neg = [e for e in g.edges if e[2] < 0 and e[0] != e[1]]
    xs = [Fraction(i) for i in range(n)]
    ys = [_reduced_laplacian_det(n, pos + [(u, v, x * w) for u, v, w in neg], True) if x else
          _reduced_laplacian_det(n, pos, True) for x in xs]
    # divided differences, then expand the Newton form
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)]
    for i in range(n - 1, -1, -1):
        # poly = poly * (t - xs[i]) + coef[i]
        nxt = [Fraction(0)] * (len(poly) + 1)
        for k, c in enumerate(poly):
            nxt[k + 1] += c
            nxt[k] -= c * xs[i]
        nxt[0] += coef[i]
        poly = nxt
    return polyroots.trim(poly) or [Fraction(0)]


def crossing_polynomial(g: SignedGraph, method: str = "auto") -> CrossingPolynomial:
    """The crossing polynomial of a connected signed graph.

    ``method`` is ``"dc"`` (deletion-contraction on the negative edges with a
    per-call memo keyed on the edge multiset, Kirchhoff determinant once only
    positive edges remain), ``"interpolate"`` (exact interpolation of the
    Laplacian cofactor; exact mode only) or ``"auto"``.
    """
    require_connected(g)
    n_neg = len(g.negative_edge_ids())
    if method == "auto":
        method = "interpolate" if g.exact and n_neg > DC_NEGATIVE_EDGE_LIMIT else "dc"
    if method == "dc":
        edges = tuple(e for e in g.edges if e[0] != e[1])
        std = _dc_standard(g.n_vertices, edges, g.exact, {})
    elif method == "interpolate":
        if not g.exact:
            raise ValueError("interpolation is only available for exact weights")
        std = _interpolated_standard(g)
    else:
        raise ValueError(f"unknown method {method!r}")
    return CrossingPolynomial.from_standard(std, g.exact, g)


def tree_constant(g: SignedGraph, allow_disconnected: bool = False):
    """``M(G)``: the signed spanning-tree weight sum, via deletion-contraction."""
    if not is_connected(g):
        if allow_disconnected:
            return Fraction(0) if g.exact else 0.0
        raise DisconnectedGraph("tree constant of a disconnected graph")
    return crossing_polynomial(g, method="dc")(1)


def _m_or_zero(g: SignedGraph):
    return reduced_determinant(g) if is_connected(g) else (Fraction(0) if g.exact else 0.0)


def two_edge_polynomial(g: SignedGraph, e: int, f: int) -> CrossingPolynomial:
    """Closed-form quadratic for exactly two vertex-disjoint negative edges."""
    neg = g.negative_edge_ids()
    if sorted(neg) != sorted({e, f}) or e == f:
        raise PreconditionViolated(f"negative edges are {neg}, expected exactly {{{e}, {f}}}")
    ue, ve, we = g.edges[e]
    uf, vf, wf = g.edges[f]
    if {ue, ve} & {uf, vf}:
        raise PreconditionViolated("the two negative edges share a vertex")
    require_connected(g)
    ge, _ = contract_edge(g, e)
    f_in_ge = f - (f > e)
    gef, _ = contract_edge(ge, f_in_ge)
    ge_df = delete_edge(ge, f_in_ge)
    gde = delete_edge(g, e)
    gde_f, _ = contract_edge(gde, f_in_ge)
    gdd = delete_edge(gde, f_in_ge)
    a0 = _m_or_zero(gdd)
    a1 = abs(we) * _m_or_zero(ge_df) + abs(wf) * _m_or_zero(gde_f)
    a2 = abs(we * wf) * _m_or_zero(gef)
    return CrossingPolynomial((a0, a1, a2), g.exact, g)


# -- roots -----------------------------------------------------------------------


def _cluster(values: Sequence[float], rtol: float) -> list[tuple[float, int]]:
    out: list[list] = []
    for v in sorted(values):
        if out and abs(v - out[-1][0]) <= rtol * max(1.0, abs(v)):
            c = out[-1]
            c[0] = (c[0] * c[1] + v) / (c[1] + 1)
            c[1] += 1
        else:
            out.append([v, 1])
    return [(v, m) for v, m in out]


def polynomial_roots(
    p: CrossingPolynomial,
    precision: float = 1e-12,
    graph: SignedGraph | None = None,
    rtol: float = 1e-8,
) -> RootList:
    """All roots of ``p`` with multiplicities (they are real and non-negative).

    Exact coefficients: Yun square-free factorization, then Sturm isolation
    and bisection of each factor to ``precision`` relative width; rational
    roots are recognized and returned exactly.  Float coefficients: roots are
    the finite generalized eigenvalues of the Laplacian pencil of ``graph``
    (or ``p.graph``), clustered at ``rtol`` and checked against ``p``.
    """
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has no isolated roots")
    k0 = p.k_min
    if p.exact:
        return _exact_roots(p, k0, precision)
    graph = graph if graph is not None else p.graph
    if graph is not None and graph.negative_edge_ids():
        return _gsep_roots(p, graph, rtol)
    return _companion_roots(p, rtol)


def _exact_roots(p: CrossingPolynomial, k0: int, precision: float) -> RootList:
    std = p.standard()[k0:]
    roots = [Root(Fraction(0), k0, True, Fraction(0), Fraction(0))] if k0 else []
    for factor, mult in polyroots.square_free_factors(std):
        for lo, hi, exact in polyroots.isolate_positive(factor, precision):
            val = lo if exact else (lo + hi) / 2
            roots.append(Root(val if exact else float(val), mult, exact, lo, hi))
    roots.sort(key=lambda r: r.value)
    if sum(r.multiplicity for r in roots) != p.degree:
        raise ConvergenceFailure(
            f"found {sum(r.multiplicity for r in roots)} real roots for degree {p.degree}"
        )
    return RootList(tuple(roots), "sturm-exact")


def _scaled_residual(p: CrossingPolynomial, t: float) -> float:
    scale = sum(abs(float(c)) * abs(t) ** k for k, c in enumerate(p.coeffs))
    return abs(float(p(t))) / scale if scale else 0.0


def _gsep_roots(p: CrossingPolynomial, graph: SignedGraph, rtol: float) -> RootList:
    from .spectral import gsep_eigenvalues

    vals = gsep_eigenvalues(graph)
    scale = max(1.0, max((abs(v) for v in vals), default=1.0))
    vals = [0.0 if abs(v) <= 1e-10 * scale else v for v in vals]
    clusters = _cluster(vals, rtol)
    roots = tuple(Root(0.0 if v == 0 else v, m, False) for v, m in clusters)
    total = sum(m for _, m in clusters)
    if total != p.degree:
        raise ConvergenceFailure(f"gsep found {total} finite roots, polynomial degree is {p.degree}")
    zero_mult = sum(m for v, m in clusters if v == 0)
    if zero_mult != (p.k_min or 0):
        raise ConvergenceFailure(f"zero root multiplicity {zero_mult} != {p.k_min}")
    for r in roots:
        if r.value > 0 and _scaled_residual(p, r.value) > 1e-6:
            raise ConvergenceFailure(f"gsep root {r.value} does not annihilate the polynomial")
    return RootList(roots, "gsep-numeric")


def _companion_roots(p: CrossingPolynomial, rtol: float) -> RootList:
    k0 = p.k_min
    std = [float(c) for c in p.standard()[k0:]]
    found = np.roots(std[::-1]) if len(std) > 1 else np.array([])
    vals = [float(z.real) for z in found if abs(z.imag) <= 1e-6 * max(1.0, abs(z))]
    if len(vals) != len(std) - 1:
        raise ConvergenceFailure("companion matrix produced non-real roots")
    clusters = _cluster(vals, max(rtol, 1e-6))
    roots = [Root(0.0, k0, False)] if k0 else []
    roots += [Root(v, m, False) for v, m in clusters]
    return RootList(tuple(roots), "companion-numeric")


# -- bifurcation point -------------------------------------------------------------


def t_star(g: SignedGraph, method: str = "polynomial", rtol: float = 1e-8) -> BifurcationPoint:
    """Supremum of the ``t >= 0`` at which ``L(G(t))`` has no positive eigenvalue.

    ``"polynomial"`` takes the smallest positive root of the crossing
    polynomial (exact when the graph is); ``"bisection"`` brackets by doubling
    from ``t = 1`` and bisects the instability predicate to ``rtol``.
    """
    require_connected(g)
    zero = Fraction(0) if g.exact else 0.0
    if not is_connected(subgraph_positive(g)):
        return BifurcationPoint(zero, "topological")
    if not g.negative_edge_ids():
        return BifurcationPoint(math.inf, "topological")
    if method == "polynomial":
        roots = polynomial_roots(crossing_polynomial(g))
        pos = roots.positive()
        if not pos:
            raise ConvergenceFailure("connected G+ with negative edges must have a positive root")
        return BifurcationPoint(pos[0].value, roots.method)
    if method == "bisection":
        return BifurcationPoint(t_star_bisection(g, rtol), "bisection")
    raise ValueError(f"unknown method {method!r}")


def t_star_bisection(g: SignedGraph, rtol: float = 1e-8, max_doublings: int = 200) -> float:
    from .spectral import unstable

    lo, hi = 0.0, 1.0
    doublings = 0
    while not unstable(g, hi):
        lo, hi = hi, 2 * hi
        doublings += 1
        if doublings > max_doublings:
            raise ConvergenceFailure("no instability found while doubling t")
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if unstable(g, mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def one_edge_t_star(g: SignedGraph):
    """``M(G+) / (|w_e| M(G.e))`` for a single negative edge ``e`` and connected ``G+``."""
    neg = g.negative_edge_ids()
    if len(neg) != 1:
        raise PreconditionViolated(f"expected one negative edge, found {len(neg)}")
    gp = subgraph_positive(g)
    if not is_connected(gp):
        raise PreconditionViolated("positive subgraph is disconnected")
    e = neg[0]
    contracted, _ = contract_edge(g, e)
    return reduced_determinant(gp) / (abs(g.edges[e][2]) * reduced_determinant(contracted))


def root_count_bound(g: SignedGraph) -> int:
    return flexibility(g).tau
