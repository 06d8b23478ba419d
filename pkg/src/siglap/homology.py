"""Mixed cycles, the boundary map and the fixed/free vertex-space splitting.

Cycles are walked as sequences of directed steps.  The boundary map records,
at every vertex the walk passes through, whether it arrives on a negative
edge and leaves on a positive one (+1) or the reverse (-1).  Its image over
a cycle basis spans the "free" subspace; component indicators of ``G+`` and
``G-`` span the orthogonal "fixed" subspace.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvalidCycle
from .graph import (
    SignedGraph,
    components,
    flexibility,
    require_connected,
    subgraph_negative,
    subgraph_positive,
)
from .spectral import IndexTriple, default_zero_tolerance, inertia, laplacian_array

BLOCK_TOL = 1e-10


class Step(NamedTuple):
    tail: int
    head: int
    edge: int
    sign: int  # sign of the edge weight


@dataclass(frozen=True)
class OrientedCycle:
    steps: tuple[Step, ...]

    def vertices(self) -> list[int]:
        return [s.tail for s in self.steps]

    def is_closed(self) -> bool:
        return bool(self.steps) and all(
            a.head == b.tail for a, b in zip(self.steps, self.steps[1:] + self.steps[:1])
        )


def cycle_from_vertices(g: SignedGraph, walk: Sequence[int]) -> OrientedCycle:
    """Closed walk through ``walk[0] -> walk[1] -> ... -> walk[0]``.

    Each step uses the first edge joining the two vertices; pass explicit
    :class:`Step` tuples to :class:`OrientedCycle` to choose among parallels.
    """
    lookup: dict[tuple[int, int], int] = {}
    for i, (u, v, _) in enumerate(g.edges):
        lookup.setdefault((u, v), i)
    steps = []
    for a, b in zip(walk, list(walk[1:]) + [walk[0]]):
        key = (min(a, b), max(a, b))
        if key not in lookup:
            raise InvalidCycle(f"no edge between {a} and {b}")
        idx = lookup[key]
        steps.append(Step(a, b, idx, 1 if g.edges[idx][2] > 0 else -1))
    return OrientedCycle(tuple(steps))


def _validate(g: SignedGraph, c: OrientedCycle) -> None:
    if not c.steps:
        raise InvalidCycle("empty cycle")
    for s in c.steps:
        if not 0 <= s.edge < g.n_edges:
            raise InvalidCycle(f"edge {s.edge} does not exist")
        u, v, w = g.edges[s.edge]
        if {s.tail, s.head} != {u, v}:
            raise InvalidCycle(f"step {s.tail}->{s.head} does not run along edge {s.edge}")
        if (w > 0) != (s.sign > 0):
            raise InvalidCycle(f"step on edge {s.edge} carries the wrong sign")
    if not c.is_closed():
        raise InvalidCycle("walk is not closed")


def boundary_map(g: SignedGraph, c: OrientedCycle) -> np.ndarray:
    """Integer vector: +1 per negative-in/positive-out passage, -1 for the reverse."""
    _validate(g, c)
    out = np.zeros(g.n_vertices, dtype=np.int64)
    steps = c.steps
    for prev, nxt in zip(steps[-1:] + steps[:-1], steps):
        if prev.sign < 0 < nxt.sign:
            out[nxt.tail] += 1
        elif prev.sign > 0 > nxt.sign:
            out[nxt.tail] -= 1
    return out


def fundamental_cycles(g: SignedGraph) -> list[OrientedCycle]:
    """One cycle per non-tree edge of a BFS spanning tree, in edge-id order.

    Each cycle runs along its non-tree edge ``u -> v`` and returns to ``u``
    through the tree.  Loops give one-step cycles.
    """
    require_connected(g)
    n = g.n_vertices
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, (u, v, _) in enumerate(g.edges):
        if u != v:
            adj[u].append((v, i))
            adj[v].append((u, i))
    parent = [-1] * n
    parent_edge = [-1] * n
    depth = [0] * n
    seen = [False] * n
    seen[0] = True
    tree_edges = set()
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y, i in adj[x]:
            if not seen[y]:
                seen[y] = True
                parent[y], parent_edge[y], depth[y] = x, i, depth[x] + 1
                tree_edges.add(i)
                queue.append(y)

    def sign(i):
        return 1 if g.edges[i][2] > 0 else -1

    cycles = []
    for i, (u, v, _) in enumerate(g.edges):
        if i in tree_edges:
            continue
        if u == v:
            cycles.append(OrientedCycle((Step(u, u, i, sign(i)),)))
            continue
        # tree path v -> ... -> u via the lowest common ancestor
        up_v, up_u = [], []
        a, b = v, u
        while depth[a] > depth[b]:
            up_v.append(a)
            a = parent[a]
        while depth[b] > depth[a]:
            up_u.append(b)
            b = parent[b]
        while a != b:
            up_v.append(a)
            up_u.append(b)
            a, b = parent[a], parent[b]
        steps = [Step(u, v, i, sign(i))]
        for x in up_v:
            steps.append(Step(x, parent[x], parent_edge[x], sign(parent_edge[x])))
        for x in reversed(up_u):
            steps.append(Step(parent[x], x, parent_edge[x], sign(parent_edge[x])))
        cycles.append(OrientedCycle(tuple(steps)))
    return cycles


def _row_reduce(rows: list[list[Fraction]]) -> tuple[list[int], int]:
    """Indices of a maximal independent subset (greedy, in order) and the rank."""
    basis: list[list[Fraction]] = []
    pivots: list[int] = []
    chosen = []
    for idx, row in enumerate(rows):
        r = list(row)
        for b, p in zip(basis, pivots):
            if r[p] != 0:
                f = r[p] / b[p]
                r = [x - f * y for x, y in zip(r, b)]
        piv = next((k for k, x in enumerate(r) if x != 0), None)
        if piv is not None:
            basis.append(r)
            pivots.append(piv)
            chosen.append(idx)
    return chosen, len(basis)


def exact_rank(vectors: Sequence[Sequence]) -> int:
    return _row_reduce([[Fraction(int(x)) for x in v] for v in vectors])[1]


@dataclass(frozen=True)
class MixedCycleBasis:
    vectors: tuple[np.ndarray, ...]
    cycles: tuple[OrientedCycle, ...]

    @property
    def dimension(self) -> int:
        return len(self.vectors)

    def matrix(self, n: int | None = None) -> np.ndarray:
        if not self.vectors:
            return np.zeros((0, n or 0), dtype=np.int64)
        return np.vstack(self.vectors)


def mixed_cycle_basis(g: SignedGraph) -> MixedCycleBasis:
    """Independent boundary images of the fundamental cycles (exact rank)."""
    cycles = fundamental_cycles(g)
    images = [boundary_map(g, c) for c in cycles]
    chosen, _ = _row_reduce([[Fraction(int(x)) for x in v] for v in images])
    return MixedCycleBasis(tuple(images[i] for i in chosen), tuple(cycles[i] for i in chosen))


def _indicators(labels: np.ndarray, count: int) -> np.ndarray:
    out = np.zeros((count, labels.size), dtype=np.int64)
    out[labels, np.arange(labels.size)] = 1
    return out


def _mean_zero_combinations(ind: np.ndarray) -> np.ndarray:
    # |C_last| v_i - |C_i| v_last for each i < last: integer, mean zero, independent
    if ind.shape[0] < 2:
        return np.zeros((0, ind.shape[1]), dtype=np.int64)
    sizes = ind.sum(axis=1)
    last = ind[-1]
    return np.vstack([sizes[-1] * ind[i] - sizes[i] * last for i in range(ind.shape[0] - 1)])


@dataclass(frozen=True)
class FixedSubspace:
    plus_indicators: np.ndarray  # (c+, N)
    minus_indicators: np.ndarray  # (c-, N)
    basis: np.ndarray  # (c+ + c- - 1, N)
    s_plus: np.ndarray  # (c+ - 1, N)
    s_minus: np.ndarray  # (c- - 1, N)
    s_zero: np.ndarray  # (1, N)

    @property
    def dimension(self) -> int:
        return self.basis.shape[0]


def fixed_subspace(g: SignedGraph) -> FixedSubspace:
    require_connected(g)
    lp = components(subgraph_positive(g))
    lm = components(subgraph_negative(g))
    plus = _indicators(lp.labels, lp.n_components)
    minus = _indicators(lm.labels, lm.n_components)
    # the indicators of each sign sum to the all-ones vector, the only relation
    basis = np.vstack([plus, minus[:-1]])
    return FixedSubspace(
        plus_indicators=plus,
        minus_indicators=minus,
        basis=basis,
        s_plus=_mean_zero_combinations(plus),
        s_minus=_mean_zero_combinations(minus),
        s_zero=np.ones((1, g.n_vertices), dtype=np.int64),
    )


def _orthonormal_rows(m: np.ndarray) -> np.ndarray:
    if m.shape[0] == 0:
        return np.zeros((m.shape[1], 0))
    q, _ = np.linalg.qr(np.asarray(m, dtype=float).T)
    return q


@dataclass(frozen=True)
class ProjectedIndex:
    index: IndexTriple
    block_matrix: np.ndarray  # B^T L B in the (S+, S-, S0) basis
    max_cross_block: float  # largest normalized cross-block entry

    @property
    def as_tuple(self) -> tuple[int, int, int]:
        return self.index.as_tuple()


def projected_index_report(g: SignedGraph) -> ProjectedIndex:
    fs = fixed_subspace(g)
    lap = laplacian_array(g)
    norm = max(np.linalg.norm(lap, 2), 1.0)
    blocks = [fs.s_plus, fs.s_minus, fs.s_zero]
    b = np.vstack(blocks).astype(float).T
    b = b / np.linalg.norm(b, axis=0)
    m = b.T @ lap @ b
    sizes = [blk.shape[0] for blk in blocks]
    edges = np.cumsum([0] + sizes)
    cross = 0.0
    for i in range(3):
        for j in range(3):
            if i != j:
                sub = m[edges[i]:edges[i + 1], edges[j]:edges[j + 1]]
                if sub.size:
                    cross = max(cross, float(np.abs(sub).max()) / norm)
    if cross > BLOCK_TOL:
        raise AssertionError(f"fixed-subspace blocks are not L-orthogonal (max entry {cross:.2e})")
    q = _orthonormal_rows(fs.basis)
    proj = q.T @ lap @ q
    # tolerance follows the scale of L, not of the (possibly tiny) compression
    tol = default_zero_tolerance(lap)
    return ProjectedIndex(inertia(0.5 * (proj + proj.T), zero_tolerance=tol), m, cross)


def projected_index(g: SignedGraph) -> IndexTriple:
    """Inertia of ``L`` compressed to the fixed subspace.

    Always ``(c(G-) - 1, 1, c(G+) - 1)`` as ``(n_minus, n_zero, n_plus)``.
    """
    return projected_index_report(g).index


@dataclass(frozen=True)
class Decomposition:
    tau: int
    c_plus: int
    c_minus: int
    free: MixedCycleBasis
    fixed: FixedSubspace
    projected: IndexTriple
    orthogonal: bool

    @property
    def dim_free(self) -> int:
        return self.free.dimension

    @property
    def dim_fixed(self) -> int:
        return self.fixed.dimension


def decompose(g: SignedGraph) -> Decomposition:
    flex = flexibility(g)
    free = mixed_cycle_basis(g)
    fixed = fixed_subspace(g)
    cross = free.matrix(g.n_vertices) @ np.vstack([fixed.plus_indicators, fixed.minus_indicators]).T
    return Decomposition(
        tau=flex.tau,
        c_plus=flex.c_plus,
        c_minus=flex.c_minus,
        free=free,
        fixed=fixed,
        projected=projected_index(g),
        orthogonal=bool(np.all(cross == 0)),
    )
