"""Signed weighted (multi)graphs and their purely topological quantities.

A :class:`SignedGraph` stores an undirected edge multiset on the vertices
``0..n-1``.  Weights are either exact :class:`fractions.Fraction` values or
floats; the choice is made once at construction and propagates to every
derived graph (subgraphs, deletions, contractions, quotients).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DisconnectedGraph, LoopContraction, NoSuchEdge, ZeroWeight

# below this many edges the pure-python union-find beats the scipy call overhead
_SPARSE_EDGE_THRESHOLD = 20_000


def _coerce_weight(w, exact: bool):
    if exact:
        if isinstance(w, Fraction):
            return w
        if isinstance(w, str):
            return Fraction(w.strip())
        return Fraction(w)
    return float(w)


def _is_rational_like(w) -> bool:
    if isinstance(w, (Rational, Fraction)) and not isinstance(w, bool):
        return True
    if isinstance(w, str):
        try:
            Fraction(w.strip())
        except (ValueError, ZeroDivisionError):
            return False
        return True
    return False


class SignedGraph:
    """Immutable undirected signed multigraph.

    Edges are ``(u, v, weight)`` triples stored with ``u <= v``; the edge id
    is the position in :attr:`edges`.  ``exact=None`` selects exact rational
    weights when every weight is an int, a Fraction or a string that
    ``Fraction`` accepts, and floats otherwise.

    Zero weights raise :class:`ZeroWeight` unless ``drop_zero`` is set, in
    which case they are silently discarded.  Loops are rejected unless
    ``allow_loops`` is set (contraction produces them internally).
    """

    __slots__ = ("_n", "_edges", "_exact")

    def __init__(
        self,
        n_vertices: int,
        edges: Iterable[Sequence] = (),
        exact: bool | None = None,
        *,
        drop_zero: bool = False,
        allow_loops: bool = False,
    ):
        n = int(n_vertices)
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        raw = [tuple(e) for e in edges]
        if exact is None:
            exact = all(_is_rational_like(e[2]) for e in raw)
        normalized = []
        for idx, e in enumerate(raw):
            if len(e) != 3:
                raise ValueError(f"edge {idx} must be (u, v, weight), got {e!r}")
            u, v, w = int(e[0]), int(e[1]), _coerce_weight(e[2], exact)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {idx} ({u}, {v}) references a vertex outside 0..{n - 1}")
            if u == v and not allow_loops:
                raise ValueError(f"edge {idx} is a loop at vertex {u}")
            if w == 0:
                if drop_zero:
                    continue
                raise ZeroWeight(f"edge {idx} ({u}, {v}) has zero weight")
            if u > v:
                u, v = v, u
            normalized.append((u, v, w))
        self._n = n
        self._edges = tuple(normalized)
        self._exact = bool(exact)

    @classmethod
    def _trusted(cls, n: int, edges: tuple, exact: bool) -> "SignedGraph":
        # internal fast path: edges already normalized, nonzero, correctly typed
        g = object.__new__(cls)
        g._n = n
        g._edges = edges
        g._exact = exact
        return g

    @property
    def n_vertices(self) -> int:
        return self._n

    @property
    def edges(self) -> tuple:
        return self._edges

    @property
    def exact(self) -> bool:
        return self._exact

    @property
    def n_edges(self) -> int:
        return len(self._edges)

    def weights(self) -> list:
        return [w for _, _, w in self._edges]

    def has_loops(self) -> bool:
        return any(u == v for u, v, _ in self._edges)

    def is_simple(self) -> bool:
        pairs = [(u, v) for u, v, _ in self._edges]
        return not self.has_loops() and len(set(pairs)) == len(pairs)

    def negative_edge_ids(self) -> list[int]:
        return [i for i, (_, _, w) in enumerate(self._edges) if w < 0]

    def positive_edge_ids(self) -> list[int]:
        return [i for i, (_, _, w) in enumerate(self._edges) if w > 0]

    def canonical_key(self) -> tuple:
        """Hashable key of the edge multiset (edge order is ignored)."""
        return (self._n, tuple(sorted(self._edges)))

    def as_float(self) -> "SignedGraph":
        if not self._exact:
            return self
        return SignedGraph._trusted(
            self._n, tuple((u, v, float(w)) for u, v, w in self._edges), False
        )

    def as_exact(self) -> "SignedGraph":
        if self._exact:
            return self
        return SignedGraph._trusted(
            self._n, tuple((u, v, Fraction(w)) for u, v, w in self._edges), True
        )

    def adjacency(self) -> np.ndarray:
        """Dense symmetric weight matrix (parallel edges summed, loops ignored)."""
        a = np.zeros((self._n, self._n))
        for u, v, w in self._edges:
            if u != v:
                a[u, v] += float(w)
                a[v, u] += float(w)
        return a

    def __eq__(self, other):
        if not isinstance(other, SignedGraph):
            return NotImplemented
        return (self._n, self._edges, self._exact) == (other._n, other._edges, other._exact)

    def __hash__(self):
        return hash((self._n, self._edges, self._exact))

    def __repr__(self):
        mode = "exact" if self._exact else "float"
        return f"SignedGraph(n_vertices={self._n}, n_edges={len(self._edges)}, {mode})"


class ComponentLabeling(NamedTuple):
    labels: np.ndarray
    n_components: int

    def sizes(self) -> list[int]:
        return np.bincount(self.labels, minlength=self.n_components).tolist()

    def members(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_components)]
        for v, c in enumerate(self.labels.tolist()):
            out[c].append(v)
        return out


@dataclass(frozen=True)
class Flexibility:
    tau: int
    c_plus: int
    c_minus: int
    n: int

    @property
    def rigid(self) -> bool:
        return self.tau == 0


class DisjointSet:
    """Union-find with path halving and union by size."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size
        self.n_sets = size

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.n_sets -= 1
        return True


def _relabel_first_seen(raw: np.ndarray) -> tuple[np.ndarray, int]:
    # component ids ordered by their smallest vertex
    _, first, inverse = np.unique(raw, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first))
    labels = order[inverse].astype(np.int64)
    return labels, len(first)


def components(g: SignedGraph) -> ComponentLabeling:
    """Connected components; ids are numbered by smallest member vertex."""
    n = g.n_vertices
    if n == 0:
        return ComponentLabeling(np.zeros(0, dtype=np.int64), 0)
    if g.n_edges >= _SPARSE_EDGE_THRESHOLD:
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import connected_components

        e = np.asarray([(u, v) for u, v, _ in g.edges], dtype=np.int64).reshape(-1, 2)
        m = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
        _, raw = connected_components(m, directed=False)
    else:
        ds = DisjointSet(n)
        for u, v, _ in g.edges:
            ds.union(u, v)
        raw = np.fromiter((ds.find(v) for v in range(n)), dtype=np.int64, count=n)
    labels, count = _relabel_first_seen(np.asarray(raw))
    return ComponentLabeling(labels, count)


def count_components(g: SignedGraph) -> int:
    return components(g).n_components


def is_connected(g: SignedGraph) -> bool:
    return g.n_vertices > 0 and count_components(g) == 1


def require_connected(g: SignedGraph) -> None:
    if not is_connected(g):
        raise DisconnectedGraph(
            f"graph with {g.n_vertices} vertices has {count_components(g)} components"
        )


def _filter(g: SignedGraph, keep) -> SignedGraph:
    return SignedGraph._trusted(
        g.n_vertices, tuple(e for e in g.edges if keep(e[2])), g.exact
    )


def subgraph_positive(g: SignedGraph) -> SignedGraph:
    """Same vertex set, positive edges only."""
    return _filter(g, lambda w: w > 0)


def subgraph_negative(g: SignedGraph) -> SignedGraph:
    """Same vertex set, negative edges only (weights keep their sign)."""
    return _filter(g, lambda w: w < 0)


def flexibility(g: SignedGraph) -> Flexibility:
    """``tau = N - c(G-) - c(G+) + 1`` for a connected graph."""
    require_connected(g)
    n = g.n_vertices
    c_plus = count_components(subgraph_positive(g))
    c_minus = count_components(subgraph_negative(g))
    return Flexibility(tau=n - c_minus - c_plus + 1, c_plus=c_plus, c_minus=c_minus, n=n)


def _check_edge(g: SignedGraph, e: int) -> None:
    if not isinstance(e, (int, np.integer)) or not 0 <= e < g.n_edges:
        raise NoSuchEdge(f"edge id {e!r} not in 0..{g.n_edges - 1}")


def delete_edge(g: SignedGraph, e: int) -> SignedGraph:
    _check_edge(g, e)
    return SignedGraph._trusted(g.n_vertices, g.edges[:e] + g.edges[e + 1:], g.exact)


def contract_edge(g: SignedGraph, e: int) -> tuple[SignedGraph, list[int]]:
    """Identify the endpoints of edge ``e``.

    Parallel edges and loops created by the identification are kept.  Returns
    the contracted graph and the old-vertex -> new-vertex map; the merged
    vertex takes the id of the smaller endpoint's slot.
    """
    _check_edge(g, e)
    a, b, _ = g.edges[e]
    if a == b:
        raise LoopContraction(f"edge {e} is a loop at vertex {a}")
    mapping = [v - (v > b) for v in range(g.n_vertices)]
    mapping[b] = mapping[a]
    new_edges = []
    for i, (u, v, w) in enumerate(g.edges):
        if i == e:
            continue
        nu, nv = mapping[u], mapping[v]
        if nu > nv:
            nu, nv = nv, nu
        new_edges.append((nu, nv, w))
    return SignedGraph._trusted(g.n_vertices - 1, tuple(new_edges), g.exact), mapping


class Quotient(NamedTuple):
    graph: SignedGraph
    vertex_weights: list[int]


def contract_subgraph(g: SignedGraph, sign: str) -> Quotient:
    """Collapse every component of ``G+`` (``sign='+'``) or ``G-`` (``'-'``).

    Edges joining two different components are summed into one quotient edge;
    edges inside a component vanish.  ``vertex_weights[i]`` is the number of
    original vertices in component ``i``.
    """
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    require_connected(g)
    part = subgraph_positive(g) if sign == "+" else subgraph_negative(g)
    lab = components(part)
    labels = lab.labels.tolist()
    summed: dict[tuple[int, int], object] = {}
    for u, v, w in g.edges:
        a, b = labels[u], labels[v]
        if a == b:
            continue
        if a > b:
            a, b = b, a
        summed[(a, b)] = summed.get((a, b), 0) + w
    edges = tuple((a, b, w) for (a, b), w in sorted(summed.items()) if w != 0)
    quotient = SignedGraph._trusted(lab.n_components, edges, g.exact)
    return Quotient(quotient, lab.sizes())


def relabel(g: SignedGraph, perm: Sequence[int]) -> SignedGraph:
    """Apply the vertex permutation ``v -> perm[v]``."""
    edges = []
    for u, v, w in g.edges:
        a, b = perm[u], perm[v]
        edges.append((min(a, b), max(a, b), w))
    return SignedGraph._trusted(g.n_vertices, tuple(edges), g.exact)
