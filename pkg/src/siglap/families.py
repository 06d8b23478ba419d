"""Named graph families and small worked examples used by tests and the CLI."""

from __future__ import annotations

from fractions import Fraction

from .graph import SignedGraph


def ring(n: int, flipped: int = 0) -> SignedGraph:
    """Cycle ``R_n`` with unit weights; the first ``flipped`` edges are set to -1."""
    edges = [(i, (i + 1) % n, -1 if i < flipped else 1) for i in range(n)]
    return SignedGraph(n, edges)


def path(n: int) -> SignedGraph:
    return SignedGraph(n, [(i, i + 1, 1) for i in range(n - 1)])


def complete(n: int, negative: int = 0) -> SignedGraph:
    """``K_n`` with unit weights; the first ``negative`` edges (lexicographic) are -1."""
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            edges.append((u, v, -1 if len(edges) < negative else 1))
    return SignedGraph(n, edges)


def complete_minus_edge(n: int) -> SignedGraph:
    """``K_n`` with the edge (0, 1) removed."""
    return SignedGraph(n, [(u, v, 1) for u in range(n) for v in range(u + 1, n) if (u, v) != (0, 1)])


def alternating_cycle(n: int) -> SignedGraph:
    if n % 2:
        raise ValueError("alternating cycle needs an even length")
    return SignedGraph(n, [(i, (i + 1) % n, 1 if i % 2 == 0 else -1) for i in range(n)])


def deletion_contraction_example() -> SignedGraph:
    """Four-vertex graph whose single negative edge (id 4, weight -5) splits the tree sum.

    Trees avoiding the edge weigh 8, 12, 24; trees through it weigh
    -10, -15, -20, -30, -40, so ``M(G(t)) = 44 - 115 t``.
    """
    return SignedGraph(
        4,
        [(0, 1, 3), (1, 2, 1), (0, 2, 2), (0, 3, 4), (1, 3, -5)],
    )


def asymptotics_example() -> SignedGraph:
    """Nine vertices: five +1 edges, seven -1 edges.

    The negative part has components A = {0,1,2} (a path), B = {3,4} and
    C = {5,6,7,8} (a 4-cycle); two positive edges join A-B, two join B-C and
    one joins A-C.  ``tau = 3`` with crossing polynomial coefficients
    ``(19, 78, 92, 32)`` at ``k = 3..6``.
    """
    negative = [(0, 1), (1, 2), (3, 4), (5, 6), (6, 7), (7, 8), (5, 8)]
    positive = [(0, 3), (1, 4), (3, 5), (4, 7), (2, 6)]
    return SignedGraph(9, [(u, v, 1) for u, v in positive] + [(u, v, -1) for u, v in negative])


def bowtie_example() -> SignedGraph:
    """Two triangles sharing vertex 2 (0-based), one negative edge in each."""
    return SignedGraph(5, [(0, 2, 1), (0, 1, -1), (1, 2, 1), (2, 4, 1), (3, 4, -1), (2, 3, 1)])


def wheel_fragment_example() -> SignedGraph:
    """Four-cycle 0-1-2-3 of positive edges with the negative chord (1, 3)."""
    return SignedGraph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1), (1, 3, -1)])


def fractional_example() -> SignedGraph:
    return SignedGraph(3, [(0, 1, Fraction(1, 3)), (1, 2, Fraction(-2, 5)), (0, 2, 2)])
