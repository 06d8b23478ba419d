"""Graph generators shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from siglap import SignedGraph, is_connected

ATLAS_CAP = 10_000
# sign vectors per atlas graph once 2^E exceeds it
PER_GRAPH = 80


def random_connected(rng: random.Random, n: int, p: float, weight) -> SignedGraph:
    """Rejection-sample a connected graph with edge weights from ``weight(rng)``."""
    while True:
        edges = [(u, v, weight(rng)) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
        g = SignedGraph(n, edges)
        if is_connected(g):
            return g


def signed_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 9), rng.randint(1, 6)) * rng.choice((1, -1))


def unit_sign(rng: random.Random) -> int:
    return rng.choice((1, -1))


def reweight(g: SignedGraph, rng: random.Random) -> SignedGraph:
    """Same topology and signs, fresh positive rational magnitudes."""
    return SignedGraph(
        g.n_vertices,
        [(u, v, Fraction(rng.randint(1, 20), rng.randint(1, 7)) * (1 if w > 0 else -1)) for u, v, w in g.edges],
    )


@lru_cache(maxsize=None)
def atlas_corpus(cap: int = ATLAS_CAP, per_graph: int = PER_GRAPH) -> tuple[SignedGraph, ...]:
    """Connected atlas graphs on 2..6 vertices under +-1 sign assignments.

    Small graphs get every sign vector; larger ones a seeded sample of
    ``per_graph`` distinct vectors, always including all-positive and
    all-negative.  The result is truncated to ``cap`` cases.
    """
    import networkx as nx
    from networkx.generators.atlas import graph_atlas_g

    rng = random.Random(20240601)
    out = []
    for h in graph_atlas_g():
        n = h.number_of_nodes()
        if not 2 <= n <= 6 or not nx.is_connected(h):
            continue
        edges = sorted(h.edges())
        m = len(edges)
        if 2**m <= per_graph:
            masks = range(2**m)
        else:
            chosen = {0, 2**m - 1}
            while len(chosen) < per_graph:
                chosen.add(rng.randrange(2**m))
            masks = sorted(chosen)
        for mask in masks:
            out.append(SignedGraph(n, [(u, v, -1 if (mask >> i) & 1 else 1) for i, (u, v) in enumerate(edges)]))
    return tuple(out[:cap])


@lru_cache(maxsize=None)
def rational_corpus(count: int = 1000, seed: int = 7) -> tuple[SignedGraph, ...]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, 7)
        out.append(random_connected(rng, n, rng.uniform(0.35, 0.75), signed_rational))
    return tuple(out)
