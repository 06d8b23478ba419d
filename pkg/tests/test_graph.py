import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from siglap import SignedGraph, families
from siglap.errors import DisconnectedGraph, LoopContraction, NoSuchEdge, ZeroWeight
from siglap.graph import (
    DisjointSet,
    components,
    contract_edge,
    contract_subgraph,
    count_components,
    delete_edge,
    flexibility,
    relabel,
    subgraph_negative,
    subgraph_positive,
)


def test_edges_normalized_and_exact_autodetected():
    g = SignedGraph(3, [(2, 0, 1), (1, 2, "-1/3")])
    assert g.edges == ((0, 2, Fraction(1)), (1, 2, Fraction(-1, 3)))
    assert g.exact
    h = SignedGraph(3, [(0, 1, 0.5), (1, 2, -1)])
    assert not h.exact
    assert isinstance(h.edges[1][2], float)


def test_zero_weight_and_loops_rejected():
    with pytest.raises(ZeroWeight):
        SignedGraph(2, [(0, 1, 0)])
    assert SignedGraph(2, [(0, 1, 0), (0, 1, 1)], drop_zero=True).n_edges == 1
    with pytest.raises(ValueError):
        SignedGraph(2, [(1, 1, 1)])
    with pytest.raises(ValueError):
        SignedGraph(2, [(0, 2, 1)])


def test_sign_subgraphs_keep_vertex_set():
    g = families.asymptotics_example()
    assert subgraph_positive(g).n_vertices == 9
    assert subgraph_negative(g).n_edges == 7
    assert count_components(subgraph_positive(g)) == 4
    assert count_components(subgraph_negative(g)) == 3


def test_flexibility_of_reference_graph():
    f = flexibility(families.asymptotics_example())
    assert (f.tau, f.c_plus, f.c_minus) == (3, 4, 3)
    assert not f.rigid
    assert flexibility(families.path(5)).rigid


def test_flexibility_needs_connected():
    with pytest.raises(DisconnectedGraph):
        flexibility(SignedGraph(3, [(0, 1, 1)]))


def test_components_numbered_by_smallest_vertex():
    lab = components(SignedGraph(5, [(3, 4, 1), (0, 2, -1)]))
    assert lab.labels.tolist() == [0, 1, 0, 2, 2]
    assert lab.sizes() == [2, 1, 2]


def test_large_component_path_matches_union_find():
    rng = np.random.default_rng(3)
    n = 30000
    u = rng.integers(0, n, 25000)
    v = rng.integers(0, n, 25000)
    edges = [(int(a), int(b), 1) for a, b in zip(u, v) if a != b]
    g = SignedGraph(n, edges)
    ds = DisjointSet(n)
    for a, b, _ in edges:
        ds.union(a, b)
    assert count_components(g) == len({ds.find(x) for x in range(n)})


def test_delete_and_contract_keep_multiedges():
    g = SignedGraph(3, [(0, 1, 1), (1, 2, -2), (0, 2, 3)])
    h, mapping = contract_edge(g, 0)
    assert h.n_vertices == 2
    assert mapping == [0, 0, 1]
    assert sorted(h.edges) == [(0, 1, -2), (0, 1, 3)]
    h2, _ = contract_edge(h, 0)
    assert h2.edges == ((0, 0, 3),)
    with pytest.raises(LoopContraction):
        contract_edge(h2, 0)
    assert delete_edge(g, 1).edges == ((0, 1, 1), (0, 2, 3))
    with pytest.raises(NoSuchEdge):
        delete_edge(g, 5)


def test_contract_subgraph_sums_crossing_weights():
    q = contract_subgraph(families.asymptotics_example(), "-")
    assert q.vertex_weights == [3, 2, 4]
    assert sorted(q.graph.edges) == [(0, 1, 2), (0, 2, 1), (1, 2, 2)]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_flexibility_invariant_under_relabeling(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 8)
    edges = [(u, v, rng.choice((1, -1))) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.6]
    g = SignedGraph(n, edges)
    if count_components(g) != 1:
        return
    perm = list(range(n))
    rng.shuffle(perm)
    assert flexibility(relabel(g, perm)) == flexibility(g)
    assert 0 <= flexibility(g).tau <= n - 1
