import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_connected, reweight, signed_rational, unit_sign
from siglap import families
from siglap.errors import InvalidCycle
from siglap.graph import flexibility
from siglap.homology import (
    OrientedCycle,
    Step,
    boundary_map,
    cycle_from_vertices,
    decompose,
    exact_rank,
    fixed_subspace,
    fundamental_cycles,
    mixed_cycle_basis,
    projected_index,
    projected_index_report,
)


def test_bowtie_boundary_vectors():
    g = families.bowtie_example()
    v1 = boundary_map(g, cycle_from_vertices(g, [2, 0, 1]))
    v2 = boundary_map(g, cycle_from_vertices(g, [2, 4, 3]))
    assert v1.tolist() == [-1, 1, 0, 0, 0]
    assert v2.tolist() == [0, 0, 0, 1, -1]
    basis = mixed_cycle_basis(g)
    assert basis.dimension == 2 == flexibility(g).tau
    assert exact_rank([v1, v2] + list(basis.vectors)) == 2


def test_single_mixed_class_on_chorded_square():
    g = families.wheel_fragment_example()
    a = boundary_map(g, cycle_from_vertices(g, [3, 1, 0]))
    b = boundary_map(g, cycle_from_vertices(g, [3, 2, 1]))
    outer = boundary_map(g, cycle_from_vertices(g, [3, 2, 1, 0]))
    assert a.tolist() == [0, 1, 0, -1]
    assert (a + b).tolist() == outer.tolist() == [0, 0, 0, 0]
    assert mixed_cycle_basis(g).dimension == 1


def test_reversal_negates_boundary():
    g = families.bowtie_example()
    fwd = boundary_map(g, cycle_from_vertices(g, [2, 0, 1]))
    back = boundary_map(g, cycle_from_vertices(g, [2, 1, 0]))
    assert (fwd + back == 0).all()


def test_invalid_cycles_rejected():
    g = families.bowtie_example()
    with pytest.raises(InvalidCycle):
        cycle_from_vertices(g, [0, 3, 4])
    with pytest.raises(InvalidCycle):
        boundary_map(g, OrientedCycle((Step(0, 2, 0, 1), Step(2, 1, 2, 1))))
    with pytest.raises(InvalidCycle):
        boundary_map(g, OrientedCycle((Step(0, 2, 0, -1), Step(2, 1, 2, 1), Step(1, 0, 1, -1))))


def test_fundamental_cycles_are_closed():
    g = families.asymptotics_example()
    cycles = fundamental_cycles(g)
    assert len(cycles) == g.n_edges - g.n_vertices + 1
    assert all(c.is_closed() for c in cycles)


def test_reference_decomposition():
    g = families.asymptotics_example()
    dec = decompose(g)
    assert (dec.dim_free, dec.dim_fixed) == (3, 6)
    assert dec.dim_free + dec.dim_fixed == g.n_vertices
    assert dec.orthogonal
    assert dec.projected.as_tuple() == (2, 1, 3)


def test_fixed_blocks_are_mean_zero():
    fs = fixed_subspace(families.asymptotics_example())
    assert fs.s_plus.shape == (3, 9) and fs.s_minus.shape == (2, 9)
    assert not fs.s_plus.sum(axis=1).any()
    assert not fs.s_minus.sum(axis=1).any()


def test_projected_index_block_structure():
    rep = projected_index_report(families.asymptotics_example())
    assert rep.max_cross_block <= 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_decomposition_properties(seed):
    rng = random.Random(seed)
    g = random_connected(rng, rng.randint(3, 8), 0.5, unit_sign)
    flex = flexibility(g)
    dec = decompose(g)
    assert dec.dim_free == flex.tau
    assert dec.orthogonal
    expected = (flex.c_minus - 1, 1, flex.c_plus - 1)
    assert dec.projected.as_tuple() == expected
    for _ in range(3):
        assert projected_index(reweight(g, rng)).as_tuple() == expected


def test_free_space_spans_orthocomplement():
    rng = random.Random(2)
    g = random_connected(rng, 9, 0.45, signed_rational)
    dec = decompose(g)
    full = np.vstack([dec.free.matrix(g.n_vertices), dec.fixed.basis]).astype(float)
    assert np.linalg.matrix_rank(full) == g.n_vertices
