import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_connected, signed_rational, unit_sign
from siglap import SignedGraph, families
from siglap.errors import PreconditionViolated, TooLarge
from siglap.graph import contract_edge, delete_edge, flexibility
from siglap.treepoly import (
    CrossingPolynomial,
    crossing_polynomial,
    crossing_polynomial_oracle,
    enumerate_spanning_trees,
    one_edge_t_star,
    polynomial_roots,
    reduced_determinant,
    t_star,
    t_star_bisection,
    tree_constant,
    two_edge_polynomial,
)


def test_tree_weights_split_on_the_negative_edge():
    g = families.deletion_contraction_example()
    trees = list(enumerate_spanning_trees(g))
    off = sorted(t.weight for t in trees if 4 not in t.edge_ids)
    on = sorted(abs(t.weight) for t in trees if 4 in t.edge_ids)
    assert off == [8, 12, 24]
    assert on == [10, 15, 20, 30, 40]
    assert str(crossing_polynomial(g)) == "44 - 115t"


def test_deletion_contraction_identity_is_exact():
    g = families.deletion_contraction_example()
    for e in range(g.n_edges):
        contracted, _ = contract_edge(g, e)
        lhs = tree_constant(g)
        rhs = tree_constant(delete_edge(g, e), allow_disconnected=True) + g.edges[e][2] * tree_constant(contracted)
        assert lhs == rhs


def test_reference_coefficients_and_support():
    g = families.asymptotics_example()
    p = crossing_polynomial(g)
    assert p.coeffs == (0, 0, 0, 19, 78, 92, 32)
    flex = flexibility(g)
    assert (p.k_min, p.k_max) == (flex.c_plus - 1, g.n_vertices - flex.c_minus)
    assert p.log_concave()
    # a printed variant of these coefficients carries an extra factor N = 9
    assert [9 * c for c in p.coeffs[3:]] == [171, 702, 828, 288]


def test_reference_roots_three_ways():
    g = families.asymptotics_example()
    p = crossing_polynomial(g)
    exact = polynomial_roots(p)
    assert exact.method == "sturm-exact"
    pos = [float(r.value) for r in exact.positive()]
    assert np.allclose(pos, [0.42564300820, 0.90081263405, 1.54854435774], rtol=1e-10)
    assert sum(r.multiplicity for r in exact.roots if r.value == 0) == 3
    numeric = polynomial_roots(crossing_polynomial(g.as_float()), graph=g.as_float())
    assert numeric.method == "gsep-numeric"
    assert np.allclose(sorted(v for v in numeric.values() if v > 0), pos, rtol=1e-9)


def test_methods_agree_including_interpolation():
    rng = random.Random(11)
    for _ in range(30):
        g = random_connected(rng, rng.randint(3, 7), 0.6, signed_rational)
        dc = crossing_polynomial(g, method="dc")
        assert crossing_polynomial(g, method="interpolate") == dc
        assert crossing_polynomial_oracle(g) == dc


def test_enumeration_refuses_large_graphs():
    with pytest.raises(TooLarge):
        list(enumerate_spanning_trees(families.ring(20)))


def test_float_weights_follow_determinant():
    g = SignedGraph(3, [(0, 1, 0.5), (1, 2, -0.25), (0, 2, 2.0)])
    p = crossing_polynomial(g)
    assert not p.exact
    assert math.isclose(p(1.0), reduced_determinant(g), rel_tol=1e-12)


def test_t_star_topological_cases():
    g = SignedGraph(3, [(0, 1, 1), (1, 2, -1)])
    assert t_star(g).t_star == 0
    assert t_star(families.path(4)).t_star == math.inf
    assert str(t_star(families.ring(5, flipped=1))) == "1/4"


@pytest.mark.parametrize("n", range(3, 9))
def test_ring_and_complete_closed_forms(n):
    assert t_star(families.ring(n, 1)).t_star == Fraction(1, n - 1)
    assert t_star(families.complete(n, 1)).t_star == Fraction(n - 2, 2)
    assert one_edge_t_star(families.ring(n, 1)) == Fraction(1, n - 1)


def test_bisection_agrees_with_polynomial():
    rng = random.Random(5)
    for _ in range(20):
        g = random_connected(rng, 8, 0.5, signed_rational)
        exact = t_star(g)
        if not exact.finite or exact.t_star == 0:
            continue
        assert math.isclose(t_star_bisection(g), float(exact.t_star), rel_tol=1e-7)


def test_two_edge_closed_form():
    g = SignedGraph(5, [(0, 1, -2), (1, 2, 1), (2, 3, -3), (3, 4, 1), (4, 0, 1), (0, 2, 1), (1, 3, 5)])
    assert two_edge_polynomial(g, 0, 2) == crossing_polynomial(g)
    with pytest.raises(PreconditionViolated):
        two_edge_polynomial(families.ring(5, 2), 0, 1)


def test_polynomial_evaluation_sign_convention():
    p = CrossingPolynomial((Fraction(44), Fraction(115)))
    assert p(Fraction(44, 115)) == 0
    assert p.standard() == [44, -115]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_root_count_bounded_by_flexibility(seed):
    rng = random.Random(seed)
    g = random_connected(rng, rng.randint(3, 7), 0.6, unit_sign)
    p = crossing_polynomial(g)
    flex = flexibility(g)
    if p.is_zero():
        return
    roots = polynomial_roots(p)
    assert roots.positive_count() <= flex.tau
    assert all(c >= 0 for c in p.coeffs)
    assert p.log_concave()


def test_roots_of_printed_polynomial():
    p = CrossingPolynomial.from_standard([0, 0, 0, 171, -702, 828, -288])
    roots = polynomial_roots(p)
    assert [round(float(r.value), 2) for r in roots.positive()] == [0.43, 0.90, 1.55]
    assert [r.multiplicity for r in roots.roots if r.value == 0] == [3]
