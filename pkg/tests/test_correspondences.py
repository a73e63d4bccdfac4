from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from ellmot import linalg
from ellmot.cohomology import realization_matrix
from ellmot.correspondences import (
    CorrespondenceCycle, ImproperComposition, LinearSubtorus, brute_force_count, compose, divisor,
    external_product, from_cycle, graph, identity, intersection_number, parse_graphs,
)
from ellmot.cycles import LinearCycle, diagonal, permutation_graph

DELTA = divisor(2, {1: 1, 2: -1})
DELTA_MINUS = divisor(2, {1: 1, 2: 1})


def test_intersection_numbers():
    assert intersection_number([DELTA, DELTA_MINUS]) == 4
    assert intersection_number([DELTA, DELTA]) == 0
    assert intersection_number([divisor(2, {1: 1}), divisor(2, {2: 1})]) == 1


def test_intersection_number_dimension_check():
    with pytest.raises(Exception):
        intersection_number([DELTA])


def test_eight_point_pairing():
    combo = {DELTA: 1, DELTA_MINUS: -1}
    assert intersection_number([combo, combo]) == -8
    assert Fraction(-1, 8) * intersection_number([combo, combo]) == 1


def test_alpha_beta_is_one_by_composition():
    cyc = {DELTA: 1, DELTA_MINUS: -1}
    alpha = CorrespondenceCycle(2, 0, cyc) * Fraction(1, 2)
    beta = CorrespondenceCycle(0, 2, cyc) * Fraction(-1, 4)
    ab = compose(beta, alpha)
    assert ab == CorrespondenceCycle(0, 0, {LinearSubtorus.of(0, []): 1})


def test_strict_composition_rejects_excess():
    a = CorrespondenceCycle(0, 2, {DELTA: 1})
    b = CorrespondenceCycle(2, 0, {DELTA: 1})
    with pytest.raises(ImproperComposition):
        compose(a, b, strict=True)
    assert not compose(a, b)


def test_graph_compositions():
    assert compose(identity(1), identity(1)) == identity(1)
    neg = graph([[-1]])
    assert compose(neg, neg) == identity(1)
    double = graph([[2]])
    assert compose(double, double) == graph([[4]])


def test_transposed_multiplication_graph_counts_degree():
    # Γ_2 composed with its transpose: pairs (x, z) with 2x = 2z, four components
    g = graph([[2]])
    back = compose(g, g.transpose())
    assert back == CorrespondenceCycle(1, 1, {LinearSubtorus.of(2, [[1, -1]]): 4})


def test_point_labels_make_disjoint_faces_empty():
    at_a = CorrespondenceCycle(0, 1, {divisor(1, {1: 1}, {"a": 1}): 1})
    at_b = CorrespondenceCycle(1, 0, {divisor(1, {1: 1}, {"b": 1}): 1})
    at_a_dual = CorrespondenceCycle(1, 0, {divisor(1, {1: 1}, {"a": 1}): 1})
    assert not compose(at_a, at_b)
    assert compose(at_a, at_a_dual) == CorrespondenceCycle(0, 0)  # excess: a point meeting itself in E
    with pytest.raises(ImproperComposition):
        compose(at_a, at_a_dual, strict=True)


def test_translation_labels_propagate():
    shift = graph([[1]], offset=[{"a": 1}])  # y = x + a
    twice = compose(shift, shift)
    assert twice == graph([[1]], offset=[{"a": 2}])


@st.composite
def small_rows(draw):
    m = draw(st.integers(1, 3))
    return [draw(st.lists(st.integers(-2, 2), min_size=m, max_size=m)) for _ in range(m)]


@settings(max_examples=60, deadline=None)
@given(small_rows())
def test_point_count_matches_brute_force(rows):
    tori = []
    for r in rows:
        if not any(r):
            return
        tori.append(LinearSubtorus.of(len(rows), [r]))
    prim = [t.lattice()[0] for t in tori]
    assert intersection_number(tori) == brute_force_count(prim)


@settings(max_examples=40, deadline=None)
@given(small_rows(), st.permutations(range(3)))
def test_intersection_number_is_symmetric(rows, perm):
    if not all(any(r) for r in rows):
        return
    tori = [LinearSubtorus.of(len(rows), [r]) for r in rows]
    shuffled = [tori[p] for p in perm if p < len(tori)]
    assert intersection_number(tori) == intersection_number(shuffled)


def test_intersection_number_is_multilinear():
    x, y = divisor(2, {1: 1}), divisor(2, {2: 1})
    combo = {DELTA: 2, x: -3}
    assert intersection_number([combo, y]) == 2 * intersection_number([DELTA, y]) - 3 * intersection_number([x, y])


def lc_pool(n):
    from ellmot.rewriting import lz3_monomials
    return lz3_monomials(n)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 2).flatmap(lambda n: st.tuples(st.just(n), st.sampled_from(lc_pool(n)))))
def test_from_cycle_agrees_with_oracle(args):
    n, mono = args
    z = LinearCycle(2 * n, {mono: 1})
    assert from_cycle(z, n).realization() == realization_matrix(z, n)


def random_correspondence(draw, s, t):
    terms = {}
    for _ in range(draw(st.integers(1, 2))):
        k = draw(st.integers(0, min(s + t, 3)))
        eqs = [draw(st.lists(st.integers(-1, 1), min_size=s + t, max_size=s + t)) for _ in range(k)]
        if eqs and linalg.rank(eqs) < len(eqs):
            continue
        torus = LinearSubtorus.of(s + t, eqs)
        terms[torus] = terms.get(torus, 0) + draw(st.integers(-2, 2))
    return CorrespondenceCycle(s, t, terms)


@st.composite
def composable_pairs(draw):
    m1, m2, m3 = (draw(st.integers(0, 2)) for _ in range(3))
    return random_correspondence(draw, m1, m2), random_correspondence(draw, m2, m3)


@settings(max_examples=150, deadline=None)
@given(composable_pairs())
def test_compose_agrees_with_realization(pair):
    a, b = pair
    assert compose(a, b).realization() == b.realization() @ a.realization()


def test_permutation_graph_composition_matches_oracle():
    for s in permutations((1, 2)):
        for t in permutations((1, 2)):
            a = from_cycle(permutation_graph(s), 2)
            b = from_cycle(permutation_graph(t), 2)
            assert compose(a, b).realization() == b.realization() @ a.realization()


def test_external_product_of_graphs():
    g = external_product(graph([[-1]]), identity(1))
    assert g == graph([[-1, 0], [0, 1]])


def test_parse_graphs():
    c = parse_graphs("1/2*graph(1) - 1/2*graph(-1)")
    eps = (diagonal(1, 2, 2) - diagonal(1, 2, 2, minus=True)) * Fraction(1, 2)
    assert c.realization() == realization_matrix(eps, 1)
    assert parse_graphs("graph(1,0;0,1)") == identity(2)
