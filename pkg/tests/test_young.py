from fractions import Fraction
from itertools import product
from math import factorial

import pytest
from hypothesis import given, strategies as st

from ellmot import linalg
from ellmot.cohomology import basis, gen_a, gen_b, realization_matrix
from ellmot.young import (
    GroupAlgebraElement, compose_perm, cycle_notation, element_cycle, epsilon, hook_length_count,
    is_standard, jucys_murphy, orthogonal_idempotents, partitions, schur_projector_cycle, shape_of,
    sign, standard_tableaux, tableaux_of_shape, young_symmetrizer,
)

perms = st.integers(1, 5).flatmap(lambda n: st.permutations(range(n)).map(tuple))


def test_tableau_counts():
    assert [len(standard_tableaux(n)) for n in range(2, 5)] == [2, 4, 10]
    for n in range(8):
        for shape in partitions(n):
            assert len(tableaux_of_shape(shape)) == hook_length_count(shape)
        assert sum(hook_length_count(s) ** 2 for s in partitions(n)) == factorial(n)


def test_tableaux_are_standard_and_distinct():
    for n in range(6):
        ts = standard_tableaux(n)
        assert len(set(ts)) == len(ts)
        assert all(is_standard(t) for t in ts)
    assert not is_standard(((2, 1),))
    assert not is_standard(((1, 2), (3, 4, 5)))


def test_two_letter_symmetrizers():
    swap = (1, 0)
    assert young_symmetrizer(((1, 2),)) == GroupAlgebraElement(2, {(0, 1): Fraction(1, 2), swap: Fraction(1, 2)})
    assert young_symmetrizer(((1,), (2,))) == GroupAlgebraElement(2, {(0, 1): Fraction(1, 2), swap: Fraction(-1, 2)})
    assert orthogonal_idempotents(2) == [young_symmetrizer(t) for t in standard_tableaux(2)]


@pytest.mark.parametrize("n", [3, 4])
def test_symmetrizers_are_idempotent(n):
    for t in standard_tableaux(n):
        e = young_symmetrizer(t)
        assert e * e == e


@pytest.mark.parametrize("n, complete", [(3, True), (4, True), (5, False)])
def test_classical_symmetrizers_stop_summing_to_one_at_five(n, complete):
    ys = [young_symmetrizer(t) for t in standard_tableaux(n)]
    total = GroupAlgebraElement(n)
    for y in ys:
        total = total + y
    assert (total == GroupAlgebraElement.one(n)) is complete
    overlaps = sum(1 for i, a in enumerate(ys) for j, b in enumerate(ys) if i != j and a * b)
    assert (overlaps == 0) is complete


@pytest.mark.parametrize("n", range(1, 6))
def test_orthogonal_family(n):
    es = orthogonal_idempotents(n)
    total = GroupAlgebraElement(n)
    for e in es:
        total = total + e
    assert total == GroupAlgebraElement.one(n)
    zero = GroupAlgebraElement(n)
    for i, a in enumerate(es):
        for j, b in enumerate(es):
            assert a * b == (a if i == j else zero)
    assert sum(e.left_ideal_dimension() for e in es) == factorial(n)


def test_left_ideal_dimensions_by_rank():
    for n in range(1, 5):
        for t, e in zip(standard_tableaux(n), orthogonal_idempotents(n)):
            assert e.left_ideal_rank() == e.left_ideal_dimension() == hook_length_count(shape_of(t))


def test_idempotent_lies_in_the_isotypic_block_of_its_symmetrizer():
    for n in range(2, 5):
        for t, e in zip(standard_tableaux(n), orthogonal_idempotents(n)):
            same = [young_symmetrizer(s) for s in standard_tableaux(n) if shape_of(s) == shape_of(t)]
            other = [young_symmetrizer(s) for s in standard_tableaux(n) if shape_of(s) != shape_of(t)]
            assert all(not (e * y) and not (y * e) for y in other)
            assert any(e * y for y in same)


def test_bound():
    with pytest.raises(ValueError):
        orthogonal_idempotents(7)


@given(perms, st.data())
def test_group_algebra_is_associative(p, data):
    n = len(p)
    q = data.draw(st.permutations(range(n)).map(tuple))
    r = data.draw(st.permutations(range(n)).map(tuple))
    a, b, c = (GroupAlgebraElement(n, {x: Fraction(k + 1, 2)}) for k, x in enumerate((p, q, r)))
    assert (a * b) * c == a * (b * c)
    assert sign(compose_perm(p, q)) == sign(p) * sign(q)


def test_jucys_murphy_elements_commute():
    xs = [jucys_murphy(4, k) for k in range(1, 5)]
    assert all(x * y == y * x for x in xs for y in xs)


def test_cycle_notation():
    assert cycle_notation((0, 1, 2)) == "e"
    assert cycle_notation((1, 2, 0)) == "(1 2 3)"
    assert str(young_symmetrizer(((1,), (2,)))) == "1/2*e - 1/2*(1 2)"


# --- realization of Schur projectors ---------------------------------------------

def h1_words(n):
    return [tuple(gen_a(i + 1) if x == 0 else gen_b(i + 1) for i, x in enumerate(ls)) for ls in product((0, 1), repeat=n)]


def plain_action(e: GroupAlgebraElement):
    """Matrix of e on (H¹)^⊗n where σ moves the i-th tensor factor to slot σ(i), no signs."""
    n = e.n
    words = list(product((0, 1), repeat=n))
    pos = {w: k for k, w in enumerate(words)}
    rows = [[Fraction(0)] * len(words) for _ in words]
    for p, c in e.terms.items():
        for w in words:
            image = [None] * n
            for i in range(n):
                image[p[i]] = w[i]
            rows[pos[tuple(image)]][pos[w]] += c
    return rows


def h1_block(r, n):
    idx = {w: k for k, w in enumerate(basis(n))}
    keep = [idx[w] for w in h1_words(n)]
    block = [[r.rows[i][j] for j in keep] for i in keep]
    outside = [r.rows[i][j] for i in range(len(r.rows)) for j in range(len(r.rows)) if i not in keep or j not in keep]
    return block, outside


def test_epsilon_cycle():
    z = schur_projector_cycle(((1,),))
    assert z == epsilon(1, 2, 2)
    block, outside = h1_block(realization_matrix(z, 1), 1)
    assert block == [[1, 0], [0, 1]] and not any(outside)


def test_exterior_square_is_a_line():
    r = realization_matrix(schur_projector_cycle(((1,), (2,))), 2)
    assert linalg.rank(r.rows) == 1


def test_exterior_cube_vanishes():
    assert realization_matrix(schur_projector_cycle(((1,), (2,), (3,))), 3).is_zero()


@pytest.mark.parametrize("n", [2, 3])
def test_realization_matches_plain_permutation_action(n):
    for t, e in zip(standard_tableaux(n), orthogonal_idempotents(n)):
        block, outside = h1_block(realization_matrix(schur_projector_cycle(t), n), n)
        assert block == plain_action(e) and not any(outside)


def test_projectors_sum_to_h1_identity():
    n = 2
    total = element_cycle(GroupAlgebraElement.one(n))
    acc = None
    for t in standard_tableaux(n):
        z = schur_projector_cycle(t)
        acc = z if acc is None else acc + z
    assert realization_matrix(acc, n) == realization_matrix(total, n)
