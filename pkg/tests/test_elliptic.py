from fractions import Fraction

import pytest

from ellmot.correspondences import compose, graph, identity
from ellmot.cycles import WitnessCycle, Wjk
from ellmot.dg import DGComplex, MotiveTerm, check_dg, realize_complex, resolve
from ellmot.elliptic import (
    EllipticAlgebra, EllipticElement, check_standard_homotopy, projector, schur_pieces, standard_homotopy,
)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_standard_homotopy_bounds_one_minus_projector(k):
    assert check_standard_homotopy(k)


def test_standard_homotopy_small_cases():
    assert not standard_homotopy(0).terms
    assert standard_homotopy(1) == WitnessCycle.single(2, Wjk(1, 2), coeff=Fraction(-1, 2))
    assert len(standard_homotopy(2).terms) > len(standard_homotopy(1).terms)


@pytest.mark.parametrize("k", [1, 2])
def test_projector_is_idempotent(k):
    p = projector(k)
    assert compose(p, p) == p


def test_projector_realizes_to_identity():
    assert projector(1).realization() == identity(1).realization()


def test_homotopy_boundary_squares_to_zero():
    for k in (1, 2):
        H = EllipticElement.homotopy(k)
        assert H.boundary() == EllipticElement.correspondence(identity(k)) - EllipticElement.correspondence(projector(k))
        assert not H.boundary().boundary()


def test_words_merge_adjacent_correspondences():
    alg = EllipticAlgebra()
    g = alg.correspondence(graph([[1], [0]]))
    word = EllipticElement.homotopy(2) @ g
    assert len(word) == 1
    assert str(word) == "[2>2 {x1 - x3 = 0, x2 - x4 = 0}] H2 [1>2* {x1 - x2 = 0, x3 = 0}]"
    # composing two odd correspondences gives an even one
    back = alg.correspondence(graph([[1, 0]]))
    assert str(back @ g).startswith("[1>1 ")


def test_leibniz_sign_through_odd_prefix():
    alg = EllipticAlgebra()
    g = alg.correspondence(graph([[1], [0]]))
    word = EllipticElement.homotopy(2)
    lhs = (word @ g).boundary()
    assert lhs == word.boundary() @ g
    back = alg.correspondence(graph([[1, 0]]))
    assert (back @ word).boundary() == (back @ word.boundary()) * -1


def test_homotopy_words_do_not_realize():
    alg = EllipticAlgebra()
    e1 = MotiveTerm("E", 1)
    assert alg.realize(EllipticElement.homotopy(1), e1, e1) == [[0] * 4 for _ in range(4)]


def elliptic_chain():
    """Q_0(-1)[-2] -> Q_E -> Q_a: Gysin then restriction to a, composite zero since a != 0."""
    alg = EllipticAlgebra()
    gysin = alg.correspondence(graph([[]], 0))
    ev_a = alg.correspondence(graph([[]], 0, [{"a": 1}]).transpose())
    objects = {0: [MotiveTerm("E", 0, 1, -2)], 1: [MotiveTerm("E", 1)], 2: [MotiveTerm("E", 0, label="a")]}
    return DGComplex(objects, {(1, 0): {(0, 0): gysin}, (2, 1): {(0, 0): ev_a}}, alg)


def test_resolve_elliptic_chain():
    K = elliptic_chain()
    assert check_dg(K).ok
    R = resolve(K)
    assert check_dg(R.complex).ok
    assert R.check_comparison().ok
    F20 = R.complex.map(2, 0)[(0, 0)]
    assert len(F20) == 1 and "H1" in str(F20)
    assert realize_complex(R.complex).cohomology() == realize_complex(K).cohomology()


def test_schur_pieces_of_e_squared():
    pieces = schur_pieces(MotiveTerm("E", 2))
    total = {}
    for mult, piece in pieces:
        total[piece] = total.get(piece, 0) + mult
    assert total["Q"] == 1 and total["V[-1]"] == 2 and total["Q(-2)[-4]"] == 1
    assert sum(1 for _, piece in pieces if piece.startswith("e[")) == 2
