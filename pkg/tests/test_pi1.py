import pytest

from ellmot.dg import check_dg, totalize
from ellmot.pi1 import (
    BasepointConfig, TOTARO_TOKEN, build_pi1_complex, face, face_boundary_squared, free_algebra_dimension,
    gysin_expand, p1_walkthrough, realize_relative_motive, relative_motive,
)


def labels(rm, s):
    return [f.subset for f in rm.faces[s]]


def test_faces_at_one():
    rm = relative_motive(1)
    assert labels(rm, 0) == [()]
    assert labels(rm, 1) == [(0,), (1,)]
    assert [f.coords for f in rm.faces[1]] == [(("label", "a"),), (("label", "b"),)]
    assert 2 not in rm.faces  # a != b


def test_faces_at_two():
    rm = relative_motive(2)
    middle = {f.subset: f.coords for f in rm.faces[1]}
    assert middle[(0,)] == (("label", "a"), ("param", 0))
    assert middle[(1,)] == (("param", 0), ("param", 0))
    assert middle[(2,)] == (("param", 0), ("label", "b"))
    points = {f.subset: f.coords for f in rm.faces[2]}
    assert set(points) == {(0, 1), (0, 2), (1, 2)}
    assert points[(0, 2)] == (("label", "a"), ("label", "b"))


def test_empty_face():
    assert face(2, (0, 1, 2)) is None
    assert face(3, (0, 3)) is not None


def test_basepoints_must_differ():
    with pytest.raises(ValueError):
        BasepointConfig("a", "a")
    with pytest.raises(ValueError):
        BasepointConfig("O", "b")


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_face_differential_squares_to_zero(n):
    assert face_boundary_squared(relative_motive(n)) == {}


def test_face_index_signs_do_not_square_to_zero():
    assert face_boundary_squared(relative_motive(2, sign_rule="face"))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_unexpanded_cohomology_matches_free_algebra(n):
    assert realize_relative_motive(relative_motive(n)) == {0: free_algebra_dimension(2, n)}


def test_free_algebra_dimension():
    assert [free_algebra_dimension(2, k) for k in range(5)] == [1, 3, 7, 15, 31]
    assert free_algebra_dimension(3, 2) == 13


def test_gysin_expansion_at_two():
    D = gysin_expand(relative_motive(2))
    assert len(D.objects) == 6
    assert sum(len(v) for v in D.objects.values()) == 13
    deepest = D.objects[(0, -2)]
    assert [(t.power, t.twist, t.shift) for t in deepest] == [(0, 2, -4)]
    assert [t.power for t in D.objects[(1, -1)]] == [0, 0, 0]


def test_gysin_expansion_is_strict():
    D = gysin_expand(relative_motive(2))
    assert check_dg(totalize(D)).ok


@pytest.mark.parametrize("n", [1, 2])
def test_expansion_commutes_with_realization(n):
    built = build_pi1_complex(n, resolved=False)
    assert built.realized_cohomology() == realize_relative_motive(relative_motive(n))


def test_sizes_at_three():
    K = build_pi1_complex(3, resolved=False).complex
    assert len(K.positions()) == 7
    assert sum(len(v) for v in K.objects.values()) == 40
    assert sum(4 ** t.power for v in K.objects.values() for t in v) == 259


@pytest.mark.parametrize("n", [1, 2])
def test_resolution_passes_checks(n):
    built = build_pi1_complex(n)
    assert check_dg(built.complex).ok
    assert check_dg(built.resolution.complex).ok
    assert built.resolution.check_comparison().ok
    assert built.resolved_cohomology() == {0: free_algebra_dimension(2, n)}


def test_resolved_terms_at_one():
    built = build_pi1_complex(1)
    assert all(t.resolved for v in built.resolution.complex.objects.values() for t in v)
    assert len(built.resolution.complex.map(1, 0)) == 2  # evaluation at a and at b


def test_totaro_chain_at_two():
    built = build_pi1_complex(2)
    chain = built.totaro_chain()
    assert len(chain) == 1
    word = next(iter(chain.terms))
    assert [tok[1] for tok in word if tok[0] == "H"] == [1, 2, 1]
    F, h = built.totaro_entry()
    assert chain.terms.keys() <= F.terms.keys()
    assert not h  # the source is a point, whose homotopy vanishes


def test_bound():
    with pytest.raises(ValueError):
        build_pi1_complex(4)


def test_p1_walkthrough():
    K, res, entry = p1_walkthrough()
    assert str(entry) == TOTARO_TOKEN == "(t, 1-t, 1-b/t)"
    assert check_dg(K).ok and check_dg(res.complex).ok
    assert res.check_comparison().ok


def test_p1_walkthrough_other_label():
    assert str(p1_walkthrough("c")[2]) == "(t, 1-t, 1-c/t)"


def test_p1_trivial_component():
    K, res, entry = p1_walkthrough(trivial=True)
    assert not entry
    assert check_dg(res.complex).ok


@pytest.mark.parametrize("n", [1, 2, 3])
def test_resolved_ranks_count_words_up_to_length_n(n):
    assert build_pi1_complex(n).resolved_cohomology() == {0: free_algebra_dimension(2, n)}


def test_resolution_passes_checks_at_three():
    built = build_pi1_complex(3)
    assert check_dg(built.resolution.complex).ok
    assert built.resolution.check_comparison().ok
