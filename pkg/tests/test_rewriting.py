from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from ellmot import linalg
from ellmot.cohomology import cycle_class, realization_matrix
from ellmot.cycles import (
    D, Dm, LinearCycle, Monomial, P, WitnessCycle, Wijk, Wijkl, Wjk, boundary,
)
from ellmot.grammar import parse_cycle
from ellmot.rewriting import (
    RewriteError, eliminate_shared, gz_measure, gz_sort, is_in_S, lz3_monomials, normal_form,
    reduce_signs, s_monomials, verify_with_oracle,
)


def mono(m, *facs):
    return Monomial(m, facs)


def lc(text):
    return parse_cycle(text)


def test_is_in_s_examples():
    assert is_in_S(mono(5, P(5), D(1, 3), D(2, 4)))
    assert not is_in_S(mono(4, D(1, 4), D(2, 3)))
    assert not is_in_S(mono(3, D(1, 2), D(2, 3)))
    assert not is_in_S(mono(2, Dm(1, 2)))
    assert is_in_S(Monomial(0, []))


def test_reduce_signs_single():
    res, w = reduce_signs(lc("Dm(1,2) on E^2"))
    assert res == lc("-D(1,2) on E^2")
    assert w == WitnessCycle.single(2, Wjk(1, 2))


def test_reduce_signs_plain_d_untouched():
    res, w = reduce_signs(lc("D(1,2) on E^2"))
    assert res == lc("D(1,2) on E^2") and not w


def test_reduce_signs_telescopes():
    g = lc("Dm(1,2)*Dm(3,4) on E^4")
    res, w = reduce_signs(g)
    assert res == lc("D(1,2)*D(3,4) on E^4")
    assert w == WitnessCycle(4, {(mono(4, Dm(3, 4)), Wjk(1, 2)): 1, (mono(4, D(1, 2)), Wjk(3, 4)): -1})
    assert g - res == boundary(w)


def test_reduce_signs_same_pair_uses_wdd():
    g = lc("D(1,2)*Dm(1,2) on E^2")
    res, w = reduce_signs(g)
    assert res == lc("2*P(1)*P(2) on E^2")
    assert g - res == boundary(w) and w.uses("Wdd") == 1


def test_eliminate_shared_r1():
    res, w = eliminate_shared(lc("D(1,2)*D(1,3) on E^3"))
    assert res == lc("-P(1)*D(2,3) on E^3")
    assert w == WitnessCycle.single(3, Wijk(1, 2, 3))


def test_eliminate_shared_r1_on_crossing_index():
    g = lc("D(1,2)*D(2,3) on E^3")
    res, w = eliminate_shared(g)
    assert res == lc("-P(2)*D(1,3) on E^3")
    assert w == WitnessCycle.single(3, Wijk(2, 1, 3))
    assert boundary(WitnessCycle.single(3, Wijk(2, 1, 3))) == lc("P(2)*D(1,3) + D(1,2)*D(2,3) on E^3")


def test_eliminate_shared_star_vanishes_via_r2():
    g = lc("D(1,2)*D(1,3)*D(1,4) on E^4")
    res, w = eliminate_shared(g)
    assert not res
    assert w.uses("Wijk") >= 1 and w.uses("Wpij") >= 1
    assert g - res == boundary(w)


def test_eliminate_shared_triangle():
    g = lc("D(1,2)*D(1,3)*D(2,3) on E^3")
    res, w = eliminate_shared(g)
    assert res == lc("2*P(1)*P(2)*P(3) on E^3")
    assert g - res == boundary(w)
    assert cycle_class(g) == cycle_class(res)


def test_eliminate_shared_rejects_dm():
    with pytest.raises(RewriteError):
        eliminate_shared(lc("Dm(1,2)*D(1,3) on E^3"))


def test_gz_sort_pluecker():
    g = lc("D(1,4)*D(2,3) on E^4")
    res, w = gz_sort(g)
    assert res == lc("-D(1,2)*D(3,4) - D(1,3)*D(2,4) on E^4")
    assert w == WitnessCycle.single(4, Wijkl(1, 4, 2, 3))


def test_gz_sort_fixed_point_and_spectator():
    assert gz_sort(lc("D(1,3)*D(2,4) on E^4")) == (lc("D(1,3)*D(2,4) on E^4"), WitnessCycle.zero(4))
    g = lc("P(5)*D(1,4)*D(2,3) on E^5")
    res, w = gz_sort(g)
    assert res == lc("-P(5)*D(1,2)*D(3,4) - P(5)*D(1,3)*D(2,4) on E^5")
    assert w == WitnessCycle.single(5, Wijkl(1, 2, 3, 4), P(5))


def test_gz_measure_decreases_on_both_outputs():
    before = gz_measure(mono(4, D(1, 4), D(2, 3)))
    assert gz_measure(mono(4, D(1, 2), D(3, 4))) < before
    assert gz_measure(mono(4, D(1, 3), D(2, 4))) < before


def test_gz_sort_requires_distinct_indices():
    with pytest.raises(RewriteError):
        gz_sort(lc("D(1,2)*D(1,3) on E^3"))


def test_normal_form_of_six_term_sum_is_zero():
    terms = {}
    for s in permutations((4, 5, 6)):
        terms[mono(6, D(1, s[0]), D(2, s[1]), D(3, s[2]))] = 1
    g = LinearCycle(6, terms)
    r = normal_form(g)
    assert not r.normal and r.witness
    assert r.exact()
    assert not cycle_class(g)


def test_normal_form_of_half_defect():
    r = normal_form(lc("1/2*D(1,2) + 1/2*Dm(1,2) on E^2"))
    assert not r.normal
    assert r.witness == WitnessCycle.single(2, Wjk(1, 2), coeff=Fraction(1, 2))


def test_normal_form_fixes_s():
    g = lc("P(5)*D(1,3)*D(2,4) - 3*P(1)*D(2,3)*D(4,5) on E^5")
    r = normal_form(g)
    assert r.normal == g and not r.witness and not r.rule_trace


def test_normal_form_empty_monomial():
    r = normal_form(LinearCycle.one(0))
    assert r.normal == LinearCycle.one(0) and not r.witness


def test_trace_flags_extensions():
    r = normal_form(lc("D(1,2)*D(1,3)*D(1,4) on E^4"))
    assert any(step.extension for step in r.rule_trace)
    assert r.extension_uses()["Wpij"] >= 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_exhaustive_exactness_and_oracle(n):
    for m in lz3_monomials(n):
        r = normal_form(LinearCycle(2 * n, {m: 1}))
        assert r.exact() and r.in_s()
        assert verify_with_oracle(r)


def test_lz3_counts():
    assert [len(lz3_monomials(n)) for n in (1, 2, 3)] == [4, 96, 5400]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_s_monomials_are_independent(n):
    ms = s_monomials(n)
    rows = [realization_matrix(LinearCycle(2 * n, {m: 1}), n).flatten() for m in ms]
    assert linalg.rank(rows) == len(ms)


@st.composite
def lz3_cycles(draw):
    n = draw(st.integers(1, 3))
    ms = lz3_monomials(n)
    picks = draw(st.lists(st.sampled_from(ms), min_size=1, max_size=5, unique=True))
    coeffs = draw(st.lists(st.fractions(-4, 4, max_denominator=6), min_size=len(picks), max_size=len(picks)))
    return LinearCycle(2 * n, dict(zip(picks, coeffs)))


@settings(max_examples=80, deadline=None)
@given(lz3_cycles())
def test_normal_form_is_idempotent_and_linear(g):
    r = normal_form(g)
    again = normal_form(r.normal)
    assert again.normal == r.normal and not again.witness
    parts = [normal_form(LinearCycle(g.ambient, {m: c})).normal for m, c in g.terms.items()]
    total = LinearCycle(g.ambient)
    for p in parts:
        total = total + p
    assert total == r.normal
