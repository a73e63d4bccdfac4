from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ellmot.cycles import (
    D, Dm, ImproperIntersection, LinearCycle, Monomial, P, WitnessCycle, Wijk, Wijkl,
    Wjk, Wpij, AmbientMismatch, boundary, canonicalize, external_product,
    linear_combination,
)
from ellmot.grammar import ParseError, parse_cycle


def lc(text):
    return parse_cycle(text)


def test_canonicalize_orders_indices():
    assert canonicalize(3, [Dm(3, 1)]).factors == (Dm(1, 3),)
    assert D(3, 1) == D(1, 3)


def test_canonicalize_idempotent_on_canonical_input():
    m = canonicalize(3, [P(2), D(1, 3)])
    assert canonicalize(3, m.factors) == m


def test_repeated_factor_is_improper():
    with pytest.raises(ImproperIntersection):
        canonicalize(2, [P(1), P(1)])


def test_factor_order_p_then_d_then_dm():
    m = canonicalize(6, [Dm(1, 2), D(3, 4), P(6), P(5)])
    assert [f.kind for f in m.factors] == ["P", "P", "D", "Dm"]


@given(st.permutations([P(5), D(1, 3), Dm(2, 4), D(2, 6)]))
def test_canonicalize_order_independent(perm):
    assert canonicalize(6, perm) == canonicalize(6, [P(5), D(1, 3), Dm(2, 4), D(2, 6)])


def test_linear_combination_cancels():
    z = LinearCycle.monomial(2, D(1, 2))
    assert not linear_combination([1, -1], [z, z])


def test_linear_combination_half_defect():
    z = linear_combination([Fraction(1, 2), Fraction(1, 2)],
                           [LinearCycle.monomial(2, D(1, 2)), LinearCycle.monomial(2, Dm(1, 2))])
    assert len(z) == 2
    assert set(z.terms.values()) == {Fraction(1, 2)}
    half = LinearCycle.monomial(2, D(1, 2), coeff=Fraction(1, 2))
    assert 2 * half == LinearCycle.monomial(2, D(1, 2))


def test_linear_combination_rejects_ambient_mismatch():
    with pytest.raises(AmbientMismatch):
        linear_combination([1, 1], [LinearCycle.monomial(2, D(1, 2)), LinearCycle.monomial(3, D(1, 2))])


def test_external_product_shifts_indices():
    d12 = LinearCycle.monomial(2, D(1, 2))
    assert external_product(d12, d12) == LinearCycle.monomial(4, D(1, 2), D(3, 4))
    s = lc("D(1,2) + Dm(1,2) on E^2")
    assert external_product(s, LinearCycle.monomial(1, P(1))) == lc("D(1,2)*P(3) + Dm(1,2)*P(3) on E^3")
    half = d12 * Fraction(1, 2)
    assert external_product(half, half) == LinearCycle.monomial(4, D(1, 2), D(3, 4), coeff=Fraction(1, 4))


def test_external_product_associative():
    a, b, c = lc("D(1,2) - 3*P(1) on E^2"), lc("P(1) on E^1"), lc("2*Dm(1,2) on E^2")
    assert external_product(external_product(a, b), c) == external_product(a, external_product(b, c))


def test_boundary_examples():
    assert boundary(WitnessCycle.single(2, Wjk(1, 2))) == lc("D(1,2) + Dm(1,2) on E^2")
    w = WitnessCycle.single(5, Wijkl(1, 2, 3, 4), P(5))
    assert boundary(w) == lc("P(5)*D(1,2)*D(3,4) + P(5)*D(1,3)*D(2,4) + P(5)*D(1,4)*D(2,3) on E^5")
    assert not boundary(WitnessCycle.zero(4))


def test_boundary_codimension_bookkeeping():
    for sym in (Wjk(1, 2), Wijk(1, 2, 3), Wijkl(1, 2, 3, 4), Wpij(1, 2)):
        w = WitnessCycle.single(6, sym, P(6))
        assert boundary(w).codim == w.codim


def test_boundary_improper_raises():
    with pytest.raises(ImproperIntersection):
        boundary(WitnessCycle.single(3, Wijk(1, 2, 3), P(1)))


witness_syms = st.sampled_from([Wjk(1, 2), Wjk(3, 4), Wijk(1, 2, 3), Wijk(2, 1, 4),
                                Wijkl(1, 2, 3, 4), Wpij(1, 3)])
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@given(witness_syms, witness_syms, coeffs, coeffs)
def test_boundary_linear(s1, s2, a, b):
    w1 = WitnessCycle.single(6, s1, P(6))
    w2 = WitnessCycle.single(6, s2, P(5))
    if w1.codim != w2.codim:
        return
    assert boundary(w1 * a + w2 * b) == boundary(w1) * a + boundary(w2) * b


def test_parse_examples():
    z = parse_cycle("1/2*D(1,2) + 1/2*Dm(1,2) on E^2")
    assert z == LinearCycle(2, {Monomial(2, [D(1, 2)]): Fraction(1, 2),
                                Monomial(2, [Dm(1, 2)]): Fraction(1, 2)})
    with pytest.raises(ImproperIntersection):
        parse_cycle("P(1)*P(1) on E^2")
    assert parse_cycle("W(1,2,3) on E^3") == WitnessCycle.single(3, Wijk(1, 2, 3))


def test_parse_juxtaposition_and_witness_kinds():
    assert parse_cycle("P(5) D(1,2) D(3,4) on E^5") == LinearCycle.monomial(5, P(5), D(1, 2), D(3, 4))
    w = parse_cycle("Wp(1,2) - 3/4 P(3) W(1,2) on E^3")
    assert w.uses("Wpij") == 1 and w.uses("Wjk") == 1


@pytest.mark.parametrize("text, pos", [("D(1,2", 5), ("D(1,2) +", 8), ("Q(1)", 0),
                                       ("D(1,2) on F^2", 10), ("D(1,2) $", 7)])
def test_parse_errors_are_positioned(text, pos):
    with pytest.raises(ParseError) as info:
        parse_cycle(text)
    assert info.value.pos == pos


def test_parse_declared_ambient_mismatch():
    with pytest.raises(Exception):
        parse_cycle("D(1,3) on E^2")


@st.composite
def linear_cycles(draw):
    ambient = 4
    pool = [P(i) for i in range(1, 5)] + [D(i, j) for i in range(1, 5) for j in range(i + 1, 5)] \
        + [Dm(i, j) for i in range(1, 5) for j in range(i + 1, 5)]
    codim = draw(st.integers(0, 3))
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        facs = draw(st.lists(st.sampled_from(pool), min_size=codim, max_size=codim, unique=True))
        terms[Monomial(ambient, facs)] = draw(coeffs)
    return LinearCycle(ambient, terms)


@given(linear_cycles())
def test_print_parse_round_trip(z):
    text = str(z)
    assert parse_cycle(text) == z or (not z and not parse_cycle(text))
    assert str(parse_cycle(text)) == text


@given(witness_syms, coeffs, coeffs)
def test_witness_round_trip(s, a, b):
    w = WitnessCycle.single(6, s, P(6), coeff=a) + WitnessCycle.single(6, s, P(5), coeff=b)
    if w:
        assert parse_cycle(str(w)) == w
