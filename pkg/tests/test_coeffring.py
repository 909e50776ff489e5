from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from parhiggs.coeffring import MotScalar, NotAUnit, PoleAtEvaluationPoint

Q = MotScalar.q()
ONE = MotScalar.one()
ZERO = MotScalar.zero()


def inv1 ():
    return MotScalar.inv_cyclo(1)


def test_add_same_denominator():
    a = inv1()
    assert a + a == MotScalar.from_rational(2) * a


def test_add_zero_identity():
    x = Q * inv1() + MotScalar.from_rational(Fraction(3, 7))
    assert x + ZERO == x


def test_forced_cancellation():
    # (q^2-1)/(q-1) + 0 == q+1
    x = MotScalar({2: 1, 0: -1}, 0, {1: 1})
    assert x == Q + ONE


def test_mul_cancels_unit():
    assert (Q - ONE) * inv1() == ONE


def test_mul_q_inverse():
    assert MotScalar.q(-1) * Q == ONE


def test_mul_denominators_merge():
    x = inv1() * MotScalar.inv_cyclo(2)
    assert x.invert() == (Q - ONE) * (MotScalar.q(2) - ONE)


def test_invert_simple():
    assert (Q - ONE).invert() == inv1()
    assert (MotScalar.q(2) - ONE).invert() == MotScalar.inv_cyclo(2)


def test_invert_non_unit():
    with pytest.raises(NotAUnit):
        (Q + MotScalar.from_rational(2)).invert()
    with pytest.raises(NotAUnit):
        ZERO.invert()


def test_adams_substitution():
    x = Q * MotScalar.inv_cyclo(2)
    assert x.adams(2) == MotScalar.q(2) * MotScalar.inv_cyclo(4)
    assert x.adams(1) == x
    assert inv1().adams(3) == MotScalar.inv_cyclo(3)


def test_evaluate():
    assert inv1().evaluate(2) == 1
    assert (Q + ONE).evaluate(3) == 4
    with pytest.raises(PoleAtEvaluationPoint):
        MotScalar.inv_cyclo(2).evaluate(1)
    with pytest.raises(PoleAtEvaluationPoint):
        MotScalar.q(-1).evaluate(0)


def test_is_zero():
    assert ZERO.is_zero()
    assert not inv1().is_zero()
    assert ((Q - ONE) * inv1() - ONE).is_zero()


def test_non_confluent_cancellation_is_canonical():
    # (q+1)/(q^2-1) and 1/(q-1) are the same element and must compare equal
    a = MotScalar({1: 1, 0: 1}, 0, {2: 1})
    b = inv1()
    assert a == b
    assert hash(a) == hash(b)


def test_structured_form_covers_bare_cyclotomic():
    # 1/(q+1) is (q-1)/(q^2-1) in structured form
    x = (Q + ONE).invert()
    num, a, struct = x.structured()
    assert a == 0
    assert struct == {2: 1}
    assert num == {1: Fraction(1), 0: Fraction(-1)}


def test_json_round_trip():
    xs = [
        ZERO,
        ONE,
        MotScalar.q(-3),
        (Q + ONE).invert() * MotScalar.from_rational(Fraction(-5, 3)),
        (Q ** 2 if False else Q * Q) * MotScalar.inv_cyclo(1, 2) * MotScalar.inv_cyclo(3),
    ]
    for x in xs:
        j = x.to_json()
        assert MotScalar.from_json(j) == x
        assert MotScalar.from_json(j).to_json() == j


def test_text_forms():
    assert str(inv1()) == "1/(q-1)"
    assert inv1().to_text() == "num = 1; den = (q^1-1)^1"
    assert str(ZERO) == "0"


# -- randomized ring properties ---------------------------------------------

coeffs = st.integers(min_value=-3, max_value=3).map(Fraction)


@st.composite
def scalars(draw):
    n_terms = draw(st.integers(0, 3))
    num = {}
    for _ in range(n_terms):
        num[draw(st.integers(0, 4))] = draw(coeffs)
    qexp = draw(st.integers(-2, 2))
    den = {}
    for i in draw(st.lists(st.integers(1, 3), max_size=2)):
        den[i] = den.get(i, 0) + 1
    return MotScalar(num, qexp, den)


@st.composite
def units(draw):
    u = MotScalar.from_rational(draw(st.fractions(min_value=Fraction(-3), max_value=Fraction(3)).filter(bool)))
    u = u * MotScalar.q(draw(st.integers(-2, 2)))
    for i in draw(st.lists(st.integers(1, 3), max_size=2)):
        f = MotScalar.q(i) - ONE
        u = u * (f if draw(st.booleans()) else f.invert())
    return u


@given(scalars(), scalars(), scalars())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a


@given(scalars(), st.integers(1, 5), st.integers(1, 5))
@settings(max_examples=40, deadline=None)
def test_adams_composition(a, m, n):
    assert a.adams(m).adams(n) == a.adams(m * n)


@given(scalars(), scalars())
@settings(max_examples=40, deadline=None)
def test_evaluate_is_ring_hom(a, b):
    q0 = Fraction(5, 2)
    assert (a * b).evaluate(q0) == a.evaluate(q0) * b.evaluate(q0)
    assert (a + b).evaluate(q0) == a.evaluate(q0) + b.evaluate(q0)


@given(units())
@settings(max_examples=40, deadline=None)
def test_invert_units(u):
    assert u.invert() * u == ONE


@given(scalars())
@settings(max_examples=40, deadline=None)
def test_json_round_trip_random(a):
    assert MotScalar.from_json(a.to_json()) == a
