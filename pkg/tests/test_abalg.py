from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abtheme.abalg import (AbElement, ChangeOfVariable, anb_closed_form, commutator, monic_normalize, normal_mul,
                           right_divide_linear, standard_form_compose, theta_endomorphism)
from abtheme.scalar import param
from abtheme.series import TruncSeries

W = 10
fracs = st.fractions(min_value=-4, max_value=4, max_denominator=3)
elements = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), fracs, max_size=5).map(
    lambda d: AbElement(d, W))
covs = st.tuples(st.sampled_from([1, 2, -1, Fraction(1, 2)]), st.lists(fracs, min_size=3, max_size=3)).map(
    lambda rc: ChangeOfVariable(TruncSeries([0, rc[0]] + rc[1], W, "a")))


def test_defining_relation():
    a, b = AbElement.a(W), AbElement.b(W)
    assert commutator(a, b) == b * b


@pytest.mark.parametrize("n", range(9))
def test_anb_closed_form(n):
    assert anb_closed_form(n, W) == normal_mul(AbElement.a_power(n, W), AbElement.b(W))


def test_anb_small_case():
    # a^2 b = b a^2 + 2 b^2 a + 2 b^3
    assert anb_closed_form(2, W) == AbElement({(1, 2): 1, (2, 1): 2, (3, 0): 2}, W)


@given(elements, elements, elements)
@settings(max_examples=30, deadline=None)
def test_associativity(u, v, w):
    assert (u * v) * w == u * (v * w)


@given(covs, elements, elements)
@settings(max_examples=25, deadline=None)
def test_theta_is_homomorphism(th, u, v):
    assert theta_endomorphism(th, u * v) == theta_endomorphism(th, u) * theta_endomorphism(th, v)
    assert theta_endomorphism(th, u + v) == theta_endomorphism(th, u) + theta_endomorphism(th, v)


@given(covs, elements)
@settings(max_examples=25, deadline=None)
def test_theta_inverse(th, u):
    assert theta_endomorphism(th, theta_endomorphism(th.inverse(), u)) == u


@given(covs, covs, elements)
@settings(max_examples=15, deadline=None)
def test_theta_composition(t1, t2, u):
    # Theta_{t2(t1(a))} = Theta_{t1} followed by Theta_{t2} applied to the coefficients
    lhs = theta_endomorphism(t1.then(t2), u)
    rhs = theta_endomorphism(t1, theta_endomorphism(t2, u))
    assert lhs == rhs


def test_theta_relation_symbolic():
    th = ChangeOfVariable(TruncSeries([0, 1, param("t2"), param("t3")], W, "a"))
    al, be = theta_endomorphism(th, AbElement.a(W)), theta_endomorphism(th, AbElement.b(W))
    assert al * be - be * al == be * be


def test_change_of_variable_validation():
    with pytest.raises(ValueError):
        ChangeOfVariable(TruncSeries([1, 1], 4, "a"))
    with pytest.raises(ValueError):
        ChangeOfVariable(TruncSeries([0, 0, 1], 4, "a"))
    assert ChangeOfVariable.identity(5).is_identity()


def test_right_divide_linear():
    nu = Fraction(3, 2)
    Q0 = AbElement({(0, 1): 1, (1, 0): 2, (2, 0): 1}, W)
    lin = AbElement({(0, 1): 1, (1, 0): -nu}, W)
    R0 = AbElement({(0, 0): 5, (3, 0): 1}, W)
    Q, R = right_divide_linear(normal_mul(Q0, lin) + R0, nu)
    assert Q.truncate(W - 1) == Q0.truncate(W - 1)
    assert R.coeffs[:W - 1] == TruncSeries([5, 0, 0, 1], W - 1).coeffs


def test_standard_form_monic():
    units = [TruncSeries([1, 0, 0, 5], W)]
    prod, monic = standard_form_compose([Fraction(5, 2), Fraction(9, 2)], units, W)
    assert monic.coefficient(0, 2) == 1
    assert all(n == 0 for (n, j) in monic.terms if j == 2)
    assert monic_normalize(monic).truncate(W - 2) == monic.truncate(W - 2)


def test_standard_form_unit_check():
    with pytest.raises(ValueError):
        standard_form_compose([1, 2], [TruncSeries([2], W)], W)
    with pytest.raises(ValueError):
        standard_form_compose([1, 2], [], W)
