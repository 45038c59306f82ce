from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abtheme.scalar import param
from abtheme.series import SeriesError, TruncSeries, ode_residual, solve_ode

N = 8
fracs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
coeff_lists = st.lists(fracs, min_size=N, max_size=N)


def S(cs, n=N, var="b"):
    return TruncSeries(cs, n, var)


@given(coeff_lists, coeff_lists, coeff_lists)
@settings(max_examples=40, deadline=None)
def test_ring_laws(x, y, z):
    a, b, c = S(x), S(y), S(z)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == TruncSeries.zero(N)


@given(coeff_lists)
@settings(max_examples=40, deadline=None)
def test_invert_units(x):
    x = [Fraction(1)] + x[1:]
    a = S(x)
    assert a * a.invert() == TruncSeries.one(N)


@given(coeff_lists)
@settings(max_examples=30, deadline=None)
def test_exp_log_inverse(x):
    a = S([0] + x[1:])
    assert a.exp().log() == a


@given(st.lists(fracs, min_size=N - 2, max_size=N - 2), st.sampled_from([1, 2, -1, Fraction(1, 3)]))
@settings(max_examples=30, deadline=None)
def test_compositional_inverse(rest, r):
    f = S([0, r] + rest, var="t")
    g = f.compositional_inverse()
    ident = S([0, 1], var="t")
    assert f.compose(g) == ident
    assert g.compose(f) == ident


def test_truncation_rules():
    a = S([1, 2, 3], 5)
    b = S([1, 1], 3)
    assert (a + b).order == 3
    assert a.shift(2).order == 5 and a.shift(2).coeffs[:3] == (0, 0, 1)
    assert a.mul_power(2).order == 7
    with pytest.raises(SeriesError):
        b[3]


def test_valuation_and_unshift():
    a = S([0, 0, 3, 1], 6)
    assert a.valuation() == 2
    assert a.unshift(2).coeffs[0] == 3


def test_symbolic_coefficients():
    t = param("t")
    a = S([1, t], 4)
    assert (a * a).coeffs[2] == t * t
    assert a.invert().coeffs[3] == -(t * t * t)


@pytest.mark.parametrize("kind", ["A", "Aprime"])
@given(coeff_lists)
@settings(max_examples=20, deadline=None)
def test_ode_a_residual_zero(kind, x):
    s = S(x)
    sol = solve_ode(kind, s)
    assert ode_residual(kind, sol, s).is_zero()


@given(coeff_lists, coeff_lists)
@settings(max_examples=20, deadline=None)
def test_ode_b_residual_zero(x, y):
    s, t = S(x), S(y)
    u = solve_ode("A", s)
    v = solve_ode("B", u, t)
    assert ode_residual("B", v, u, t).is_zero()


def test_ode_a_zero_input():
    assert solve_ode("A", TruncSeries.zero(6)).is_zero()


def test_ode_unknown_kind():
    with pytest.raises(ValueError):
        solve_ode("C", TruncSeries.zero(3))
