from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abtheme.abalg import right_divide_linear
from abtheme.series import TruncSeries
from abtheme.suite import rank2_example
from abtheme.theme import (EMPTY, Presentation, Rank3FamilySpec, ThemeError, analyze, bernstein_polynomial,
                           companion_module, extract_rank2_parameter, fundamental_invariants, is_monogenic,
                           isomorphism_test_rank2, rank3_family_analysis, rank_of, theme_from_presentation)
from abtheme.ximodel import SimplePoleModule, SpanError, XiElement

N = 24


def test_rank2_example_report():
    rep = analyze(rank2_example(Fraction(5, 2), 2, [1, 1], N))
    assert rep.rank == 2
    assert rep.lambdas == [Fraction(5, 2), Fraction(7, 2)]
    assert rep.gaps == [2]
    assert rep.params == [Fraction(-15, 8)]
    _, R = right_divide_linear(rep.annihilator, rep.lambdas[-1])
    assert R.truncate(rep.annihilator.weight_cap - 1).is_zero()


def test_rank1_generator():
    phi = XiElement.basis(Fraction(1, 2), 0, 1, N).b_action(2)
    rep = analyze(phi)
    assert rep.rank == 1
    assert rep.lambdas == [Fraction(5, 2)]
    assert rep.params == []


def test_gap_zero_has_empty_parameter():
    rep = analyze(rank2_example(Fraction(5, 2), 0, [1, 3], N))
    assert rep.gaps == [0]
    assert rep.params == [EMPTY]


def test_low_lambda_is_reported():
    rep = analyze(XiElement.basis(Fraction(1, 3), 0, 1, N))
    assert rep.lam1 == Fraction(1, 3)
    assert any("lambda1 <= 1" in a for a in rep.assumptions)


def test_unit_rescaling_is_isomorphism():
    phi = rank2_example(Fraction(5, 2), 2, [1, 1], N)
    psi = phi.series_action(TruncSeries([3, -1, 2, 7], N))
    assert isomorphism_test_rank2(phi, psi)
    assert not isomorphism_test_rank2(phi, rank2_example(Fraction(5, 2), 2, [2, 1], N))


@given(st.integers(1, 3), st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=3, max_size=3))
@settings(max_examples=15, deadline=None)
def test_presentation_round_trip(p, tail):
    lam1 = Fraction(5, 2)
    S = TruncSeries([1] + tail, N)
    pres = Presentation([lam1, lam1 + p - 1], [S])
    if S.coeffs[p] == 0:
        # vanishing parameter: not a theme, no rank-2 generator in Xi
        with pytest.raises((ThemeError, SpanError)):
            analyze(theme_from_presentation(pres, N).generator)
        return
    rep = analyze(theme_from_presentation(pres, N).generator)
    assert rep.lambdas == pres.lambdas
    assert rep.params == [S.coeffs[p]]


def test_rank3_presentation():
    pres = Presentation([Fraction(7, 2), Fraction(9, 2), Fraction(7, 2)],
                        [TruncSeries([1, Fraction(1, 2), Fraction(15, 16)], N), TruncSeries([1], N)])
    rep = analyze(theme_from_presentation(pres, N).generator)
    assert rep.rank == 3
    assert rep.gaps == [2, 0]
    assert rep.params == [Fraction(15, 16), EMPTY]


@pytest.mark.parametrize("eta0,eta1,xi", [
    (1, 2, None), (1, 0, None), (2, 3, None), (Fraction(-1, 2), 1, None),
    (1, 0, TruncSeries([3, 5, -1], N)), (3, 1, TruncSeries([0, Fraction(1, 3)], N)),
])
def test_rank3_closed_forms(eta0, eta1, xi):
    spec = Rank3FamilySpec(Fraction(7, 2), eta0, eta1, xi=xi)
    res = rank3_family_analysis(spec, N)
    assert (res.u, res.alpha) == spec.closed_form()


def test_rank3_family_other_lambda():
    spec = Rank3FamilySpec(Fraction(11, 3), 1, 1)
    res = rank3_family_analysis(spec, N)
    lam = spec.lam
    assert res.alpha == (lam - 1) * (lam - 2) / 4
    assert res.w == 1 / (lam * (lam + 1))


def test_rank3_family_validation():
    with pytest.raises(ValueError):
        Rank3FamilySpec(2, 1, 0)
    with pytest.raises(ValueError):
        Rank3FamilySpec(Fraction(7, 2), 0, 0)


def test_fundamental_invariants_and_rank():
    phi = Rank3FamilySpec(Fraction(7, 2), 1, 2).generator(N)
    assert rank_of(phi) == 3
    lam1, ps = fundamental_invariants(phi)
    assert lam1 == Fraction(7, 2) and ps == [2, 0]


def test_extract_rejects_wrong_rank():
    with pytest.raises(ThemeError):
        extract_rank2_parameter(XiElement.basis(Fraction(3, 2), 0, 1, N))


def test_companion_module_monogenic():
    pres = Presentation([Fraction(5, 2), Fraction(9, 2)], [TruncSeries([1, 0, 0, 5], N)])
    th = theme_from_presentation(pres, N)
    assert is_monogenic(th.module)[0]
    E = SimplePoleModule.e_lambda(2, N)
    assert not is_monogenic(SimplePoleModule.direct_sum(E, E))[0]


def test_bernstein_polynomials():
    lam = Fraction(5, 3)
    assert bernstein_polynomial(SimplePoleModule.e_lambda(lam, 8)) == [lam, 1]
    lam0 = Fraction(1, 2)
    assert bernstein_polynomial(SimplePoleModule.xi(lam0, 2, 8)) == [lam0 * lam0, 2 * lam0, 1]


def test_companion_module_rejects_bad_data():
    pres = Presentation([Fraction(5, 2), Fraction(9, 2)], [TruncSeries([1, 0, 0, 5], N)])
    assert companion_module(pres.elements(N)[1]).rank == 2
    with pytest.raises(ValueError):
        Presentation([1, 2], [TruncSeries([2], N)])
