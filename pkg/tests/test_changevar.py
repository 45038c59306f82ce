from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abtheme.abalg import AbElement, ChangeOfVariable, standard_form_compose
from abtheme.changevar import (eigenvector_after_cov, presentation_image, pushforward_presentation,
                               pushforward_simple_pole, pushforward_xi_substitution, rebase_b_powers, rebase_series,
                               reconstruct_from_rebased, saturation_compatibility, verify_parameter_transform,
                               verify_thematic_basis)
from abtheme.scalar import param
from abtheme.series import TruncSeries
from abtheme.suite import family_generator, p3_theme, rank2_example, subst_cov
from abtheme.theme import analyze
from abtheme.ximodel import SimplePoleModule, XiElement


def cov(coeffs, n):
    return ChangeOfVariable(TruncSeries([0] + list(coeffs), n, "a"))


def test_chi1_symbolic():
    t2 = param("theta2")
    lam = Fraction(7, 3)
    chi = rebase_b_powers(lam, cov([1, t2], 12), 1, 10)
    assert chi.coeffs[0] == 1
    assert chi.coeffs[1] == -2 * t2 * lam


def test_eigenvector_relation_and_r0():
    t2 = param("theta2")
    lam = Fraction(5, 2)
    ev = eigenvector_after_cov(lam, cov([1, t2], 14), 12)
    assert ev.residual_zero
    assert ev.R.coeffs[0] == t2 * lam * (1 - lam)


def test_eigenvector_identity_cov():
    ev = eigenvector_after_cov(Fraction(3), ChangeOfVariable.identity(10), 8)
    assert ev.R.is_zero() and ev.S == TruncSeries.one(ev.S.order)


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=2), min_size=4, max_size=4),
       st.sampled_from([1, 2, Fraction(-1, 2)]))
@settings(max_examples=20, deadline=None)
def test_rebase_series_reconstructs(S, r):
    W = 8
    th = cov([r, 1, -1], W)
    s = TruncSeries(S, W)
    parts = rebase_series(s, th, W)
    assert reconstruct_from_rebased(parts, th, W) == AbElement.from_series(s, W)


def test_e_lambda_pushforward_keeps_residue():
    lam = Fraction(5, 2)
    E = SimplePoleModule.e_lambda(lam, 10)
    for th in (cov([2, 0, 1], 12), cov([1, param("t2")], 12)):
        P = pushforward_simple_pole(E, th)
        assert P.residue_matrix() == [[lam]]


def test_rank1_pushforward_report_is_isomorphic():
    phi = XiElement.basis(Fraction(1, 2), 0, 1, 16).b_action(2)
    rep = verify_parameter_transform(phi, cov([2, 0, 1], 20))
    assert rep.ok and rep.pushed.rank == 1
    assert "isomorphic to E_lambda: true" in rep.to_text()


def test_pushforward_presentation_is_monic():
    W = 14
    _, P = standard_form_compose([Fraction(5, 2), Fraction(9, 2)], [TruncSeries([1, 0, 0, 5], W)], W)
    th = cov([2, 0, 1], W)
    Q = pushforward_presentation(P, th, Fraction(3, 2))
    assert Q.a_degree() == 2 and Q.coefficient(0, 2) == 1
    assert presentation_image(P, th).a_degree() >= 2


@pytest.mark.parametrize("r", [2, -1, Fraction(1, 3)])
def test_parameter_scales_by_r_to_minus_p(r):
    phi = rank2_example(Fraction(5, 2), 2, [1, 1], 20)
    rep = verify_parameter_transform(phi, cov([r, 1], 24), routes=("substitution",))
    assert rep.pushed.params == [Fraction(-15, 8) / r ** 2]
    assert rep.ok


def test_round_trip_by_inverse():
    phi = p3_theme(20)
    th = cov([2, 0, 1], 26)
    psi = pushforward_xi_substitution(phi, th.eta)
    back = pushforward_xi_substitution(psi, th.theta.with_var("t"))
    assert analyze(back).emitted() == analyze(phi).emitted()


def test_gap_zero_parameter_stays_empty():
    phi = rank2_example(Fraction(5, 2), 0, [1, 3], 16)
    rep = verify_parameter_transform(phi, cov([3, 1], 20), routes=("substitution",))
    assert rep.pushed.params == [None] and rep.ok


def test_thematic_basis_unitriangular_for_r1():
    e = family_generator(0, 20)
    w = verify_thematic_basis(e, cov([1, param("sigma")], 24))
    assert w.unitriangular


def test_thematic_basis_diagonal_powers_of_r():
    phi = p3_theme(16)
    w = verify_thematic_basis(phi, cov([3, 1], 20))
    assert w.triangular and w.diagonal == [1, 3]


def test_rank3_normal_form_moves_with_sigma():
    e = family_generator(0, 24)
    _, th = subst_cov(Fraction(-2), 30)
    rep = verify_parameter_transform(e, th, routes=("substitution",))
    assert rep.pushed.rank3.u == -2
    assert rep.pushed.params == rep.original.params


def test_saturation_compatibility_xi_module():
    N = 8
    E = SimplePoleModule.xi(Fraction(1, 2), 2, N)
    gens = [[TruncSeries.one(N), TruncSeries.zero(N)], [TruncSeries.zero(N), TruncSeries.monomial(1, N)]]
    chk = saturation_compatibility(E, cov([2, 1, 1], N + 2), gens)
    assert chk.ok
    assert chk.bernstein == [Fraction(3, 4), 2, 1]  # (x + 1/2)(x + 3/2)
