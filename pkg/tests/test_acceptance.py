"""Acceptance criteria 1-12.

Each test records the criterion's pass/fail line.  The lines are printed in the
pytest terminal summary (see conftest.py) and by ``python3 tests/test_acceptance.py``.
Criteria 6, 8 and 9 are checked literally and fail; they are marked as strict
expected failures, and the values actually computed are pinned by the
``*_corrected`` tests.
"""

from fractions import Fraction

import pytest

from abtheme.abalg import ChangeOfVariable
from abtheme.changevar import verify_parameter_transform
from abtheme.scalar import param
from abtheme.series import TruncSeries
from abtheme.suite import CRITERIA, family_generator, p3_theme, run_criterion, subst_cov
from abtheme.theme import RANK3_ASSUMPTION, Rank3FamilySpec, expected_w, rank3_family_analysis

LITERAL_FAILURES = {
    6: "theta = 2a + a^3 scales the parameter by r^-p (gives 5/8); 40 comes from the inverse",
    8: "the s^(lambda+1) coefficient is 1/(lambda(lambda+1)) = 4/63, not 1/(lambda+1)",
    9: "the pushed normal-form coefficient is u = 1 (u = sigma in general), not -3/4",
}

LINES = {}


def _criterion(n):
    marks = [pytest.mark.xfail(strict=True, reason=LITERAL_FAILURES[n])] if n in LITERAL_FAILURES else []
    return pytest.param(n, marks=marks, id=f"c{n:02d}")


@pytest.mark.parametrize("number", [_criterion(n) for n, _, _ in CRITERIA])
def test_criterion(number):
    res = run_criterion(number)
    LINES[number] = res.line()
    print(res.line())
    assert res.passed, res.line()


# -- what the failing criteria compute instead ------------------------------

def test_c06_corrected_forward_and_inverse():
    phi = p3_theme(24)
    th = ChangeOfVariable(TruncSeries([0, 2, 0, 1], 28, "a"))
    fwd = verify_parameter_transform(phi, th)
    back = verify_parameter_transform(phi, th.inverse())
    assert fwd.routes_agree and back.routes_agree
    assert fwd.pushed.params == [Fraction(5, 8)]
    assert back.pushed.params == [40]
    assert fwd.ok and back.ok


def test_c08_corrected_w():
    spec = Rank3FamilySpec(Fraction(7, 2), 1, 2)
    res = rank3_family_analysis(spec, 24)
    assert (res.u, res.alpha) == (Fraction(1, 2), Fraction(15, 16))
    assert res.w == Fraction(4, 63) == expected_w(Fraction(7, 2))


def test_c09_corrected_u_numeric():
    e = family_generator(0, 32)
    _, th = subst_cov(1, 38)
    rep = verify_parameter_transform(e, th)
    assert rep.original.rank3.u == 0
    assert rep.pushed.rank3.u == 1
    assert rep.pushed.rank3.alpha == rep.original.rank3.alpha == Fraction(15, 16)
    assert rep.pushed.params == rep.original.params
    assert rep.routes_agree
    assert any(RANK3_ASSUMPTION in a for a in rep.assumptions)


def test_c09_corrected_u_symbolic():
    sigma = param("sigma")
    e = family_generator(0, 24)
    _, th = subst_cov(sigma, 30)
    rep = verify_parameter_transform(e, th, routes=("substitution",))
    assert rep.pushed.rank3.u == sigma
    assert rep.pushed.rank3.alpha == Fraction(15, 16)


if __name__ == "__main__":
    for n, _, _ in CRITERIA:
        print(run_criterion(n).line())
