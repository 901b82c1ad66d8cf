from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from somos_sigma import schur
from somos_sigma.errors import CapExceededError
from somos_sigma.recurrence import SequenceWindow, somos_k_residual


def test_sigma_polynomial():
    assert schur.schur_sigma().to_str() == schur.sigma_poly(*schur._gens()[:2]).to_str()
    v1, v2 = schur.theta_vector()
    # v lies on the theta divisor
    assert schur.sigma_poly(v1, v2).is_zero()


def test_sigma2_and_lambda():
    assert schur.sigma2_v() == schur.monomial_g(-1, 2)
    assert schur.lambda_of_v() == schur.monomial_g(1, -2)


@pytest.mark.parametrize("m", range(-6, 7))
def test_psi_closed_form(m):
    assert schur.psi(m) == schur.psi_closed_form(m)


def test_psi_small_values():
    assert schur.psi_value(0, 1) == 0
    assert schur.psi_value(1, 1) == 0
    assert schur.psi_value(2, 1) == -2
    assert schur.psi_value(-2, 1) == 2
    assert schur.psi_value(3, 1) == 8


@settings(max_examples=20)
@given(st.integers(-8, 8), st.fractions(min_value=-5, max_value=5, max_denominator=9).filter(lambda x: x != 0))
def test_psi_odd_in_m(m, gamma):
    assert schur.psi_value(-m, gamma) == -schur.psi_value(m, gamma)


def test_addition_formula():
    c = schur.addition_check()
    assert c.passed and c.residual == "0"


def test_alpha_values():
    checks = schur.alpha_check()
    assert [c.parameters["j"] for c in checks] == [0, 1, 2, 3]
    assert all(c.passed for c in checks)
    assert schur.reference_alpha(0) == schur.monomial_g(-35, -64)


@pytest.mark.parametrize("gamma", [1, 2, Fraction(-3, 5)])
def test_alpha_on_psi_sequence(gamma):
    # numerical psi sequence satisfies the order-8 relation with the alpha values at g = gamma
    g = Fraction(gamma)
    w = SequenceWindow(2, tuple(schur.psi_value(m, g) for m in range(2, 16)))
    alpha = [c * g ** k for c, k in (schur.REFERENCE_ALPHAS[j] for j in range(4))]
    for n in range(6, 12):
        assert somos_k_residual(w, alpha, n) == 0


@pytest.mark.parametrize("n", range(-4, 5))
def test_somos8_symbolic(n):
    assert schur.somos8_residual(n).is_zero()


def test_somos8_wrong_alpha_fails():
    bad = {j: schur.reference_alpha(j) for j in range(4)}
    bad[3] = schur.monomial_g(9, -28)
    assert not schur.somos8_residual(0, bad).is_zero()


@pytest.mark.parametrize("m,n", [(2, 0), (2, 3), (3, -2), (4, 4), (5, -5)])
def test_trilinear(m, n):
    c = schur.trilinear_check(m, n)
    assert c.passed, c.residual


def test_trilinear_u_zero_limit():
    for m in range(2, 6):
        assert schur.trilinear_check(m, 0, limit_u_zero=True).passed


def test_trilinear_cap():
    with pytest.raises(CapExceededError):
        schur.trilinear_check(9, 0)
    with pytest.raises(CapExceededError):
        schur.trilinear_check(2, -9, cap=8)


def test_verify_all_small_cap():
    checks = schur.verify_all(cap=3)
    assert checks and all(c.passed for c in checks)
    assert {c.identity for c in checks} >= {"addition", "alpha", "somos8", "trilinear", "psi_closed_form"}
    d = checks[0].to_json()
    assert d["identity"] == "addition" and d["pass"] is True
