import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from somos_sigma import henon_heiles as H
from somos_sigma.errors import BranchError, DomainError, ValidationError

EXACT_PARAMS = H.HHParams(0, 0, 0)
EXACT_STATE = H.ReducedState(4, 0, 1, 0)
EXACT_LAMBDA = Fraction(1, 2)

REAL_PARAMS = H.HHParams(0.0, -0.9, 0.0)
REAL_STATE = H.HHState(0.53, 0.4, 0.4, 0.1)
REAL_LAMBDA = 0.85

q = st.fractions(min_value=-3, max_value=3, max_denominator=7)


def test_int_promotion():
    p = H.HHParams(1, 2, 3)
    assert all(isinstance(v, Fraction) for v in (p.a, p.c, p.m))
    r = H.ReducedState(1, 2, 3, 4)
    assert all(isinstance(v, Fraction) for v in r.as_tuple())


def test_reduced_coordinates():
    st_ = H.HHState(2.0, 0.5, -1.5, 0.25)
    r = st_.reduced()
    assert r.s == 4.0 and r.w == -3.0 and r.q2 == 0.5 and r.p2 == 0.25


@settings(max_examples=30)
@given(q.filter(lambda x: x != 0), q, q, q, q, q, q)
def test_spectral_curve_from_integrals(s, w, q2, p2, a, c, m):
    # f = A^2 + Bc C is 4x^5 + c4 x^4 + ... with c1, c2 given by the integrals
    params = H.HHParams(a, c, m)
    r = H.ReducedState(s, w, q2, p2)
    f = H.curve_polynomial(r, params)
    sc = H.spectral_curve(r, params)
    assert f == [sc["c0"], sc["c1"], sc["c2"], sc["c3"], sc["c4"], 4]


def test_integrals_example():
    st_ = H.HHState(2, 1, 0, 0)
    assert H.h1(st_, EXACT_PARAMS) == 3
    assert H.h2(st_, EXACT_PARAMS) == -1
    assert H.curve_polynomial(st_.reduced(), EXACT_PARAMS) == [0, Fraction(-1, 2), Fraction(3, 2), 0, 0, 4]


def test_lax_trace_free_and_structure():
    A, Bc, C = H.lax_entries(H.ReducedState(3, 1, 2, 5), H.HHParams(1, 2, 3))
    L = H.lax_matrix(H.ReducedState(3, 1, 2, 5), H.HHParams(1, 2, 3))
    assert H._padd(L[0][0], L[1][1]) == [0, 0]
    assert C[-1] == 2 and Bc[-1] == 2 and len(A) == 2


def test_h_singular_at_q1_zero():
    with pytest.raises(DomainError):
        H.h1(H.ReducedState(0, 0, 1, 0), EXACT_PARAMS)
    with pytest.raises(DomainError):
        H.h1(H.ReducedState(0, 0, 1, 0), H.HHParams(0, 0, 1))


def test_exact_bt_step():
    res = H.bt_step_reduced(EXACT_STATE, EXACT_PARAMS, EXACT_LAMBDA, 1)
    assert res.lax_residual == 0 and res.structure_residual == 0
    assert all(isinstance(v, Fraction) for v in res.state.as_tuple())
    assert H.h1(res.state, EXACT_PARAMS) == H.h1(EXACT_STATE, EXACT_PARAMS)
    assert H.h2(res.state, EXACT_PARAMS) == H.h2(EXACT_STATE, EXACT_PARAMS)


def test_exact_round_trip():
    fwd = H.bt_step_reduced(EXACT_STATE, EXACT_PARAMS, EXACT_LAMBDA, 1).state
    back = H.bt_step_reduced(fwd, EXACT_PARAMS, EXACT_LAMBDA, -1).state
    assert back == EXACT_STATE


def test_exact_mu_must_be_rational():
    with pytest.raises(DomainError):
        H.bt_step_reduced(EXACT_STATE, EXACT_PARAMS, Fraction(1, 3), 1)


def test_mu_sign_validated():
    with pytest.raises(ValidationError):
        H.bt_step_reduced(EXACT_STATE, EXACT_PARAMS, EXACT_LAMBDA, 0)


def test_real_orbit_conserves_integrals():
    h10, h20 = H.h1(REAL_STATE, REAL_PARAMS), H.h2(REAL_STATE, REAL_PARAMS)
    cur = REAL_STATE
    for _ in range(100):
        res = H.bt_step_reduced(cur.reduced(), REAL_PARAMS, REAL_LAMBDA, -1)
        assert res.lax_residual <= 1e-12
        cur = H.canonical_state(res.state, 1 if cur.q1 >= 0 else -1)
    assert abs(H.h1(cur, REAL_PARAMS) - h10) <= 1e-8 * abs(h10)
    assert abs(H.h2(cur, REAL_PARAMS) - h20) <= 1e-8 * abs(h20)


@pytest.mark.parametrize("params", [H.HHParams(0.3, -0.9, 0.0), H.HHParams(-0.2, 0.4, 0.05)])
def test_real_orbit_nonzero_a(params):
    # the x^3 and x^4 coefficients depend on a; the Lax structure must still be exact
    h10, h20 = H.h1(REAL_STATE, params), H.h2(REAL_STATE, params)
    f = H.curve_polynomial(REAL_STATE.reduced(), params)
    lam = next(x / 20 for x in range(1, 200) if H._peval(f, x / 20) > 0.05)
    cur = REAL_STATE
    for _ in range(10):
        res = H.bt_step_reduced(cur.reduced(), params, lam, -1)
        assert res.lax_residual <= 1e-12
        cur = H.canonical_state(res.state, 1 if cur.q1 >= 0 else -1)
    assert abs(H.h1(cur, params) - h10) <= 1e-9 * max(1, abs(h10))
    assert abs(H.h2(cur, params) - h20) <= 1e-9 * max(1, abs(h20))


def test_real_round_trip():
    back = H.bt_step(H.bt_step(REAL_STATE, REAL_PARAMS, REAL_LAMBDA, 1), REAL_PARAMS, REAL_LAMBDA, -1)
    for x, y in zip(back.as_tuple(), REAL_STATE.as_tuple()):
        assert abs(x - y) < 1e-10


def test_bt_commute():
    l1, l2 = REAL_LAMBDA, 1.5
    a = H.bt_step(H.bt_step(REAL_STATE, REAL_PARAMS, l1, -1), REAL_PARAMS, l2, 1)
    b = H.bt_step(H.bt_step(REAL_STATE, REAL_PARAMS, l2, 1), REAL_PARAMS, l1, -1)
    for x, y in zip(a.as_tuple(), b.as_tuple()):
        assert abs(x - y) < 1e-9


def test_branch_error_when_f_negative():
    f = H.curve_polynomial(REAL_STATE.reduced(), REAL_PARAMS)
    lam = next(x / 10 for x in range(-50, 50) if H._peval(f, x / 10) < 0)
    with pytest.raises(BranchError):
        H.bt_step_reduced(REAL_STATE.reduced(), REAL_PARAMS, lam, 1)


def test_canonical_state_rejects_nonpositive():
    with pytest.raises(BranchError):
        H.canonical_state(H.ReducedState(-1.0, 0.0, 0.0, 0.0))


def test_darboux_determinant():
    Y, lam = Fraction(3, 5), Fraction(2)
    M = H.darboux_matrix(Y, lam)
    # det M = lam - x as a polynomial in x
    det = H._padd(H._pmul(M[0][0], M[1][1]), H._pneg(H._pmul(M[0][1], M[1][0])))
    assert H._trim(det) == [lam, -1]


def test_separation_variables():
    f = H.curve_polynomial(EXACT_STATE, EXACT_PARAMS)
    _, _, C = H.lax_entries(EXACT_STATE, EXACT_PARAMS)
    sv = H.separation_variables(EXACT_STATE, EXACT_PARAMS)
    assert len(sv) == 2
    (x1, _), (x2, _) = sv
    # Vieta on 2x^2 + (q2 + 2a) x - q1^2/8
    assert abs(x1 * x2 + Fraction(4, 16)) < 1e-15
    assert abs(x1 + x2 + Fraction(1, 2)) < 1e-15
    for x, y in sv:
        assert abs(H._peval(C, x)) < 1e-14
        assert abs(y * y - H._peval(f, x)) < 1e-12


def test_separation_variables_exact():
    # (q1, q2) = (4, 0): C = 2x^2 - 2 has rational roots +-1
    r = H.ReducedState(16, 4, 0, 2)
    f = H.curve_polynomial(r, EXACT_PARAMS)
    sv = H.separation_variables(r, EXACT_PARAMS)
    assert sorted(x for x, _ in sv) == [-1, 1]
    for x, y in sv:
        assert isinstance(x, Fraction)
        assert y * y == H._peval(f, x)


def test_separation_variables_real():
    for x, y in H.separation_variables(REAL_STATE, REAL_PARAMS):
        f = H.curve_polynomial(REAL_STATE.reduced(), REAL_PARAMS)
        assert abs(y * y - H._peval(f, x)) < 1e-12 * max(1, abs(y * y))


def test_mumford_divisor_round_trip():
    D = H.mumford_divisor(EXACT_STATE, EXACT_PARAMS)
    curve = H.quintic_curve(EXACT_STATE, EXACT_PARAMS)
    assert ((D.V * D.V - curve.f) % D.U).is_zero()
    assert H.state_from_divisor(D, EXACT_PARAMS) == EXACT_STATE


@settings(max_examples=20)
@given(q.filter(lambda x: x != 0), q, q, q, q, q)
def test_state_divisor_bijection(s, w, q2, p2, a, c):
    params = H.HHParams(a, c, 0)
    r = H.ReducedState(s, w, q2, p2)
    D = H.mumford_divisor(r, params)
    assert H.state_from_divisor(D, params) == r


@pytest.mark.parametrize("sign", [1, -1])
def test_cross_check_jacobian(sign):
    rep = H.cross_check_jacobian(EXACT_STATE, EXACT_PARAMS, EXACT_LAMBDA, sign, 5)
    assert rep.passed, rep.to_json()
    assert rep.steps == 5 and all(rep.matches)


def test_orbit_records():
    recs = H.orbit(REAL_STATE, REAL_PARAMS, REAL_LAMBDA, 3, -1)
    assert [r["step"] for r in recs] == [0, 1, 2, 3]
    assert all("lax_residual" in r for r in recs[:-1])
    assert math.isclose(recs[-1]["h1"], recs[0]["h1"], rel_tol=1e-10)


@pytest.mark.parametrize("sign", [1, -1])
def test_cross_check_jacobian_nonzero_a(sign):
    rep = H.cross_check_jacobian(H.ReducedState(1, -2, 0, 0), H.HHParams(1, 0, 0), -1, sign, 5)
    assert rep.passed, rep.to_json()
