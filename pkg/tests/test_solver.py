from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from somos_sigma import weierstrass as W
from somos_sigma.errors import (
    DegenerateCurveError,
    DomainError,
    PrecisionError,
    SomosSigmaError,
    VanishingTauError,
)
from somos_sigma.recurrence import Somos4Problem, f_from_tau, gauge, somos4_run
from somos_sigma.solver import (
    alternating_closed_form,
    closed_form,
    f_from_wp,
    odd_multiple_generator,
    solve,
    step_exact,
)

WORKED = Somos4Problem(1, 1, (1, 1, 1, 1))
SOMOS4 = [1, 1, 1, 1, 2, 3, 7, 23, 59, 314, 1529, 8209, 83313]


@pytest.fixture(scope="module")
def worked():
    return solve(WORKED, 25)


def test_exact_steps(worked):
    assert worked.tau_minus1 == 2
    assert (worked.f_minus1, worked.f0, worked.f1) == (Fraction(3, 4), 2, 1)
    assert worked.J == 4
    assert (worked.lam, worked.mu) == (1, 1)
    assert (worked.g2, worked.g3) == (4, -1)
    assert worked.nu == -1 and worked.xi == 1
    assert worked.discriminant == 37


def test_nu_xi_on_curve(worked):
    assert worked.xi ** 2 == 4 * worked.nu ** 3 - worked.g2 * worked.nu - worked.g3


def test_residuals_small(worked):
    for name, r in worked.residuals.items():
        assert abs(r) < 1e-20, name


def test_closed_form_reproduces_sequence(worked):
    for n, t in enumerate(SOMOS4):
        v, _ = closed_form(worked, n)
        assert abs(v - t) < 1e-15 * max(1, t)
    v, _ = closed_form(worked, -1)
    assert abs(v - 2) < 1e-20


def test_wp_dictionary(worked):
    w = somos4_run(WORKED, -11, 13)
    f = f_from_tau(w)
    for n in range(-10, 11):
        assert abs(f_from_wp(worked, n) - f[n]) < 1e-15 * max(1, abs(f[n]))


def test_kappa_on_curve(worked):
    ctx = worked.ctx
    assert abs(W.wp(ctx, worked.kappa.z) - worked.lam) < 1e-20
    assert abs(W.wp_prime(ctx, worked.kappa.z) - 1) < 1e-20


def test_flip_kappa_z0(worked):
    # (kappa, z0) -> (-kappa, -z0) gives the same sequence with recomputed A, B
    ctx = worked.ctx
    k, z0 = -worked.kappa.z, -worked.z0.z
    sk = W.sigma(ctx, k)
    A = 1 / W.sigma(ctx, z0)
    B = sk * W.sigma(ctx, z0) / W.sigma(ctx, z0 + k)
    for n, t in enumerate(SOMOS4[:10]):
        v = A * B ** n * W.sigma(ctx, z0 + n * k) / sk ** (n * n)
        assert abs(v - t) < 1e-15 * t


def test_gauge_invariance_of_curve():
    # tau_n -> A B^n tau_n leaves f_n, hence the whole exact pipeline, unchanged
    base = step_exact(WORKED)
    w = gauge(WORKED.window(), Fraction(3, 2), Fraction(-2, 5))
    other = step_exact(Somos4Problem(WORKED.alpha, WORKED.beta, tuple(w[n] for n in range(4))))
    for name in ("f_minus1", "f0", "f1", "J", "lam", "mu", "g2", "g3", "nu", "xi"):
        assert getattr(other, name) == getattr(base, name), name
    assert other.tau_minus1 == base.tau_minus1 * Fraction(3, 2) * Fraction(-5, 2)


def test_odd_multiple_generator(worked):
    w = odd_multiple_generator(worked)
    assert w is not None
    ctx = worked.ctx
    assert W.lattice_equivalent(ctx, 2 * w.z, worked.kappa.z)
    assert W.lattice_equivalent(ctx, -3 * w.z, worked.z0.z)


def test_precision_error():
    sol = solve(WORKED, 12)
    closed_form(sol, 20)
    with pytest.raises(PrecisionError):
        closed_form(sol, 10 ** 4)


def test_vanishing_seed():
    with pytest.raises(VanishingTauError):
        step_exact(Somos4Problem(1, 1, (1, 0, 1, 1)))


def test_alpha_zero_redirected():
    with pytest.raises(DomainError):
        step_exact(Somos4Problem(0, 1, (1, 1, 1, 1)))


def test_singular_curve():
    # alpha = 0 is handled separately; a cusp/node case from beta = 0
    with pytest.raises(SomosSigmaError):
        solve(Somos4Problem(1, 0, (1, 1, 1, 1)), 20)


def test_alternating_closed_form():
    p = Somos4Problem(0, 2, (1, 1, 1, 1))
    w = somos4_run(p, 0, 21)
    for n in range(21):
        assert alternating_closed_form(p, n) == w[n]
    assert alternating_closed_form(p, 4) == 2 and alternating_closed_form(p, 5) == 2
    with pytest.raises(DomainError):
        alternating_closed_form(Somos4Problem(0, 0, (1, 1, 1, 1)), 4)
    with pytest.raises(DomainError):
        alternating_closed_form(WORKED, 4)


small_q = st.fractions(min_value=-3, max_value=3, max_denominator=5).filter(lambda x: x != 0)


@settings(max_examples=8)
@given(small_q, small_q, st.lists(small_q, min_size=4, max_size=4))
def test_random_round_trip(alpha, beta, seeds):
    p = Somos4Problem(alpha, beta, tuple(seeds))
    try:
        sol = solve(p, 25)
    except (DegenerateCurveError, VanishingTauError, DomainError):
        assume(False)
    w = somos4_run(p, 0, 8)
    for n in range(8):
        v, _ = closed_form(sol, n)
        assert abs(v - w[n]) < 1e-12 * max(1, abs(w[n]))
