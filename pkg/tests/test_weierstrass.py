from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from somos_sigma import weierstrass as W
from somos_sigma.errors import DegenerateCurveError, PoleError, ValidationError


@pytest.fixture(scope="module")
def somos_ctx():
    # curve of the classical Somos-4 sequence
    return W.build_context(4, -1, 25)


@pytest.fixture(scope="module")
def lemn_ctx():
    return W.build_context(4, 0, 20)


def test_lemniscatic_period_ratio(lemn_ctx):
    ratio = lemn_ctx.omega3 / lemn_ctx.omega1
    assert abs(ratio - 1j) < 1e-15


def test_legendre_relation(lemn_ctx, somos_ctx):
    assert abs(lemn_ctx.legendre_residual) < 1e-12
    assert abs(somos_ctx.legendre_residual) < 1e-20


def test_roots_satisfy_cubic(somos_ctx):
    for e in somos_ctx.roots:
        assert abs(4 * e ** 3 - 4 * e + 1) < 1e-20
    assert abs(sum(somos_ctx.roots)) < 1e-20


def test_degenerate_curve_rejected():
    with pytest.raises(DegenerateCurveError):
        W.build_context(3, 1)
    with pytest.raises(DegenerateCurveError):
        W.build_context(0, 0)


def test_sigma_small_and_odd(somos_ctx):
    mp = somos_ctx.mp
    z = mp.mpf("1e-6")
    assert abs(W.sigma(somos_ctx, z) / z - 1) < 1e-10
    for z in (mp.mpc("0.3", "0.2"), mp.mpc("-0.71", "1.1"), mp.mpf("1.3")):
        assert abs(W.sigma(somos_ctx, -z) + W.sigma(somos_ctx, z)) < 1e-18


def test_sigma_quasi_periodicity(somos_ctx):
    ctx = somos_ctx
    mp = ctx.mp
    z = mp.mpc("0.27", "-0.13")
    for w, eta in ((ctx.omega1, ctx.eta1), (ctx.omega3, ctx.eta3)):
        lhs = W.sigma(ctx, z + 2 * w)
        rhs = -W.sigma(ctx, z) * mp.exp(2 * eta * (z + w))
        assert abs(lhs - rhs) < 1e-18 * max(1, abs(rhs))


def test_wp_even_periodic_and_on_curve(somos_ctx):
    ctx = somos_ctx
    mp = ctx.mp
    z = mp.mpc("0.41", "0.17")
    v = W.wp(ctx, z)
    assert abs(W.wp(ctx, -z) - v) < 1e-18
    assert abs(W.wp(ctx, z + 2 * ctx.omega1) - v) < 1e-17
    assert abs(W.wp(ctx, z + 2 * ctx.omega3) - v) < 1e-17
    assert abs(W.curve_residual(ctx, z)) < 1e-17


def test_wp_pole(somos_ctx):
    with pytest.raises(PoleError):
        W.wp(somos_ctx, 0)
    with pytest.raises(PoleError):
        W.log_sigma(somos_ctx, 2 * somos_ctx.omega1)


def test_zeta_derivative_is_minus_wp(somos_ctx):
    ctx = somos_ctx
    mp = ctx.mp
    z = mp.mpc("0.5", "0.3")
    h = mp.mpf("1e-10")
    dz = (W.zeta(ctx, z + h) - W.zeta(ctx, z - h)) / (2 * h)
    assert abs(dz + W.wp(ctx, z)) < 1e-12


def test_abel_map_base_point(somos_ctx):
    # (x, y) = (1, 1) lies on y^2 = 4x^3 - 4x + 1
    kappa = W.abel_map(somos_ctx, 1, 1)
    assert abs(W.wp(somos_ctx, kappa.z) - 1) < 1e-20
    assert abs(W.wp_prime(somos_ctx, kappa.z) - 1) < 1e-20


def test_abel_map_rejects_off_curve(somos_ctx):
    with pytest.raises(ValidationError):
        W.abel_map(somos_ctx, 1, 2)


@settings(max_examples=20)
@given(
    st.fractions(min_value=-3, max_value=3, max_denominator=50).filter(lambda x: x != 0),
    st.fractions(min_value=-2, max_value=2, max_denominator=50),
)
def test_abel_round_trip(re, im):
    ctx = W.build_context(4, -1, 20)
    z = ctx.mp.mpc(float(re), float(im))
    if abs(W.reduce_centered(ctx, z)[0]) < 0.05:
        return
    x, y = W.wp(ctx, z), W.wp_prime(ctx, z)
    p = W.abel_map(ctx, x, y)
    assert W.lattice_equivalent(ctx, p.z, z)


def test_reduce_to_cell_equivalent(somos_ctx):
    ctx = somos_ctx
    z = ctx.mp.mpc("0.2", "0.1") + 3 * ctx.omega1 * 2 - 5 * ctx.omega3 * 2
    p = W.reduce_to_cell(ctx, z)
    assert W.lattice_equivalent(ctx, p.z, z)
    assert not W.lattice_equivalent(ctx, p.z, z + ctx.omega1)


def test_addition_formula(somos_ctx):
    ctx = somos_ctx
    mp = ctx.mp
    z, k = mp.mpc("0.37", "0.21"), mp.mpc("-0.19", "0.44")
    r1 = W.addition_formula_residual(ctx, z, k)
    assert abs(r1) < 1e-18
    # swapping z and kappa flips the sign of both sides
    r2 = W.addition_formula_residual(ctx, k, z)
    assert abs(r2) < 1e-18
    assert abs(r1 + r2) < 1e-18


def test_addition_formula_pole(somos_ctx):
    with pytest.raises(PoleError):
        W.addition_formula_residual(somos_ctx, somos_ctx.mp.mpf("0.3"), somos_ctx.mp.mpf("0.3"))


def test_alpha_beta_from_kappa(somos_ctx):
    kappa = W.abel_map(somos_ctx, 1, 1)
    a, b = W.alpha_beta_from_kappa(somos_ctx, kappa)
    assert abs(a - 1) < 1e-18
    assert abs(b - 1) < 1e-18


def test_half_period_gives_alpha_zero(somos_ctx):
    # alpha = wp'(kappa)^2 vanishes at a half period; beta is then undefined (2 kappa on the lattice)
    for w in (somos_ctx.omega1, somos_ctx.omega3, somos_ctx.omega1 + somos_ctx.omega3):
        assert abs(W.wp_prime(somos_ctx, w)) < 1e-18
    with pytest.raises(PoleError):
        W.alpha_beta_from_kappa(somos_ctx, somos_ctx.omega1)


def test_context_json(somos_ctx):
    d = somos_ctx.to_json()
    assert d["g2"] == "4" and d["g3"] == "-1"
    assert len(d["e"]) == 3
    assert d["precision"] == 25


def test_exact_discriminant():
    inv = W.EllipticInvariants(Fraction(4), Fraction(-1))
    assert inv.discriminant() == 64 - 27
    assert isinstance(inv.discriminant(), Fraction)
    assert abs(W.EllipticInvariants(mpmath.mpf(4), -1).discriminant() - 37) < 1e-12
