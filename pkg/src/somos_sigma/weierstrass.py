"""Weierstrass sigma, zeta and wp functions from the invariants ``g2, g3``.

Periods come from the complex arithmetic-geometric mean, eta constants and
sigma from Jacobi theta series, and the Abel map from Carlson's symmetric
integral ``R_F``.  Every context owns a private mpmath context, so a built
:class:`WeierstrassContext` is immutable and safe to share between threads.

Conventions: ``e1, e2, e3`` are the cubic roots sorted by descending real
part; ``2*omega1`` and ``2*omega3`` generate the lattice with
``Im(omega3/omega1) > 0``; lattice coordinates ``(s, t)`` of ``z`` satisfy
``z = 2 s omega1 + 2 t omega3`` and the fundamental cell is ``0 <= s, t < 1``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import DegenerateCurveError, DomainError, PoleError, ValidationError

DEFAULT_DIGITS = int(os.environ.get("SOMOS_SIGMA_DIGITS", "25"))
GUARD_DIGITS = 10


def _to_mp(mp, value):
    if isinstance(value, Fraction):
        return mp.mpf(value.numerator) / value.denominator
    if isinstance(value, int):
        return mp.mpf(value)
    return mp.mpmathify(value)


@dataclass(frozen=True)
class EllipticInvariants:
    g2: object
    g3: object

    def discriminant(self):
        """``g2^3 - 27 g3^2``; exact when both invariants are rational."""
        if isinstance(self.g2, (int, Fraction)) and isinstance(self.g3, (int, Fraction)):
            return Fraction(self.g2) ** 3 - 27 * Fraction(self.g3) ** 2
        return mpmath.mpmathify(self.g2) ** 3 - 27 * mpmath.mpmathify(self.g3) ** 2


@dataclass(frozen=True)
class JacobianPoint:
    """A point of ``C / (2 omega1 Z + 2 omega3 Z)`` stored by its cell representative."""

    z: object
    s: object = None
    t: object = None

    def __complex__(self):
        return complex(self.z)


@dataclass(frozen=True, eq=False)
class WeierstrassContext:
    invariants: EllipticInvariants
    roots: tuple
    omega1: object
    omega3: object
    eta1: object
    eta3: object
    tau: object
    nome: object
    digits: int
    series_terms: int
    legendre_residual: object
    mp: object = field(repr=False)

    @property
    def g2(self):
        return self.invariants.g2

    @property
    def g3(self):
        return self.invariants.g3

    def to_json(self) -> dict:
        def c(v):
            v = mpmath.mpmathify(v)
            return {"re": mpmath.nstr(v.real, self.digits), "im": mpmath.nstr(v.imag, self.digits)}

        return {
            "g2": str(self.g2),
            "g3": str(self.g3),
            "e": [c(e) for e in self.roots],
            "omega1": c(self.omega1),
            "omega3": c(self.omega3),
            "eta1": c(self.eta1),
            "eta3": c(self.eta3),
            "precision": self.digits,
            "series_terms": self.series_terms,
            "legendre_residual": mpmath.nstr(abs(self.legendre_residual), 5),
        }


def _agm(mp, a, b):
    """Complex AGM taking at each step the square root closer to the arithmetic mean."""
    tol = mp.mpf(10) ** (-mp.dps)
    for _ in range(200):
        a1 = (a + b) / 2
        g = mp.sqrt(a * b)
        if abs(a1 - g) > abs(a1 + g):
            g = -g
        a, b = a1, g
        if abs(a - b) <= tol * abs(a):
            return a
    raise DomainError("AGM failed to converge")


def build_context(g2, g3, digits: int | None = None) -> WeierstrassContext:
    """Periods, eta constants and theta state for ``y^2 = 4x^3 - g2 x - g3``."""
    digits = DEFAULT_DIGITS if digits is None else int(digits)
    inv = EllipticInvariants(g2, g3)
    mp = mpmath.MPContext()
    mp.dps = digits + GUARD_DIGITS
    G2, G3 = _to_mp(mp, g2), _to_mp(mp, g3)
    disc = inv.discriminant()
    if disc == 0 or (not isinstance(disc, Fraction) and abs(_to_mp(mp, disc)) < mp.mpf(10) ** (-digits)):
        raise DegenerateCurveError(
            "discriminant g2^3 - 27 g3^2 vanishes; for alpha = 0 use the alternating closed form",
            g2=str(g2),
            g3=str(g3),
        )
    roots = mp.polyroots([4, 0, -G2, -G3], maxsteps=200, extraprec=2 * mp.prec)
    roots = sorted((mp.mpc(r) for r in roots), key=lambda r: (-r.real, -r.imag))
    e1, e2, e3 = roots
    full1 = mp.pi / _agm(mp, mp.sqrt(e1 - e3), mp.sqrt(e1 - e2))
    full3 = mp.pi * 1j / _agm(mp, mp.sqrt(e1 - e3), mp.sqrt(e2 - e3))
    w1, w3 = full1 / 2, full3 / 2
    if (w3 / w1).imag < 0:
        w3 = -w3
    # shift Re(tau) into [-1/2, 1/2); keeps the rectangular case untouched
    k = mp.floor((w3 / w1).real + mp.mpf(1) / 2)
    w3 = w3 - k * w1
    tau = w3 / w1
    q = mp.exp(1j * mp.pi * tau)
    eta1 = _eta(mp, w1, q)
    q3 = mp.exp(1j * mp.pi * (-w1 / w3))
    eta3 = _eta(mp, w3, q3)
    legendre = eta1 * w3 - eta3 * w1 - 1j * mp.pi / 2
    terms = int(mp.ceil(mp.sqrt((digits + GUARD_DIGITS) * mp.log(10) / max(-mp.log(abs(q)), mp.mpf("1e-6"))))) + 1
    return WeierstrassContext(
        invariants=inv,
        roots=(e1, e2, e3),
        omega1=w1,
        omega3=w3,
        eta1=eta1,
        eta3=eta3,
        tau=tau,
        nome=q,
        digits=digits,
        series_terms=terms,
        legendre_residual=legendre,
        mp=mp,
    )


def _eta(mp, omega, q):
    d1 = mp.jtheta(1, 0, q, 1)
    d3 = mp.jtheta(1, 0, q, 3)
    return -(mp.pi ** 2) / (12 * omega) * d3 / d1


# ---------------------------------------------------------------------------
# lattice reduction
# ---------------------------------------------------------------------------


def lattice_coordinates(ctx: WeierstrassContext, z):
    """Real ``(s, t)`` with ``z = 2 s omega1 + 2 t omega3``."""
    mp = ctx.mp
    z = _to_mp(mp, z)
    a, b = 2 * ctx.omega1, 2 * ctx.omega3
    det = (a.real * b.imag - a.imag * b.real)
    s = (z.real * b.imag - z.imag * b.real) / det
    t = (a.real * z.imag - a.imag * z.real) / det
    return s, t


def reduce_centered(ctx: WeierstrassContext, z):
    """``z = z' + 2 m omega1 + 2 n omega3`` with ``z'`` in the cell centred at 0."""
    mp = ctx.mp
    z = _to_mp(mp, z)
    s, t = lattice_coordinates(ctx, z)
    m, n = int(mp.nint(s)), int(mp.nint(t))
    return z - 2 * m * ctx.omega1 - 2 * n * ctx.omega3, m, n


def reduce_to_cell(ctx: WeierstrassContext, z) -> JacobianPoint:
    """Representative in ``0 <= s, t < 1``."""
    mp = ctx.mp
    z = _to_mp(mp, z)
    s, t = lattice_coordinates(ctx, z)
    eps = mp.mpf(10) ** (-(ctx.digits + 2))
    m, n = int(mp.floor(s + eps)), int(mp.floor(t + eps))
    zr = z - 2 * m * ctx.omega1 - 2 * n * ctx.omega3
    return JacobianPoint(zr, s - m, t - n)


def lattice_equivalent(ctx: WeierstrassContext, z1, z2, tol=None) -> bool:
    tol = mpmath.mpf(10) ** (-(ctx.digits - 8)) if tol is None else tol
    d, _, _ = reduce_centered(ctx, _to_mp(ctx.mp, z1) - _to_mp(ctx.mp, z2))
    return abs(d) <= tol


# ---------------------------------------------------------------------------
# sigma, zeta, wp
# ---------------------------------------------------------------------------


def _pole_tol(ctx):
    return ctx.mp.mpf(10) ** (-(ctx.digits // 2))


def log_sigma(ctx: WeierstrassContext, z):
    """A logarithm of ``sigma(z)``; the argument is lattice-reduced first.

    Raises :class:`PoleError` when ``z`` is on the lattice (sigma has a zero).
    """
    mp = ctx.mp
    zr, m, n = reduce_centered(ctx, z)
    if abs(zr) < _pole_tol(ctx):
        raise PoleError("sigma vanishes on the lattice", z=str(z))
    w1 = ctx.omega1
    v = mp.pi * zr / (2 * w1)
    base = (
        mp.log(2 * w1 / mp.pi)
        + ctx.eta1 * zr ** 2 / (2 * w1)
        + mp.log(mp.jtheta(1, v, ctx.nome))
        - mp.log(mp.jtheta(1, 0, ctx.nome, 1))
    )
    # sigma(z' + 2m w1 + 2n w3) = (-1)^(m+n+mn) exp((2m eta1 + 2n eta3)(z' + m w1 + n w3)) sigma(z')
    shift = (2 * m * ctx.eta1 + 2 * n * ctx.eta3) * (zr + m * ctx.omega1 + n * ctx.omega3)
    sign = 1j * mp.pi * ((m + n + m * n) % 2)
    return base + shift + sign


def sigma(ctx: WeierstrassContext, z):
    """Weierstrass sigma; exactly zero on lattice points."""
    mp = ctx.mp
    zr, _, _ = reduce_centered(ctx, z)
    if abs(zr) < _pole_tol(ctx) ** 2:
        return mp.mpc(0)
    if abs(zr) < _pole_tol(ctx):
        return _sigma_direct(ctx, _to_mp(mp, z))
    return mp.exp(log_sigma(ctx, z))


def _sigma_direct(ctx, z):
    mp = ctx.mp
    w1 = ctx.omega1
    v = mp.pi * z / (2 * w1)
    return (2 * w1 / mp.pi) * mp.exp(ctx.eta1 * z ** 2 / (2 * w1)) * mp.jtheta(1, v, ctx.nome) / mp.jtheta(1, 0, ctx.nome, 1)


def _theta_derivs(ctx, z, upto):
    mp = ctx.mp
    zr, _, _ = reduce_centered(ctx, z)
    if abs(zr) < _pole_tol(ctx):
        raise PoleError("wp has a pole on the lattice", z=str(z))
    v = mp.pi * zr / (2 * ctx.omega1)
    return zr, [mp.jtheta(1, v, ctx.nome, k) for k in range(upto + 1)]


def zeta(ctx: WeierstrassContext, z):
    """Weierstrass zeta (quasi-periodic; evaluated without reduction shortcuts)."""
    mp = ctx.mp
    z = _to_mp(mp, z)
    zr, m, n = reduce_centered(ctx, z)
    _, th = _theta_derivs(ctx, z, 1)
    k = mp.pi / (2 * ctx.omega1)
    base = ctx.eta1 * zr / ctx.omega1 + k * th[1] / th[0]
    return base + 2 * m * ctx.eta1 + 2 * n * ctx.eta3


def wp(ctx: WeierstrassContext, z):
    mp = ctx.mp
    _, th = _theta_derivs(ctx, z, 2)
    k = mp.pi / (2 * ctx.omega1)
    d2 = (th[2] * th[0] - th[1] ** 2) / th[0] ** 2
    return -ctx.eta1 / ctx.omega1 - k ** 2 * d2


def wp_prime(ctx: WeierstrassContext, z):
    mp = ctx.mp
    _, th = _theta_derivs(ctx, z, 3)
    k = mp.pi / (2 * ctx.omega1)
    t0, t1, t2, t3 = th
    d3 = t3 / t0 - 3 * t2 * t1 / t0 ** 2 + 2 * t1 ** 3 / t0 ** 3
    return -(k ** 3) * d3


def curve_residual(ctx: WeierstrassContext, z):
    """``wp'^2 - (4 wp^3 - g2 wp - g3)`` at ``z``."""
    mp = ctx.mp
    x, y = wp(ctx, z), wp_prime(ctx, z)
    return y ** 2 - (4 * x ** 3 - _to_mp(mp, ctx.g2) * x - _to_mp(mp, ctx.g3))


# ---------------------------------------------------------------------------
# Abel map
# ---------------------------------------------------------------------------


def abel_map(ctx: WeierstrassContext, x, y) -> JacobianPoint:
    """``z = int_inf^{(x, y)} dx / y`` with the sign fixed by ``wp'(z) = y``.

    The integral is Carlson's ``R_F(x - e1, x - e2, x - e3)``; a few Newton
    steps on ``wp(z) = x`` guard against branch-cut ambiguity.
    """
    mp = ctx.mp
    X, Y = _to_mp(mp, x), _to_mp(mp, y)
    G2, G3 = _to_mp(mp, ctx.g2), _to_mp(mp, ctx.g3)
    rhs = 4 * X ** 3 - G2 * X - G3
    scale = max(abs(rhs), abs(Y) ** 2, mp.mpf(1))
    if abs(Y ** 2 - rhs) > scale * mp.mpf(10) ** (-(ctx.digits // 2)):
        raise ValidationError("point is not on the curve", x=str(x), y=str(y))
    e1, e2, e3 = ctx.roots
    z = mp.elliprf(X - e1, X - e2, X - e3)
    tol = mp.mpf(10) ** (-(ctx.digits + GUARD_DIGITS // 2))
    for _ in range(60):
        w = wp(ctx, z)
        if abs(w - X) <= tol * max(1, abs(X)):
            break
        dw = wp_prime(ctx, z)
        if dw == 0:
            break
        z = z - (w - X) / dw
    else:
        raise DomainError("Abel map Newton refinement did not converge")
    if abs(wp_prime(ctx, z) - Y) > abs(wp_prime(ctx, -z) - Y):
        z = -z
    return reduce_to_cell(ctx, z)


def alpha_beta_from_kappa(ctx: WeierstrassContext, kappa):
    """``alpha = wp'(k)^2``, ``beta = wp'(k)^2 (wp(2k) - wp(k))``."""
    mp = ctx.mp
    k = _to_mp(mp, kappa.z if isinstance(kappa, JacobianPoint) else kappa)
    d = wp_prime(ctx, k)
    a = d ** 2
    return a, a * (wp(ctx, 2 * k) - wp(ctx, k))


def addition_formula_residual(ctx: WeierstrassContext, z, kappa):
    """``sigma(z+k) sigma(z-k) / (sigma(z)^2 sigma(k)^2) - (wp(k) - wp(z))``."""
    mp = ctx.mp
    z, k = _to_mp(mp, z), _to_mp(mp, kappa)
    for w in (z, k, z + k, z - k):
        if abs(reduce_centered(ctx, w)[0]) < _pole_tol(ctx):
            raise PoleError("argument on the lattice", z=str(w))
    lhs = mp.exp(log_sigma(ctx, z + k) + log_sigma(ctx, z - k) - 2 * log_sigma(ctx, z) - 2 * log_sigma(ctx, k))
    return lhs - (wp(ctx, k) - wp(ctx, z))
