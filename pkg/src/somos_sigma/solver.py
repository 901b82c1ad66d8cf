"""Inverse problem for Somos-4: from ``(alpha, beta, tau_0..tau_3)`` to a curve and a sigma closed form.

``step_exact`` does all rational work (backward iterate, the integral ``J``,
``wp(kappa)``, the invariants and the point ``(wp(z0), wp'(z0))``).
``uniformize`` adds the numerical Abel-map images and the prefactors, after
which ``closed_form`` evaluates

    tau_n = A B^n sigma(z0 + n kappa) / sigma(kappa)^(n^2)

in log space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import weierstrass as W
from .algebra import rational_sqrt
from .errors import ConsistencyError, DegenerateCurveError, DomainError, PrecisionError, VanishingTauError
from .recurrence import Somos4Problem, qrt_integral


@dataclass(frozen=True)
class Somos4Solution:
    """Exact curve data for a Somos-4 problem, optionally with uniformization."""

    problem: Somos4Problem
    tau_minus1: Fraction
    f0: Fraction
    f1: Fraction
    f_minus1: Fraction
    J: Fraction
    lam: Fraction
    mu: object
    g2: Fraction
    g3: Fraction
    nu: Fraction
    xi: object
    discriminant: Fraction
    ctx: W.WeierstrassContext | None = None
    kappa: W.JacobianPoint | None = None
    z0: W.JacobianPoint | None = None
    log_A: object = None
    log_B: object = None
    log_sigma_kappa: object = None
    residuals: dict | None = None

    @property
    def degenerate(self) -> bool:
        return self.discriminant == 0

    @property
    def uniformized(self) -> bool:
        return self.ctx is not None

    @property
    def A(self):
        return self.ctx.mp.exp(self.log_A)

    @property
    def B(self):
        return self.ctx.mp.exp(self.log_B)

    def to_json(self) -> dict:
        out = {
            "alpha": str(self.problem.alpha),
            "beta": str(self.problem.beta),
            "seeds": [str(s) for s in self.problem.seeds],
            "tau_minus1": str(self.tau_minus1),
            "f_minus1": str(self.f_minus1),
            "f0": str(self.f0),
            "f1": str(self.f1),
            "J": str(self.J),
            "lambda": str(self.lam),
            "mu": _exact_or_numeric(self.mu),
            "g2": str(self.g2),
            "g3": str(self.g3),
            "nu": str(self.nu),
            "xi": _exact_or_numeric(self.xi),
            "discriminant": str(self.discriminant),
        }
        if self.uniformized:
            d = self.ctx.digits
            out.update(
                {
                    "precision": d,
                    "context": self.ctx.to_json(),
                    "kappa": _cnum(self.kappa.z, d),
                    "z0": _cnum(self.z0.z, d),
                    "sigma_kappa": _cnum(self.ctx.mp.exp(self.log_sigma_kappa), d),
                    "A": _cnum(self.A, d),
                    "B": _cnum(self.B, d),
                    "residuals": {k: mpmath.nstr(abs(v), 5) for k, v in (self.residuals or {}).items()},
                }
            )
        return out


def _exact_or_numeric(v):
    if isinstance(v, (int, Fraction)):
        return str(v)
    return _cnum(v, 20)


def _cnum(v, digits):
    v = mpmath.mpmathify(v)
    return {"re": mpmath.nstr(v.real, digits), "im": mpmath.nstr(v.imag, digits)}


def step_exact(problem: Somos4Problem) -> Somos4Solution:
    """Steps 1-4: exact rational reconstruction of the curve and the base point."""
    al, be = problem.alpha, problem.beta
    t0, t1, t2, t3 = problem.seeds
    for i, t in enumerate(problem.seeds):
        if t == 0:
            raise VanishingTauError(problem.offset + i)
    if al == 0:
        raise DomainError("alpha = 0: kappa is a half period; use alternating_closed_form", alpha="0")
    # recurrence at n = 1 read backwards: tau_3 tau_{-1} = alpha tau_2 tau_0 + beta tau_1^2
    tm1 = (al * t2 * t0 + be * t1 * t1) / t3
    if tm1 == 0:
        raise VanishingTauError(problem.offset - 1)
    f0 = t1 * tm1 / (t0 * t0)
    f1 = t2 * t0 / (t1 * t1)
    J = qrt_integral(f0, f1, al, be)
    lam = (J * J / 4 - be) / (3 * al)
    g2 = 12 * lam * lam - 2 * J
    g3 = 4 * lam ** 3 - g2 * lam - al
    # backward step of the map: f_{-1} = (alpha + beta/f0) / (f0 f1)
    fm1 = (al + be / f0) / (f0 * f1)
    mu = rational_sqrt(al)
    if mu is None:
        with mpmath.workdps(50):
            mu = mpmath.sqrt(mpmath.mpf(al.numerator) / al.denominator)
    nu = lam - f0
    if isinstance(mu, Fraction):
        xi = f0 * f0 * (f1 - fm1) / mu
    else:
        with mpmath.workdps(50):
            xi = W._to_mp(mpmath.mp, f0 * f0 * (f1 - fm1)) / mu
    disc = g2 ** 3 - 27 * g3 ** 2
    return Somos4Solution(problem, tm1, f0, f1, fm1, J, lam, mu, g2, g3, nu, xi, disc)


def uniformize(sol: Somos4Solution, digits: int | None = None) -> Somos4Solution:
    """Step 5: Abel-map images ``kappa, z0`` and the constants ``A, B``."""
    if sol.degenerate:
        raise DegenerateCurveError("curve is singular; the sigma closed form does not apply", g2=str(sol.g2), g3=str(sol.g3))
    ctx = W.build_context(sol.g2, sol.g3, digits)
    mp = ctx.mp
    mu, xi = sol.mu, sol.xi
    if not isinstance(mu, Fraction):
        # non-square alpha: principal root at the context's precision
        al = sol.problem.alpha
        mu = mp.sqrt(mp.mpf(al.numerator) / al.denominator)
        xi = W._to_mp(mp, sol.f0 * sol.f0 * (sol.f1 - sol.f_minus1)) / mu
    kappa = W.abel_map(ctx, sol.lam, mu)
    z0 = W.abel_map(ctx, sol.nu, xi)
    tol = mp.mpf(10) ** (-(ctx.digits - 8))
    product = W.wp_prime(ctx, kappa.z) * W.wp_prime(ctx, z0.z)
    target = W._to_mp(mp, xi) * W._to_mp(mp, mu)
    sign_res = abs(product - target) / max(1, abs(target))
    if sign_res > tol:
        raise ConsistencyError("sign constraint wp'(kappa) wp'(z0) = xi mu not met; raise precision", residual=str(sign_res))
    t0, t1 = (W._to_mp(mp, s) for s in sol.problem.seeds[:2])
    ls_k = W.log_sigma(ctx, kappa.z)
    ls_z0 = W.log_sigma(ctx, z0.z)
    ls_z0k = W.log_sigma(ctx, z0.z + kappa.z)
    log_A = mp.log(t0) - ls_z0
    log_B = ls_k + ls_z0 + mp.log(t1) - ls_z0k - mp.log(t0)
    a_num, b_num = W.alpha_beta_from_kappa(ctx, kappa)
    residuals = {
        "legendre": ctx.legendre_residual,
        "sign_constraint": sign_res,
        "alpha": a_num - W._to_mp(mp, sol.problem.alpha),
        "beta": b_num - W._to_mp(mp, sol.problem.beta),
    }
    return Somos4Solution(
        **{k: getattr(sol, k) for k in _EXACT_FIELDS},
        ctx=ctx,
        kappa=kappa,
        z0=z0,
        log_A=log_A,
        log_B=log_B,
        log_sigma_kappa=ls_k,
        residuals=residuals,
    )


_EXACT_FIELDS = ("problem", "tau_minus1", "f0", "f1", "f_minus1", "J", "lam", "mu", "g2", "g3", "nu", "xi", "discriminant")


def solve(problem: Somos4Problem, digits: int | None = None) -> Somos4Solution:
    return uniformize(step_exact(problem), digits)


def closed_form_log(sol: Somos4Solution, n: int):
    """``log tau_n`` from the sigma closed form (some branch of the logarithm).

    ``n`` is an absolute index; the closed form is anchored at the seed offset.
    """
    if not sol.uniformized:
        raise DomainError("solution is not uniformized")
    ctx = sol.ctx
    n = n - sol.problem.offset
    arg = sol.z0.z + n * sol.kappa.z
    return sol.log_A + n * sol.log_B + W.log_sigma(ctx, arg) - n * n * sol.log_sigma_kappa


def closed_form(sol: Somos4Solution, n: int):
    """Returns ``(tau_n, log|tau_n|)``.

    Precision is checked against the size of the exponent: the answer keeps
    roughly ``digits - log10|log tau_n|`` significant digits.
    """
    ctx = sol.ctx
    mp = ctx.mp
    lt = closed_form_log(sol, n)
    mag = abs(lt)
    if mag > 0 and mp.log10(mag) > ctx.digits - 8:
        raise PrecisionError(f"|log tau_{n}| too large for {ctx.digits} digits; raise --digits", n=n)
    return mp.exp(lt), lt.real


def f_from_wp(sol: Somos4Solution, n: int):
    """``f_n = wp(kappa) - wp(z0 + n kappa)`` (``n`` absolute)."""
    n = n - sol.problem.offset
    return W.wp(sol.ctx, sol.kappa.z) - W.wp(sol.ctx, sol.z0.z + n * sol.kappa.z)


def odd_multiple_generator(sol: Somos4Solution):
    """Find ``w`` with ``kappa = 2w`` and ``z0 = -3w`` modulo the lattice, if one exists.

    Then ``z0 + n kappa = (2n - 3) w``.  Returns the cell representative or None.
    """
    ctx = sol.ctx
    for m in (0, 1):
        for k in (0, 1):
            w = (sol.kappa.z + 2 * m * ctx.omega1 + 2 * k * ctx.omega3) / 2
            if W.lattice_equivalent(ctx, -3 * w, sol.z0.z):
                return W.reduce_to_cell(ctx, w)
    return None


def alternating_closed_form(problem: Somos4Problem, n: int) -> Fraction:
    """Closed form for ``alpha = 0``: even and odd subsequences are geometric-Gaussian.

    ``tau_{2k} = tau_0 (tau_2/tau_0)^k beta^(k(k-1)/2)``,
    ``tau_{2k+1} = tau_1 (tau_3/tau_1)^k beta^(k(k-1)/2)``; seeds at offset 0.
    """
    if problem.alpha != 0:
        raise DomainError("alternating form needs alpha = 0")
    be = problem.beta
    if be == 0:
        raise DomainError("beta = 0 leaves the degenerate product recurrence")
    t0, t1, t2, t3 = problem.seeds
    if 0 in (t0, t1):
        raise VanishingTauError(0 if t0 == 0 else 1)
    n = n - problem.offset
    k, r = divmod(n, 2)
    e = k * (k - 1) // 2
    if r == 0:
        return t0 * (t2 / t0) ** k * be ** e
    return t1 * (t3 / t1) ** k * be ** e
