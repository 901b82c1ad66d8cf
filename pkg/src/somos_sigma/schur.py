"""Symbolic genus-2 identities in the cusp limit ``y^2 = 4x^5``.

There the sigma function is the polynomial ``u1 - u2^3/3`` and the theta
divisor is parametrised by ``v = (g^3/3, g)``.  All quantities live in
``Q[u1, u2, g, 1/g]`` so every identity below is checked as an exact
equality of (Laurent) polynomials or rational functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import MultiPoly, RationalFunction
from .errors import CapExceededError

VARS = ("u1", "u2", "g")
DEFAULT_CAP = 8

REFERENCE_ALPHAS = {
    0: (Fraction(-35), -64),
    1: (Fraction(56), -60),
    2: (Fraction(-28), -48),
    3: (Fraction(8), -28),
}


def _gens():
    return MultiPoly.gens(VARS, laurent=True)


def sigma_poly(a1: MultiPoly, a2: MultiPoly) -> MultiPoly:
    """``sigma(a1, a2) = a1 - a2^3 / 3``."""
    return a1 - a2 ** 3 * Fraction(1, 3)


def schur_sigma() -> MultiPoly:
    u1, u2, _ = _gens()
    return sigma_poly(u1, u2)


def theta_vector(m: int = 1) -> tuple[MultiPoly, MultiPoly]:
    """``m v = (m g^3 / 3, m g)``."""
    _, _, g = _gens()
    return g ** 3 * Fraction(m, 3), g * m


def monomial_g(c, k: int) -> MultiPoly:
    return MultiPoly(VARS, {(0, 0, k): c}, laurent=True)


@lru_cache(maxsize=None)
def sigma_derivatives_at_v() -> tuple[MultiPoly, MultiPoly]:
    """``(sigma_1(v), sigma_2(v))`` computed by differentiating and substituting."""
    s = schur_sigma()
    v1, v2 = theta_vector()
    sub = {"u1": v1, "u2": v2}
    return s.derivative("u1").compose(sub), s.derivative("u2").compose(sub)


def sigma2_v() -> MultiPoly:
    return sigma_derivatives_at_v()[1]


def lambda_of_v() -> MultiPoly:
    """``lambda = -sigma_1(v) / sigma_2(v)``, which comes out as ``g^-2``."""
    s1, s2 = sigma_derivatives_at_v()
    return (-s1).divexact(s2)


@lru_cache(maxsize=None)
def tau(n: int) -> MultiPoly:
    """``sigma(u + n v) / sigma_2(v)^(n^2)`` with ``A = B = 1``."""
    u1, u2, _ = _gens()
    v1, v2 = theta_vector(n)
    return sigma_poly(u1 + v1, u2 + v2) * sigma2_v() ** (-n * n)


@lru_cache(maxsize=None)
def psi(m: int) -> MultiPoly:
    """``a_m = sigma(m v) / sigma_2(v)^(m^2)`` computed from the polynomial sigma."""
    v1, v2 = theta_vector(m)
    return sigma_poly(v1, v2) * sigma2_v() ** (-m * m)


def psi_closed_form(m: int) -> MultiPoly:
    """``a_m = ((m - m^3)/3) (-1)^(m^2) g^(3 - 2 m^2)``."""
    sign = -1 if (m * m) % 2 else 1
    return monomial_g(Fraction(m - m ** 3, 3) * sign, 3 - 2 * m * m)


def psi_value(m: int, gamma) -> Fraction:
    gamma = Fraction(gamma)
    sign = -1 if (m * m) % 2 else 1
    return Fraction(m - m ** 3, 3) * sign * gamma ** (3 - 2 * m * m)


@dataclass(frozen=True)
class SymbolicCheck:
    identity: str
    parameters: dict
    residual: str
    passed: bool

    def to_json(self) -> dict:
        return {"identity": self.identity, **self.parameters, "residual": self.residual, "pass": self.passed}


def bolza_polynomial() -> RationalFunction:
    """``B(lambda; u) = lambda^2 - wp22(u) lambda - wp12(u)`` with ``wp_jk = -d_j d_k log sigma``."""
    s = schur_sigma()
    s1, s2 = s.derivative("u1"), s.derivative("u2")
    s12, s22 = s1.derivative("u2"), s2.derivative("u2")
    sq = RationalFunction(s * s)
    wp22 = -RationalFunction(s * s22 - s2 * s2) / sq
    wp12 = -RationalFunction(s * s12 - s1 * s2) / sq
    lam = lambda_of_v()
    return RationalFunction(lam * lam) - wp22 * lam - wp12


def addition_check() -> SymbolicCheck:
    """Residual of ``sigma(u+v) sigma(u-v) = sigma(u)^2 sigma_2(v)^2 B(lambda; u)``."""
    u1, u2, _ = _gens()
    v1, v2 = theta_vector()
    s = schur_sigma()
    lhs = RationalFunction(sigma_poly(u1 + v1, u2 + v2) * sigma_poly(u1 - v1, u2 - v2))
    rhs = RationalFunction(s * s * sigma2_v() ** 2) * bolza_polynomial()
    res = lhs - rhs
    return SymbolicCheck("addition", {}, res.to_str(), res.is_zero())


def alpha_formulas() -> dict[int, RationalFunction]:
    """The four recurrence coefficients expressed through ``sigma(k v)`` and ``sigma_2(v)``."""
    s = {k: RationalFunction(sigma_poly(*theta_vector(k))) for k in range(2, 7)}
    s2 = sigma2_v()

    def p(k):
        return RationalFunction(s2 ** k)

    a1 = s[6] * s[3] * s[3] / (s[4] * s[2] * s[2] * p(30))
    a3 = s[3] * s[5] / (s[2] * s[4] * p(14))
    a2 = s[4] * s[4] / (p(24) * s[2] * s[2]) * (1 - s[3] * s[3] * s[3] * s[5] / (s[4] * s[4] * s[4] * s[2]))
    a0 = -s[6] / (s[2] * p(32))
    return {0: a0, 1: a1, 2: a2, 3: a3}


def reference_alpha(j: int) -> MultiPoly:
    c, k = REFERENCE_ALPHAS[j]
    return monomial_g(c, k)


def alpha_check() -> list[SymbolicCheck]:
    out = []
    for j, val in alpha_formulas().items():
        res = val - RationalFunction(reference_alpha(j))
        out.append(SymbolicCheck("alpha", {"j": j, "value": val.to_str()}, res.to_str(), res.is_zero()))
    return out


def somos8_residual(n: int, alphas: dict | None = None) -> MultiPoly:
    """``tau_{n+4} tau_{n-4} - sum_j alpha_j tau_{n+j} tau_{n-j}`` for the symbolic tau."""
    if alphas is None:
        alphas = {j: reference_alpha(j) for j in range(4)}
    res = tau(n + 4) * tau(n - 4)
    for j in range(4):
        res = res - alphas[j] * tau(n + j) * tau(n - j)
    return res


def somos8_check(n_values=range(-4, 5)) -> list[SymbolicCheck]:
    out = []
    for n in n_values:
        r = somos8_residual(n)
        out.append(SymbolicCheck("somos8", {"n": n}, r.to_str(), r.is_zero()))
    return out


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def trilinear_residual(m: int, n: int, tau_fn=None) -> MultiPoly:
    """``a_2^2 a_m tau_n tau_{n+m} tau_{n-m}`` minus the 3x3 Hankel-type determinant."""
    t = tau if tau_fn is None else tau_fn
    a = psi
    lhs = a(2) * a(2) * a(m) * t(n) * t(n + m) * t(n - m)
    mat = [
        [a(m) * t(n - 2), a(m + 1) * t(n - 1), a(m + 2) * t(n)],
        [a(m - 1) * t(n - 1), a(m) * t(n), a(m + 1) * t(n + 1)],
        [a(m - 2) * t(n), a(m - 1) * t(n + 1), a(m) * t(n + 2)],
    ]
    return lhs - _det3(mat)


def trilinear_check(m: int, n: int, cap: int = DEFAULT_CAP, limit_u_zero: bool = False) -> SymbolicCheck:
    if abs(m) > cap or abs(n) > cap:
        raise CapExceededError(f"|m|, |n| must be <= {cap}", m=m, n=n, cap=cap)
    r = trilinear_residual(m, n, psi if limit_u_zero else None)
    name = "trilinear_psi" if limit_u_zero else "trilinear"
    return SymbolicCheck(name, {"m": m, "n": n}, r.to_str(), r.is_zero())


def verify_all(cap: int = DEFAULT_CAP) -> list[SymbolicCheck]:
    """Every symbolic identity of the cusp limit, in a fixed order."""
    out = [addition_check()]
    s2 = sigma2_v()
    out.append(SymbolicCheck("sigma2_v", {}, (s2 - monomial_g(-1, 2)).to_str(), s2 == monomial_g(-1, 2)))
    lam = lambda_of_v()
    out.append(SymbolicCheck("lambda_v", {}, (lam - monomial_g(1, -2)).to_str(), lam == monomial_g(1, -2)))
    for m in range(-cap, cap + 1):
        r = psi(m) - psi_closed_form(m)
        out.append(SymbolicCheck("psi_closed_form", {"m": m}, r.to_str(), r.is_zero()))
    out.extend(alpha_check())
    out.extend(somos8_check(range(-cap, cap + 1)))
    for m in range(2, cap + 1):
        for n in range(-cap, cap + 1):
            out.append(trilinear_check(m, n, cap))
    for m in range(2, cap + 1):
        out.append(trilinear_check(m, 0, cap, limit_u_zero=True))
    return out
