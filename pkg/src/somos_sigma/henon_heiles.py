"""Case (ii) Henon-Heiles system: Lax matrix, spectral curve and the Backlund map.

Everything is written in the reduced coordinates

    s = q1^2,   w = q1 p1,   q2,   p2

because the Lax matrix and both integrals only depend on these.  That keeps
rational states rational (``q1`` itself is usually a square root) and lets
one code path serve floats and Fractions alike.  ``HHState`` carries the
canonical ``(q1, q2, p1, p2)`` for real runs and converts to and from
``ReducedState``.

Polynomials in ``x`` are plain coefficient lists (low degree first) over
whatever number type the state uses.

The Backlund map conjugates ``L`` by the Darboux matrix

    M = [[-Y, Y^2 + x - lam], [1, -Y]],   det M = lam - x,

so ``L~ = M L adj(M) / (lam - x)``, which is polynomial exactly when ``Y``
is chosen as ``(mu + A(lam)) / C(lam)`` with ``(lam, mu)`` on the curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from .algebra import UPoly, rational_sqrt, to_rational
from .errors import BranchError, ConsistencyError, DomainError, ValidationError
from .genus2 import MumfordDivisor, QuinticCurve, curve_point, divisor_sequence

__all__ = [
    "HHParams",
    "HHState",
    "ReducedState",
    "h1",
    "h2",
    "lax_matrix",
    "spectral_curve",
    "bt_step",
    "separation_variables",
    "cross_check_jacobian",
]


@dataclass(frozen=True)
class HHParams:
    a: object = 0
    c: object = 0
    m: object = 0

    def __post_init__(self):
        _promote_ints(self, ("a", "c", "m"))

    def exact(self) -> "HHParams":
        return HHParams(*(to_rational(v) for v in (self.a, self.c, self.m)))


@dataclass(frozen=True)
class ReducedState:
    s: object  # q1^2
    w: object  # q1 p1
    q2: object
    p2: object

    def __post_init__(self):
        _promote_ints(self, ("s", "w", "q2", "p2"))

    def as_tuple(self) -> tuple:
        return (self.s, self.w, self.q2, self.p2)

    def to_json(self) -> dict:
        return {k: _num_json(v) for k, v in zip(("q1_sq", "q1p1", "q2", "p2"), self.as_tuple())}


@dataclass(frozen=True)
class HHState:
    q1: float
    q2: float
    p1: float
    p2: float

    def reduced(self) -> ReducedState:
        return ReducedState(self.q1 * self.q1, self.q1 * self.p1, self.q2, self.p2)

    def as_tuple(self) -> tuple:
        return (self.q1, self.q2, self.p1, self.p2)

    def to_json(self) -> dict:
        return {k: _num_json(v) for k, v in zip(("q1", "q2", "p1", "p2"), self.as_tuple())}


def _promote_ints(obj, names):
    # ints become Fractions so that exact data never drifts into floats
    for n in names:
        v = getattr(obj, n)
        if isinstance(v, int) and not isinstance(v, bool):
            object.__setattr__(obj, n, Fraction(v))


def _num_json(v):
    return str(v) if isinstance(v, (int, Fraction)) else float(v)


def _reduced(state) -> ReducedState:
    return state.reduced() if isinstance(state, HHState) else state


def _p1_sq_term(r: ReducedState, params: HHParams):
    """``p1^2 - m^2/q1^2 = (w^2 - m^2) / s``."""
    if r.s == 0:
        if params.m != 0:
            raise DomainError("q1 = 0 is singular when m != 0")
        raise DomainError("q1 = 0: p1 cannot be recovered from q1 p1")
    return (r.w * r.w - params.m * params.m) / r.s


# ---------------------------------------------------------------------------
# integrals
# ---------------------------------------------------------------------------


def h1(state, params: HHParams):
    r = _reduced(state)
    a, c = params.a, params.c
    kin = (_p1_sq_term(r, params) + r.p2 * r.p2) / 2
    return kin + r.q2 ** 3 + r.q2 * r.s / 2 - a * r.s / 2 + c * r.q2


def h2(state, params: HHParams):
    r = _reduced(state)
    a, c = params.a, params.c
    q2 = r.q2
    return (
        (q2 + 2 * a) * _p1_sq_term(r, params) / 4
        - r.w * r.p2 / 4
        - r.s * r.s / 32
        - (q2 * q2 - 2 * a * q2 + c + 4 * a * a) * r.s / 8
    )


# ---------------------------------------------------------------------------
# polynomial helpers (coefficient lists, low degree first)
# ---------------------------------------------------------------------------


def _padd(p, q):
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def _pneg(p):
    return [-c for c in p]


def _pmul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _peval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pdiv_linear(p, lam):
    """Divide by ``(lam - x)``: returns quotient and remainder ``p(lam)``."""
    # synthetic division by (x - lam), then flip sign
    n = len(p) - 1
    q = [0] * max(n, 1)
    acc = 0
    for k in range(n, 0, -1):
        acc = acc * lam + p[k]
        q[k - 1] = acc
    rem = acc * lam + p[0]
    return [-c for c in q], rem


def _trim(p, tol=0):
    p = list(p)
    while len(p) > 1 and abs(p[-1]) <= tol:
        p.pop()
    return p


# ---------------------------------------------------------------------------
# Lax matrix and spectral curve
# ---------------------------------------------------------------------------


def lax_entries(state, params: HHParams):
    """``(A, Bc, C)`` with ``L = [[A, Bc], [C, -A]]``."""
    r = _reduced(state)
    a, c = params.a, params.c
    A = [-r.w / 8, r.p2 / 2]
    Bc = [
        _p1_sq_term(r, params) / 8,
        (r.s + 4 * r.q2 * r.q2 - 8 * a * r.q2 + 16 * a * a + 4 * c) / 8,
        -r.q2 + 4 * a,
        2,
    ]
    C = [-r.s / 8, r.q2 + 2 * a, 2]
    return A, Bc, C


def lax_matrix(state, params: HHParams):
    A, Bc, C = lax_entries(state, params)
    return [[A, Bc], [C, _pneg(A)]]


def curve_polynomial(state, params: HHParams) -> list:
    """``f(x) = A^2 + Bc C`` so that ``det(L - y) = y^2 - f(x)``."""
    A, Bc, C = lax_entries(state, params)
    return _padd(_pmul(A, A), _pmul(Bc, C))


def spectral_curve(state, params: HHParams) -> dict:
    """Coefficients ``c0..c4`` of ``y^2 = 4x^5 + c4 x^4 + ... + c0`` from the integrals.

    ``c2`` carries the constant ``4a^3 + ac`` on top of ``h1 / 2``.
    """
    a, c, m = params.a, params.c, params.m
    return {
        "c0": m * m / 64,
        "c1": h2(state, params) / 2,
        "c2": h1(state, params) / 2 + 4 * a ** 3 + a * c,
        "c3": c + 12 * a * a,
        "c4": 12 * a,
    }


def quintic_curve(state: ReducedState, params: HHParams) -> QuinticCurve:
    """Exact spectral curve as a genus-2 curve object (rational data only)."""
    sc = spectral_curve(state, params.exact())
    return QuinticCurve(*(to_rational(sc[f"c{i}"]) for i in range(5)))


def exact_state(state) -> ReducedState:
    r = _reduced(state)
    return ReducedState(*(to_rational(v) for v in r.as_tuple()))


# ---------------------------------------------------------------------------
# Backlund transformation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BTResult:
    state: ReducedState
    Y: object
    mu: object
    lax_residual: float
    structure_residual: float


def _sqrt(v, exact: bool):
    if exact:
        r = rational_sqrt(to_rational(v))
        if r is None:
            raise DomainError(f"f(lambda) = {v} is not a rational square", f_lambda=str(v))
        return r
    if v < 0:
        raise BranchError("f(lambda) < 0: mu is not real", f_lambda=float(v))
    return math.sqrt(v)


def _is_exact(r: ReducedState, params: HHParams, lam) -> bool:
    vals = r.as_tuple() + (params.a, params.c, params.m, lam)
    return all(isinstance(v, (int, Fraction)) for v in vals)


def _matmul(X, Z):
    return [[_padd(_pmul(X[i][0], Z[0][j]), _pmul(X[i][1], Z[1][j])) for j in range(2)] for i in range(2)]


def _norm(Mx) -> float:
    return max(abs(float(c)) for row in Mx for p in row for c in p)


def _matsub(X, Z):
    return [[_padd(X[i][j], _pneg(Z[i][j])) for j in range(2)] for i in range(2)]


def darboux_matrix(Y, lam):
    return [[[-Y], [Y * Y - lam, 1]], [[1], [-Y]]]


def bt_step_reduced(state, params: HHParams, lam, mu_sign: int = 1, tol: float = 1e-9) -> BTResult:
    """One BT step with parameter ``lam`` and ``mu = mu_sign sqrt(f(lam))``.

    Returns the new reduced state together with the discrete Lax residual
    ``|L~ M - M L| / |M L|``, where ``L~`` is rebuilt from the extracted state.
    """
    r = _reduced(state)
    if mu_sign not in (1, -1):
        raise ValidationError("mu_sign must be +1 or -1")
    exact = _is_exact(r, params, lam)
    A, Bc, C = lax_entries(r, params)
    f = _padd(_pmul(A, A), _pmul(Bc, C))
    mu = mu_sign * _sqrt(_peval(f, lam), exact)
    c_lam = _peval(C, lam)
    if c_lam == 0 or (not exact and abs(c_lam) < 1e-300):
        raise DomainError("Bolza polynomial vanishes at lambda (divisor collision)", lam=str(lam))
    Y = (mu + _peval(A, lam)) / c_lam
    M = darboux_matrix(Y, lam)
    adj = [[[-Y], _pneg(M[0][1])], [[-1], [-Y]]]
    ML = _matmul(M, lax_matrix(r, params))
    P = _matmul(ML, adj)
    Lt = [[None, None], [None, None]]
    rem_size = 0.0
    for i in range(2):
        for j in range(2):
            q, rem = _pdiv_linear(P[i][j], lam)
            if exact and rem != 0:
                raise ConsistencyError("conjugated Lax matrix is not polynomial", entry=[i, j], remainder=str(rem))
            rem_size = max(rem_size, abs(float(rem)))
            Lt[i][j] = _trim(q)
    # read the new coordinates off the (1,1) and (2,1) entries
    L11, L21 = Lt[0][0] + [0, 0], Lt[1][0] + [0, 0, 0]
    s_new = -8 * L21[0]
    q2_new = L21[1] - 2 * params.a
    p2_new = 2 * L11[1]
    w_new = -8 * L11[0]
    new = ReducedState(s_new, w_new, q2_new, p2_new)
    if not exact and s_new < 0:
        raise BranchError("q1~^2 < 0: the real branch ends here", q1_sq=float(s_new))
    rebuilt = lax_matrix(new, params)
    diff = _matsub(_matmul(rebuilt, M), ML)
    scale = max(_norm(ML), 1e-300)
    lax_res = _norm(diff) / scale
    struct = max(_norm(_matsub(Lt, rebuilt)) / scale, rem_size / scale)
    if exact:
        if lax_res != 0 or struct != 0:
            raise ConsistencyError("BT output does not have the Lax structure", lax_residual=lax_res)
    elif struct > tol:
        raise ConsistencyError("BT output does not have the Lax structure", structure_residual=struct)
    return BTResult(new, Y, mu, lax_res, struct)


def bt_step(state: HHState, params: HHParams, lam, mu_sign: int = 1, q1_branch: int | None = None) -> HHState:
    """Canonical-coordinate BT step; ``q1_branch`` picks the sign of ``q1~``
    (default: keep the sign of the current ``q1``)."""
    res = bt_step_reduced(state.reduced(), params, lam, mu_sign)
    return canonical_state(res.state, q1_branch if q1_branch is not None else (1 if state.q1 >= 0 else -1))


def canonical_state(r: ReducedState, q1_branch: int = 1) -> HHState:
    if r.s <= 0:
        raise BranchError("q1^2 <= 0 has no real q1 with finite p1", q1_sq=float(r.s))
    q1 = math.copysign(math.sqrt(r.s), q1_branch)
    return HHState(q1, float(r.q2), float(r.w) / q1, float(r.p2))


def orbit(state: HHState, params: HHParams, lam, steps: int, mu_sign: int = 1) -> list[dict]:
    """Per-step records for ``steps`` real BT steps (state, integrals, Lax residual)."""
    out = []
    cur = state
    for k in range(steps + 1):
        rec = {"step": k, "state": cur.to_json(), "h1": h1(cur, params), "h2": h2(cur, params)}
        try:
            sv = separation_variables(cur, params)
            rec["separation_vars"] = [[_cjson(x), _cjson(y)] for x, y in sv]
        except DomainError:
            rec["separation_vars"] = None
        if k < steps:
            res = bt_step_reduced(cur.reduced(), params, lam, mu_sign)
            rec["lax_residual"] = res.lax_residual
            cur = canonical_state(res.state, 1 if cur.q1 >= 0 else -1)
        out.append(rec)
    return out


def _cjson(v):
    if isinstance(v, (int, Fraction)):
        return str(v)
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    return float(v)


# ---------------------------------------------------------------------------
# separation variables and the Jacobian picture
# ---------------------------------------------------------------------------


def separation_variables(state, params: HHParams):
    """Roots ``x1, x2`` of the (2,1) entry and ``y_j = A(x_j)``.

    The orientation of ``y`` is the one under which the ``(lam, mu)`` step adds
    ``(lam, -mu)`` to the divisor (see ``cross_check_jacobian``).

    Roots are returned as Fractions when rational, floats when real, complex
    otherwise.  Coincident roots raise DomainError.
    """
    r = _reduced(state)
    A, _, C = lax_entries(r, params)
    # 2x^2 + b x + c0 = 0
    b, c0 = C[1], C[0]
    disc = b * b - 8 * c0
    if disc == 0:
        raise DomainError("coincident separation variables (degenerate configuration)")
    exact = all(isinstance(v, (int, Fraction)) for v in (b, c0))
    root = rational_sqrt(to_rational(disc)) if exact else None
    if root is None:
        root = math.sqrt(disc) if disc > 0 else complex(0, math.sqrt(-disc))
    xs = ((-b + root) / 4, (-b - root) / 4)
    return [(x, _peval(A, x)) for x in xs]


def mumford_divisor(state, params: HHParams) -> MumfordDivisor:
    """``U = C/2`` (the Bolza polynomial) and ``V = A``: exact rational states only."""
    r = exact_state(state)
    A, _, C = lax_entries(r, params.exact())
    return MumfordDivisor(UPoly([Fraction(c) / 2 for c in C]), UPoly(A))


def state_from_divisor(D: MumfordDivisor, params: HHParams) -> ReducedState:
    """Inverse of ``mumford_divisor`` for degree-2 divisors."""
    if D.degree != 2:
        raise DomainError("divisor has degree < 2; the state is at infinity", degree=D.degree)
    a = to_rational(params.a)
    U, V = D.U, D.V
    return ReducedState(-16 * U[0], -8 * V[0], 2 * U[1] - 2 * a, 2 * V[1])


@dataclass(frozen=True)
class CrossCheckReport:
    steps: int
    matches: list
    first_failure: int | None
    bt_states: list
    divisor_states: list

    @property
    def passed(self) -> bool:
        return self.first_failure is None

    def to_json(self) -> dict:
        return {
            "steps": self.steps,
            "pass": self.passed,
            "first_failure": self.first_failure,
            "rows": [
                {"step": k, "bt": b.to_json(), "jacobian": d.to_json(), "match": ok}
                for k, (b, d, ok) in enumerate(zip(self.bt_states, self.divisor_states, self.matches))
            ],
        }


def cross_check_jacobian(state, params: HHParams, lam, mu_sign: int, n: int) -> CrossCheckReport:
    """Run ``n`` exact BT steps and compare with Cantor arithmetic.

    The BT with ``(lam, mu)`` adds the point ``(lam, -mu)`` to the separation
    divisor, so the divisor orbit uses ``P = (lam, -mu)`` and index ``k``.
    """
    params = params.exact()
    r = exact_state(state)
    lam = to_rational(lam)
    curve = quintic_curve(r, params)
    mu = mu_sign * _sqrt(curve.f(lam), True)
    P = curve_point(curve, lam, -mu)
    D0 = mumford_divisor(r, params)
    divs = divisor_sequence(curve, D0, P, 0, n + 1)
    bt_states, div_states, matches = [], [], []
    first = None
    cur = r
    for k in range(n + 1):
        d = divs[k]
        bt_states.append(cur)
        ok = d == mumford_divisor(cur, params)
        try:
            div_states.append(state_from_divisor(d, params))
        except DomainError:
            div_states.append(ReducedState(None, None, None, None))
            ok = False
        matches.append(ok)
        if not ok and first is None:
            first = k
        if k < n:
            cur = bt_step_reduced(cur, params, lam, mu_sign).state
    return CrossCheckReport(n, matches, first, bt_states, div_states)
