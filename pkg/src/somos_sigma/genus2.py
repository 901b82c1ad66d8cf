"""Exact genus-2 arithmetic on ``y^2 = 4x^5 + c4 x^4 + ... + c0``.

Divisors are Mumford pairs ``(U, V)`` reduced with Cantor's algorithm.  The
sequence ``D_n = D_0 + n (P - inf)`` gives Bolza values ``f_n = U_n(lambda)``
with ``lambda = x(P)``; from those a tau sequence is rebuilt and the order-8
bilinear recurrence is fitted and checked exactly.

Index convention: adding the point divisor of ``P`` moves ``n -> n + 1``;
adding its involution image ``(x, -y)`` moves ``n -> n - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .algebra import UPoly, solve_linear_exact, to_rational, upoly_gcd, upoly_xgcd
from .errors import (
    DegenerateCurveError,
    DomainError,
    InsufficientDataError,
    SingularSystemError,
    ValidationError,
    VanishingTauError,
)
from .recurrence import CheckEntry, CheckReport, SequenceWindow

X = UPoly.x()


@dataclass(frozen=True)
class QuinticCurve:
    c0: Fraction
    c1: Fraction
    c2: Fraction
    c3: Fraction
    c4: Fraction

    @property
    def coefficients(self) -> tuple:
        return (self.c0, self.c1, self.c2, self.c3, self.c4)

    @property
    def f(self) -> UPoly:
        return UPoly(self.coefficients + (Fraction(4),))

    def contains(self, x, y) -> bool:
        return to_rational(y) ** 2 == self.f(to_rational(x))

    def to_json(self) -> dict:
        return {f"c{i}": str(c) for i, c in enumerate(self.coefficients)}


def curve_validate(c0, c1, c2, c3, c4) -> QuinticCurve:
    """Build the curve, rejecting quintics with repeated roots."""
    curve = QuinticCurve(*(to_rational(c) for c in (c0, c1, c2, c3, c4)))
    f = curve.f
    g = upoly_gcd(f, f.derivative())
    if g.degree > 0:
        raise DegenerateCurveError(
            f"f has repeated roots: gcd(f, f') = {g.to_str()}",
            repeated_factor=g.to_str(),
        )
    return curve


def shift_curve(curve: QuinticCurve, s) -> QuinticCurve:
    """The curve in the variable ``x' = x - s``, i.e. ``f'(x') = f(x' + s)``."""
    s = to_rational(s)
    g = UPoly.const(0)
    for c in reversed(curve.f.coeffs):
        g = g * (X + s) + c
    return QuinticCurve(*g.coeffs[:5])


def remove_c4(curve: QuinticCurve) -> tuple[QuinticCurve, Fraction]:
    """Shift ``x`` so that ``c4 = 0``; returns the new curve and the shift."""
    s = -curve.c4 / 20
    return shift_curve(curve, s), s


@dataclass(frozen=True)
class CurvePoint:
    x: Fraction
    y: Fraction

    def involution(self) -> "CurvePoint":
        return CurvePoint(self.x, -self.y)


def curve_point(curve: QuinticCurve, x, y) -> CurvePoint:
    x, y = to_rational(x), to_rational(y)
    if not curve.contains(x, y):
        raise ValidationError(f"({x}, {y}) is not on the curve", x=str(x), y=str(y))
    return CurvePoint(x, y)


@dataclass(frozen=True)
class MumfordDivisor:
    U: UPoly
    V: UPoly

    @property
    def degree(self) -> int:
        return self.U.degree

    def is_identity(self) -> bool:
        return self.U.degree == 0

    def __neg__(self) -> "MumfordDivisor":
        return MumfordDivisor(self.U, -self.V)

    def to_json(self) -> dict:
        return {"U": [str(c) for c in self.U.coeffs], "V": [str(c) for c in self.V.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "MumfordDivisor":
        return cls(UPoly(data["U"]), UPoly(data.get("V", [])))


IDENTITY = MumfordDivisor(UPoly.const(1), UPoly())


def check_divisor(curve: QuinticCurve, D: MumfordDivisor) -> MumfordDivisor:
    """Validate the Mumford conditions; returns ``D`` unchanged."""
    U, V = D.U, D.V
    if U.is_zero() or U.lc() != 1:
        raise ValidationError("U must be monic")
    if U.degree > 2:
        raise ValidationError("U must have degree <= 2")
    if V.degree >= U.degree:
        raise ValidationError("deg V must be < deg U")
    if not ((V * V - curve.f) % U).is_zero():
        raise ValidationError("V^2 - f is not divisible by U")
    return D


def point_divisor(P: CurvePoint) -> MumfordDivisor:
    return MumfordDivisor(X - P.x, UPoly.const(P.y))


def two_point_divisor(curve: QuinticCurve, P1: CurvePoint, P2: CurvePoint) -> MumfordDivisor:
    """Reduced divisor of ``P1 + P2 - 2 inf`` (via Cantor, so doubling and inverses are handled)."""
    return cantor_add(curve, point_divisor(P1), point_divisor(P2))


def _compose(curve: QuinticCurve, D1: MumfordDivisor, D2: MumfordDivisor) -> MumfordDivisor:
    U1, V1, U2, V2 = D1.U, D1.V, D2.U, D2.V
    d1, e1, e2 = upoly_xgcd(U1, U2)
    d, c1, c2 = upoly_xgcd(d1, V1 + V2)
    s1, s2, s3 = c1 * e1, c1 * e2, c2
    U = (U1 * U2) // (d * d)
    V = ((s1 * U1 * V2 + s2 * U2 * V1 + s3 * (V1 * V2 + curve.f)) // d) % U
    return MumfordDivisor(U, V)


def _reduce(curve: QuinticCurve, D: MumfordDivisor) -> MumfordDivisor:
    U, V = D.U, D.V
    while U.degree > 2:
        U = ((curve.f - V * V) // U).monic()
        V = (-V) % U
    return MumfordDivisor(U.monic(), V % U.monic())


def cantor_add(curve: QuinticCurve, D1: MumfordDivisor, D2: MumfordDivisor) -> MumfordDivisor:
    """Reduced representative of ``D1 + D2`` in the Jacobian."""
    return _reduce(curve, _compose(curve, D1, D2))


def scalar_mul(curve: QuinticCurve, D: MumfordDivisor, n: int) -> MumfordDivisor:
    """``n * D`` by double-and-add."""
    if n < 0:
        return scalar_mul(curve, -D, -n)
    acc, base = IDENTITY, D
    while n:
        if n & 1:
            acc = cantor_add(curve, acc, base)
        base = cantor_add(curve, base, base)
        n >>= 1
    return acc


def divisor_sequence(curve: QuinticCurve, D0: MumfordDivisor, P: CurvePoint, start: int, stop: int) -> SequenceWindow:
    """``D_n = D_0 + n (P - inf)`` for ``start <= n < stop`` (``start <= 0 < stop`` not required)."""
    step = point_divisor(P)
    back = -step
    vals = {0: D0}
    for n in range(0, stop - 1):
        vals[n + 1] = cantor_add(curve, vals[n], step)
    for n in range(0, start, -1):
        vals[n - 1] = cantor_add(curve, vals[n], back)
    return SequenceWindow(start, tuple(vals[n] for n in range(start, stop)))


def theta_crossings(divisors: SequenceWindow) -> list[int]:
    """Indices where the reduced divisor has fewer than two points."""
    return [n for n, D in divisors.items() if D.degree < 2]


@dataclass(frozen=True)
class BolzaSequence:
    """``f_n = U_n(lambda)``; ``None`` marks theta-divisor indices."""

    lam: Fraction
    window: SequenceWindow

    @property
    def gaps(self) -> list[int]:
        return [n for n, f in self.window.items() if f is None]

    def gap_free_runs(self) -> list[tuple[int, int]]:
        runs, cur = [], None
        for n, f in self.window.items():
            if f is None:
                if cur is not None:
                    runs.append((cur, n))
                cur = None
            elif cur is None:
                cur = n
        if cur is not None:
            runs.append((cur, self.window.stop))
        return runs

    def to_json(self) -> dict:
        return {
            "lambda": str(self.lam),
            "offset": self.window.offset,
            "f": [None if f is None else str(f) for f in self.window.terms],
            "gaps": self.gaps,
        }


def bolza_values(divisors: SequenceWindow, lam) -> BolzaSequence:
    lam = to_rational(lam)
    return BolzaSequence(lam, divisors.map(lambda n, D: D.U(lam) if D.degree == 2 else None))


def bolza_seq(curve: QuinticCurve, D0: MumfordDivisor, P: CurvePoint, start: int, stop: int) -> BolzaSequence:
    """Bolza values along ``D_0 + n(P - inf)``; ``lambda`` is tied to ``x(P)``."""
    return bolza_values(divisor_sequence(curve, D0, P, start, stop), P.x)


def y_from_divisor(curve: QuinticCurve, D: MumfordDivisor, x0) -> Fraction:
    """The ``y`` coordinate of the support point of ``D`` above ``x0``, i.e. ``V(x0)``."""
    x0 = to_rational(x0)
    if D.U(x0) != 0:
        raise DomainError(f"x = {x0} is not a root of U")
    y = D.V(x0)
    assert y * y == curve.f(x0)
    return y


# ---------------------------------------------------------------------------
# tau reconstruction and the order-8 recurrence
# ---------------------------------------------------------------------------


def tau_from_f(f: SequenceWindow, start: int | None = None, stop: int | None = None, anchor: int | None = None) -> SequenceWindow:
    """Tau values with ``f_n = tau_{n+1} tau_{n-1} / tau_n^2``.

    Uses ``f_n`` for ``start <= n < stop`` and returns tau on
    ``[start - 1, stop + 1)``, gauged by ``tau_anchor = tau_{anchor+1} = 1``
    (default ``anchor = start``).  Any other anchor changes tau by
    ``A B^n`` only.
    """
    start = f.start if start is None else start
    stop = f.stop if stop is None else stop
    anchor = start if anchor is None else anchor
    if not (start - 1 <= anchor < stop):
        raise ValidationError("anchor outside the reconstructed range")
    for n in range(start, stop):
        if f[n] is None:
            raise DomainError(f"theta-divisor gap at index {n} inside the requested range", index=n)
    tau = {anchor: Fraction(1), anchor + 1: Fraction(1)}
    for n in range(anchor + 1, stop):
        if tau[n - 1] == 0:
            raise VanishingTauError(n - 1)
        tau[n + 1] = f[n] * tau[n] ** 2 / tau[n - 1]
    for n in range(anchor, start - 1, -1):
        if tau[n + 1] == 0:
            raise VanishingTauError(n + 1)
        tau[n - 1] = f[n] * tau[n] ** 2 / tau[n + 1]
    return SequenceWindow(start - 1, tuple(tau[n] for n in range(start - 1, stop + 1)))


def _somos8_row(tau: SequenceWindow, n: int):
    return [tau[n + j] * tau[n - j] for j in range(4)], tau[n + 4] * tau[n - 4]


def usable_rows(tau: SequenceWindow) -> list[int]:
    """Centres ``n`` whose stencil ``n-4 .. n+4`` lies in the window with no zero term."""
    return [
        n
        for n in range(tau.start + 4, tau.stop - 4)
        if all(tau[n + k] != 0 for k in range(-4, 5))
    ]


def fit_somos8(tau: SequenceWindow, rows: Sequence[int] | None = None) -> tuple[Fraction, ...]:
    """Exact ``(alpha_0, .., alpha_3)`` with ``tau_{n+4} tau_{n-4} = sum_j alpha_j tau_{n+j} tau_{n-j}``.

    With ``rows=None`` the first four usable rows are tried, then later
    4-subsets until a nonsingular system is found.
    """
    if rows is not None:
        rows = list(rows)
        if len(rows) != 4:
            raise ValidationError("exactly four rows are needed")
        candidates = [rows]
    else:
        ok = usable_rows(tau)
        if len(ok) < 4:
            raise InsufficientDataError(f"only {len(ok)} usable rows; need 4", usable=len(ok))
        candidates = (list(c) for c in combinations(ok, 4))
    last = None
    for cand in candidates:
        M, rhs = zip(*(_somos8_row(tau, n) for n in cand))
        try:
            return tuple(solve_linear_exact(M, rhs))
        except SingularSystemError as exc:
            last = exc
            if rows is not None:
                raise
    raise last


def verify_somos8(tau: SequenceWindow, alpha: Sequence) -> CheckReport:
    entries, skipped = [], []
    for n in range(tau.start, tau.stop):
        if n - 4 in tau and n + 4 in tau:
            row, rhs = _somos8_row(tau, n)
            r = rhs - sum(a * t for a, t in zip(alpha, row))
            entries.append(CheckEntry((n,), r, r == 0))
        else:
            skipped.append(n)
    return CheckReport("somos8", entries, skipped)


def sixth_order_residual(f: SequenceWindow, alpha: Sequence, n: int):
    """LHS minus RHS of the sixth order difference equation for ``f_n``."""
    def pair(k):
        return f[n + k] * f[n - k]

    fn = f[n]
    lhs = fn ** 4
    for k in range(1, 4):
        lhs *= pair(k) ** (4 - k)
    rhs = alpha[0]
    for j in range(1, 4):
        term = alpha[j] * fn ** j
        for k in range(1, j):
            term *= pair(k) ** (j - k)
        rhs += term
    return lhs - rhs


def verify_sixth_order(f: SequenceWindow, alpha: Sequence) -> CheckReport:
    entries, skipped = [], []
    for n in range(f.start, f.stop):
        stencil = range(n - 3, n + 4)
        if all(k in f and f[k] is not None for k in stencil):
            r = sixth_order_residual(f, alpha, n)
            entries.append(CheckEntry((n,), r, r == 0))
        else:
            skipped.append(n)
    return CheckReport("sixth_order", entries, skipped)


WORKED_CURVE = (1, -4, 0, 0, 0)
