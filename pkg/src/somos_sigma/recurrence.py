"""Exact engines and identity checkers for bilinear recurrences.

Covers Somos-4, Ward's elliptic divisibility sequences, the general
``(N+2)``-term recurrence of order ``2N+2``, the second order map satisfied
by ``f_n = tau_{n+1} tau_{n-1} / tau_n^2`` and a symbolic Laurent test.

Sequences are always :class:`SequenceWindow` objects with an explicit integer
offset; nothing here is implicitly 0-based.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import MultiPoly, rational_str, to_rational
from .errors import CapExceededError, DomainError, NotDivisibleError, ValidationError, VanishingTauError

DEFAULT_LAURENT_CAP = 8


@dataclass(frozen=True)
class SequenceWindow:
    """Contiguous terms ``terms[k]`` at index ``offset + k``."""

    offset: int
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @classmethod
    def from_dict(cls, values: dict[int, object]) -> "SequenceWindow":
        lo, hi = min(values), max(values)
        missing = [k for k in range(lo, hi + 1) if k not in values]
        if missing:
            raise ValidationError(f"window is not contiguous; missing {missing[:5]}")
        return cls(lo, tuple(values[k] for k in range(lo, hi + 1)))

    @property
    def start(self) -> int:
        return self.offset

    @property
    def stop(self) -> int:
        """One past the last index."""
        return self.offset + len(self.terms)

    def indices(self) -> range:
        return range(self.start, self.stop)

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, n: int) -> bool:
        return self.start <= n < self.stop

    def __getitem__(self, n: int):
        if n not in self:
            raise IndexError(f"index {n} outside window [{self.start}, {self.stop})")
        return self.terms[n - self.offset]

    def get(self, n: int, default=None):
        return self[n] if n in self else default

    def zeros(self) -> list[int]:
        return [n for n in self.indices() if self[n] == 0]

    def items(self):
        return zip(self.indices(), self.terms)

    def slice(self, start: int, stop: int) -> "SequenceWindow":
        if start < self.start or stop > self.stop:
            raise IndexError(f"[{start}, {stop}) not inside [{self.start}, {self.stop})")
        return SequenceWindow(start, self.terms[start - self.offset : stop - self.offset])

    def map(self, fn) -> "SequenceWindow":
        return SequenceWindow(self.offset, tuple(fn(n, t) for n, t in self.items()))

    def to_json(self) -> dict:
        return {"offset": self.offset, "terms": [_num_str(t) for t in self.terms]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "numerator", "denominator"])
        for n, t in self.items():
            t = Fraction(t)
            w.writerow([n, t.numerator, t.denominator])
        return buf.getvalue()


def _num_str(t) -> str:
    return rational_str(t) if isinstance(t, (int, Fraction)) else str(t)


def gauge(window: SequenceWindow, A, B) -> SequenceWindow:
    """Apply ``tau_n -> A * B**n * tau_n``."""
    A, B = to_rational(A), to_rational(B)
    if A == 0 or B == 0:
        raise DomainError("gauge factors must be nonzero")
    return window.map(lambda n, t: A * B ** n * t)


@dataclass(frozen=True)
class Somos4Problem:
    """Coefficients and four consecutive seeds ``tau_offset .. tau_offset+3``."""

    alpha: Fraction
    beta: Fraction
    seeds: tuple
    offset: int = 0

    def __post_init__(self):
        if len(self.seeds) != 4:
            raise ValidationError("Somos-4 needs exactly four seeds")
        object.__setattr__(self, "alpha", to_rational(self.alpha))
        object.__setattr__(self, "beta", to_rational(self.beta))
        object.__setattr__(self, "seeds", tuple(to_rational(s) for s in self.seeds))

    def window(self) -> SequenceWindow:
        return SequenceWindow(self.offset, self.seeds)


@dataclass(frozen=True)
class SomosKSpec:
    """``tau_{n+N+1} tau_{n-N-1} = sum_j alpha_j tau_{n+j} tau_{n-j}`` with ``2N+2`` seeds."""

    coefficients: tuple
    seeds: tuple
    offset: int = 0

    def __post_init__(self):
        coeffs = tuple(to_rational(c) for c in self.coefficients)
        if len(coeffs) < 2:
            raise ValidationError("need N >= 1, i.e. at least two coefficients")
        if len(self.seeds) != 2 * len(coeffs):
            raise ValidationError(f"order {2 * len(coeffs)} recurrence needs {2 * len(coeffs)} seeds")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "seeds", tuple(to_rational(s) for s in self.seeds))

    @property
    def N(self) -> int:
        return len(self.coefficients) - 1

    @property
    def order(self) -> int:
        return 2 * self.N + 2


# ---------------------------------------------------------------------------
# Somos-4
# ---------------------------------------------------------------------------


def somos4_step(problem: Somos4Problem, window: SequenceWindow):
    """Next term after the last four of ``window``:

    ``tau_{n+2} = (alpha tau_{n+1} tau_{n-1} + beta tau_n^2) / tau_{n-2}``.
    """
    if len(window) < 4:
        raise ValidationError("window needs at least four terms")
    k = window.stop - 4
    t_m2, t_m1, t_0, t_p1 = (window[k + i] for i in range(4))
    if t_m2 == 0:
        raise VanishingTauError(k)
    return (problem.alpha * t_p1 * t_m1 + problem.beta * t_0 * t_0) / t_m2


def somos4_back_step(problem: Somos4Problem, window: SequenceWindow):
    """Term before the first four of ``window`` (the recurrence read backwards)."""
    if len(window) < 4:
        raise ValidationError("window needs at least four terms")
    k = window.start
    t_m1, t_0, t_p1, t_p2 = (window[k + i] for i in range(4))
    if t_p2 == 0:
        raise VanishingTauError(k + 3)
    return (problem.alpha * t_p1 * t_m1 + problem.beta * t_0 * t_0) / t_p2


def somos4_run(problem: Somos4Problem, start: int, stop: int) -> SequenceWindow:
    """Exact terms for indices ``start <= n < stop`` (either direction from the seeds)."""
    spec = SomosKSpec((problem.beta, problem.alpha), problem.seeds, problem.offset)
    return somos_k_run(spec, start, stop)


def somos_k_run(spec: SomosKSpec, start: int, stop: int) -> SequenceWindow:
    """Run the order ``2N+2`` recurrence forwards and backwards from the seeds."""
    N = spec.N
    order = spec.order
    a = spec.coefficients
    vals: dict[int, object] = {spec.offset + i: s for i, s in enumerate(spec.seeds)}
    hi = spec.offset + order
    while hi < stop:
        n = hi - N - 1
        d = vals[n - N - 1]
        if d == 0:
            raise VanishingTauError(n - N - 1)
        vals[hi] = sum(a[j] * vals[n + j] * vals[n - j] for j in range(N + 1)) / d
        hi += 1
    lo = spec.offset - 1
    while lo >= start:
        n = lo + N + 1
        d = vals[n + N + 1]
        if d == 0:
            raise VanishingTauError(n + N + 1)
        vals[lo] = sum(a[j] * vals[n + j] * vals[n - j] for j in range(N + 1)) / d
        lo -= 1
    return SequenceWindow(start, tuple(vals[k] for k in range(start, stop)))


def somos_k_residual(window: SequenceWindow, coefficients: Sequence, n: int):
    """``tau_{n+N+1} tau_{n-N-1} - sum_j alpha_j tau_{n+j} tau_{n-j}``."""
    N = len(coefficients) - 1
    t = window
    return t[n + N + 1] * t[n - N - 1] - sum(c * t[n + j] * t[n - j] for j, c in enumerate(coefficients))


# ---------------------------------------------------------------------------
# elliptic divisibility sequences
# ---------------------------------------------------------------------------


def eds_generate(t1, t2, t3, t4, start: int, stop: int) -> SequenceWindow:
    """Ward's sequence with ``tau_0 = 0``, extended by antisymmetry.

    ``tau_{n+2} tau_{n-2} = tau_2^2 tau_{n+1} tau_{n-1} - tau_1 tau_3 tau_n^2``.
    """
    t1, t2, t3, t4 = (to_rational(t) for t in (t1, t2, t3, t4))
    if t1 == 0:
        raise DomainError("tau_1 must be nonzero")
    alpha, beta = t2 * t2, -t1 * t3
    reach = max(abs(start), abs(stop - 1), 4)
    vals = {0: Fraction(0), 1: t1, 2: t2, 3: t3, 4: t4}
    for k in range(5, reach + 1):
        n = k - 2
        d = vals[n - 2]
        if d == 0:
            raise VanishingTauError(n - 2)
        vals[k] = (alpha * vals[n + 1] * vals[n - 1] + beta * vals[n] ** 2) / d
    for k in range(1, reach + 1):
        vals[-k] = -vals[k]
    window = SequenceWindow(start, tuple(vals[k] for k in range(start, stop)))
    # the antisymmetric extension must still satisfy the recurrence
    for n in range(-reach + 2, min(reach - 2, 2) + 1):
        lhs = vals[n + 2] * vals[n - 2]
        rhs = alpha * vals[n + 1] * vals[n - 1] + beta * vals[n] ** 2
        if lhs != rhs:
            raise ValidationError(f"antisymmetric extension fails the recurrence at n={n}")
    return window


def antisymmetry_check(window: SequenceWindow) -> "CheckReport":
    entries = []
    for n in window.indices():
        if n > 0 and -n in window:
            r = window[n] + window[-n]
            entries.append(CheckEntry((n, -n), r, r == 0))
    return CheckReport("antisymmetry", entries)


# ---------------------------------------------------------------------------
# identity reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckEntry:
    indices: tuple
    residual: object
    passed: bool

    def to_json(self) -> dict:
        return {"indices": list(self.indices), "residual": _num_str(self.residual), "pass": self.passed}


@dataclass
class CheckReport:
    """Outcome of an identity check, one entry per index tuple."""

    identity: str
    entries: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    assert_pass: bool = True

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self) -> list:
        return [e for e in self.entries if not e.passed]

    def to_json(self) -> dict:
        return {
            "identity": self.identity,
            "pass": self.passed,
            "asserted": self.assert_pass,
            "checked": len(self.entries),
            "skipped": list(self.skipped),
            "entries": [e.to_json() for e in self.entries],
        }


def hankel_residual(window: SequenceWindow, m: int, n: int):
    """``tau_{n+m} tau_{n-m} - (tau_m^2 tau_{n+1} tau_{n-1} - tau_{m-1} tau_{m+1} tau_n^2)``."""
    t = window
    need = (n + m, n - m, n + 1, n - 1, n, m, m - 1, m + 1)
    out = [k for k in need if k not in t]
    if out:
        raise IndexError(f"indices {sorted(set(out))} outside window")
    return t[n + m] * t[n - m] - (t[m] ** 2 * t[n + 1] * t[n - 1] - t[m - 1] * t[m + 1] * t[n] ** 2)


def hankel_check(window: SequenceWindow, pairs: Iterable[tuple[int, int]], asserted: bool = True) -> CheckReport:
    """Residuals of Ward's Hankel identity; for a non-EDS window pass ``asserted=False``."""
    entries = []
    for m, n in pairs:
        r = hankel_residual(window, m, n)
        entries.append(CheckEntry((m, n), r, r == 0))
    return CheckReport("hankel", entries, assert_pass=asserted)


def divisibility_check(window: SequenceWindow) -> CheckReport:
    """``tau_n | tau_m`` whenever ``n | m`` for positive indices in the window."""
    for n, t in window.items():
        if Fraction(t).denominator != 1:
            raise TypeError(f"term at index {n} is not an integer: {t}")
    entries = []
    top = window.stop - 1
    for n in range(1, top + 1):
        if n not in window:
            continue
        tn = int(window[n])
        for m in range(2 * n, top + 1, n):
            if m not in window:
                continue
            tm = int(window[m])
            if tn == 0:
                ok = tm == 0
                r = tm
            else:
                r = tm % abs(tn)
                ok = r == 0
            entries.append(CheckEntry((n, m), r, ok))
    return CheckReport("divisibility", entries)


# ---------------------------------------------------------------------------
# the second order map and its integral
# ---------------------------------------------------------------------------


def qrt_integral(f0, f1, alpha, beta):
    """``J = f0 f1 + alpha (1/f0 + 1/f1) + beta / (f0 f1)``."""
    if f0 == 0 or f1 == 0:
        raise DomainError("the integral is singular when f0 or f1 vanishes")
    return f0 * f1 + alpha * (1 / f0 + 1 / f1) + beta / (f0 * f1)


def map_iter(alpha, beta, f0, f1, start: int, stop: int) -> SequenceWindow:
    """Orbit of ``f_{n+1} = (alpha + beta/f_n) / (f_{n-1} f_n)`` with ``f_0, f_1`` given."""
    vals = {0: f0, 1: f1}
    for n in range(1, stop - 1):
        fn, fp = vals[n], vals[n - 1]
        if fn == 0 or fp == 0:
            raise DomainError(f"f vanishes at index {n if fn == 0 else n - 1}", index=n if fn == 0 else n - 1)
        vals[n + 1] = (alpha + beta / fn) / (fp * fn)
    for n in range(0, start, -1):
        fn, fq = vals[n], vals[n + 1]
        if fn == 0 or fq == 0:
            raise DomainError(f"f vanishes at index {n if fn == 0 else n + 1}", index=n if fn == 0 else n + 1)
        vals[n - 1] = (alpha + beta / fn) / (fq * fn)
    return SequenceWindow(start, tuple(vals[k] for k in range(start, stop)))


def f_from_tau(window: SequenceWindow) -> SequenceWindow:
    """``f_n = tau_{n+1} tau_{n-1} / tau_n^2`` on the interior of the window."""
    out = []
    for n in range(window.start + 1, window.stop - 1):
        if window[n] == 0:
            raise VanishingTauError(n)
        out.append(window[n + 1] * window[n - 1] / window[n] ** 2)
    return SequenceWindow(window.start + 1, tuple(out))


# ---------------------------------------------------------------------------
# Laurent phenomenon
# ---------------------------------------------------------------------------

LAURENT_VARS = ("alpha", "beta", "t0", "t1", "t2", "t3")


@dataclass(frozen=True)
class LaurentEntry:
    n: int
    terms: int
    denominator: str
    laurent: bool
    coefficients_polynomial: bool

    @property
    def passed(self) -> bool:
        return self.laurent and self.coefficients_polynomial

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": self.terms,
            "denominator": self.denominator,
            "laurent": self.laurent,
            "polynomial_in_alpha_beta": self.coefficients_polynomial,
            "pass": self.passed,
        }


@dataclass
class LaurentReport:
    entries: list
    values: dict

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def to_json(self) -> dict:
        return {"identity": "laurent", "pass": self.passed, "entries": [e.to_json() for e in self.entries]}


def symbolic_somos4(n_max: int, cap: int = DEFAULT_LAURENT_CAP) -> dict[int, MultiPoly]:
    """Symbolic ``tau_0 .. tau_{n_max}`` over ``Q[alpha, beta, t0^±1, .., t3^±1]``.

    Each new term is obtained by exact Laurent division; a failed division
    raises :class:`NotDivisibleError`.
    """
    if n_max > cap:
        raise CapExceededError(
            f"n_max={n_max} exceeds the cap {cap}; term counts grow superpolynomially, "
            "raise the cap explicitly if you really need it",
            n_max=n_max,
            cap=cap,
        )
    al, be, *seeds = MultiPoly.gens(LAURENT_VARS, laurent=True)
    tau = {i: s for i, s in enumerate(seeds)}
    for k in range(4, n_max + 1):
        n = k - 2
        tau[k] = (al * tau[n + 1] * tau[n - 1] + be * tau[n] * tau[n]).divexact(tau[n - 2])
    return tau


def laurent_check(n_max: int, cap: int = DEFAULT_LAURENT_CAP) -> LaurentReport:
    """Iterate Somos-4 symbolically and test each term for Laurentness."""
    try:
        tau = symbolic_somos4(n_max, cap)
    except NotDivisibleError as exc:
        raise DomainError(f"symbolic iteration left the Laurent ring: {exc}") from exc
    entries = []
    for k in range(4, n_max + 1):
        p = tau[k]
        mins = p.min_exponents()
        den = {v: -e for v, e in zip(LAURENT_VARS, mins) if e < 0}
        den_str = "*".join(f"{v}^{e}" for v, e in den.items()) or "1"
        poly_ab = mins[0] >= 0 and mins[1] >= 0
        entries.append(LaurentEntry(k, len(p), den_str, True, poly_ab))
    return LaurentReport(entries, tau)
