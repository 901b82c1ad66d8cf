"""Exact arithmetic: rationals, dense univariate and sparse multivariate polynomials.

Rationals are :class:`fractions.Fraction`.  ``UPoly`` is a dense univariate
polynomial used by the genus-2 and Lax-matrix code; ``MultiPoly`` is a sparse
multivariate polynomial which may carry negative exponents when built in
Laurent mode.  Canonical term order is graded lexicographic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, NotDivisibleError, SingularSystemError, ValidationError

Rational = Fraction


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValidationError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational: {value!r}") from exc
    raise ValidationError(f"not an exact rational: {value!r}")


def rational_str(q: Fraction) -> str:
    """Canonical text form ``p/q`` (``p`` alone when the denominator is 1)."""
    return str(Fraction(q))


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational square, else None."""
    q = Fraction(q)
    if q < 0:
        return None
    from math import isqrt

    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


# ---------------------------------------------------------------------------
# dense univariate polynomials
# ---------------------------------------------------------------------------


class UPoly:
    """Dense univariate polynomial over Q, coefficients low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_rational(c) if not isinstance(c, Fraction) else c for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "UPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "UPoly":
        return cls((c,))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UPoly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UPoly({[rational_str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return self.to_str()

    def to_str(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c:
                parts.append(f"{rational_str(c)}*{var}^{k}" if k else rational_str(c))
        return " + ".join(parts)

    def _coerce(self, other) -> "UPoly":
        if isinstance(other, UPoly):
            return other
        return UPoly.const(other)

    def __add__(self, other) -> "UPoly":
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return UPoly(self[k] + o[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return UPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "UPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "UPoly":
        if not isinstance(other, UPoly):
            c = to_rational(other)
            return UPoly(c * a for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return UPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UPoly":
        out = UPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other: "UPoly") -> tuple["UPoly", "UPoly"]:
        b = self._coerce(other)
        if b.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = b.degree
        lcb = b.lc()
        q = [Fraction(0)] * max(len(rem) - db, 0)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c:
                t = c / lcb
                q[k - db] = t
                for j in range(db + 1):
                    rem[k - db + j] -= t * b.coeffs[j]
        return UPoly(q), UPoly(rem[:db] if db > 0 else [])

    def __floordiv__(self, other) -> "UPoly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "UPoly":
        return divmod(self, other)[1]

    def monic(self) -> "UPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lc())

    def derivative(self) -> "UPoly":
        return UPoly(k * c for k, c in enumerate(self.coeffs) if k)


def upoly_xgcd(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly, UPoly]:
    """Return monic ``g`` and ``s, t`` with ``s*a + t*b = g``."""
    r0, r1 = a, b
    s0, s1 = UPoly.const(1), UPoly()
    t0, t1 = UPoly(), UPoly.const(1)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = 1 / r0.lc()
    return r0 * inv, s0 * inv, t0 * inv


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    return upoly_xgcd(a, b)[0]


# ---------------------------------------------------------------------------
# sparse multivariate (Laurent) polynomials
# ---------------------------------------------------------------------------


def _grlex_key(exps: tuple[int, ...]):
    return (sum(exps), exps)


class MultiPoly:
    """Sparse polynomial ``{exponent tuple: Fraction}`` in named variables.

    With ``laurent=True`` negative exponents are allowed; otherwise any
    operation producing one raises :class:`DomainError`.
    """

    __slots__ = ("variables", "terms", "laurent")

    def __init__(self, variables: Sequence[str], terms: Mapping | None = None, laurent: bool = False):
        self.variables = tuple(variables)
        self.laurent = laurent
        nv = len(self.variables)
        clean: dict[tuple[int, ...], Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nv:
                raise ValidationError(f"exponent vector {e} does not match {nv} variables")
            if not laurent and any(k < 0 for k in e):
                raise DomainError(f"negative exponent {e} in polynomial mode")
            c = to_rational(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def _raw(cls, variables, terms, laurent) -> "MultiPoly":
        obj = object.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        obj.laurent = laurent
        return obj

    @classmethod
    def const(cls, variables: Sequence[str], c, laurent: bool = False) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): c}, laurent)

    @classmethod
    def var(cls, variables: Sequence[str], name: str, power: int = 1, laurent: bool = False) -> "MultiPoly":
        e = [0] * len(variables)
        e[list(variables).index(name)] = power
        return cls(variables, {tuple(e): 1}, laurent or power < 0)

    @classmethod
    def gens(cls, variables: Sequence[str], laurent: bool = False) -> list["MultiPoly"]:
        return [cls.var(variables, v, laurent=laurent) for v in variables]

    # -- basic protocol ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == MultiPoly.const(self.variables, other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"MultiPoly({self.variables}, {self.to_str()!r}, laurent={self.laurent})"

    def __str__(self) -> str:
        return self.to_str()

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def to_str(self) -> str:
        """Canonical serialisation: grlex-descending, every exponent explicit."""
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            parts.append(f"{rational_str(c)}*{mono}" if mono else rational_str(c))
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "laurent": self.laurent,
            "terms": [[list(e), rational_str(c)] for e, c in self.sorted_terms()],
        }

    def leading_term(self) -> tuple[tuple[int, ...], Fraction]:
        if not self.terms:
            raise DomainError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def min_exponents(self) -> tuple[int, ...]:
        if not self.terms:
            return (0,) * len(self.variables)
        return tuple(min(col) for col in zip(*self.terms))

    def max_exponents(self) -> tuple[int, ...]:
        if not self.terms:
            return (0,) * len(self.variables)
        return tuple(max(col) for col in zip(*self.terms))

    def content(self) -> Fraction:
        """Positive rational ``c`` such that ``self / c`` has coprime integer coefficients."""
        if not self.terms:
            return Fraction(0)
        nums = reduce(gcd, (c.numerator for c in self.terms.values()))
        dens = reduce(lcm, (c.denominator for c in self.terms.values()))
        return Fraction(abs(nums), dens)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if self.variables != other.variables:
            raise ValidationError(f"variable mismatch {self.variables} vs {other.variables}")

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(self.variables, to_rational(other), self.laurent)

    def __add__(self, other) -> "MultiPoly":
        o = self._coerce(other)
        terms = dict(self.terms)
        for e, c in o.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MultiPoly._raw(self.variables, terms, self.laurent or o.laurent)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.variables, {e: -c for e, c in self.terms.items()}, self.laurent)

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = to_rational(other)
            if not c:
                return MultiPoly._raw(self.variables, {}, self.laurent)
            return MultiPoly._raw(self.variables, {e: c * v for e, v in self.terms.items()}, self.laurent)
        self._check(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return MultiPoly._raw(self.variables, terms, self.laurent or other.laurent)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            if not self.is_monomial():
                raise DomainError("only monomials have Laurent inverses")
            (e, c), = self.terms.items()
            return MultiPoly(self.variables, {tuple(-a * -k for a in e): Fraction(1) / c ** -k}, True)
        out = MultiPoly.const(self.variables, 1, self.laurent)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale_monomial(self, shift: Sequence[int]) -> "MultiPoly":
        """Multiply by the monomial with exponent vector ``shift``."""
        terms = {tuple(a + b for a, b in zip(e, shift)): c for e, c in self.terms.items()}
        laurent = self.laurent or any(k < 0 for e in terms for k in e)
        return MultiPoly._raw(self.variables, terms, laurent)

    def derivative(self, name: str) -> "MultiPoly":
        i = self.variables.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                terms[tuple(ne)] = c * e[i]
        return MultiPoly._raw(self.variables, terms, self.laurent)

    def evaluate(self, point: Sequence) -> Fraction:
        return poly_eval(self, point)

    def substitute(self, values: Mapping[str, object]) -> "MultiPoly":
        """Substitute rationals for some variables, keeping the variable list."""
        idx = {self.variables.index(k): to_rational(v) for k, v in values.items()}
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            ne = list(e)
            for i, val in idx.items():
                if ne[i] < 0 and val == 0:
                    raise DomainError(f"zero substituted into negative power of {self.variables[i]}")
                c = c * val ** ne[i]
                ne[i] = 0
            if c:
                key = tuple(ne)
                s = out.get(key, 0) + c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return MultiPoly._raw(self.variables, out, self.laurent)

    def compose(self, mapping: Mapping[str, "MultiPoly"]) -> "MultiPoly":
        """Replace variables by polynomials in the same variable list.

        Negative powers are only allowed for variables left unmapped or mapped
        to monomials.
        """
        gens = MultiPoly.gens(self.variables, laurent=self.laurent)
        images = [mapping.get(v, g) for v, g in zip(self.variables, gens)]
        cache: dict[tuple[int, int], MultiPoly] = {}

        def power(i: int, k: int) -> MultiPoly:
            if (i, k) not in cache:
                cache[(i, k)] = images[i] ** k
            return cache[(i, k)]

        out = MultiPoly._raw(self.variables, {}, self.laurent or any(p.laurent for p in images))
        for e, c in self.terms.items():
            term = MultiPoly.const(self.variables, c, out.laurent)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def to_polynomial_mode(self) -> "MultiPoly":
        if any(k < 0 for e in self.terms for k in e):
            raise DomainError("negative exponents present")
        return MultiPoly._raw(self.variables, dict(self.terms), False)

    def divexact(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient ``self / other`` in the (Laurent) polynomial ring.

        Raises :class:`NotDivisibleError` if the quotient is not a (Laurent)
        polynomial.  In polynomial mode the quotient must also be a polynomial.
        """
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return MultiPoly._raw(self.variables, {}, self.laurent or other.laurent)
        sn, sd = self.min_exponents(), other.min_exponents()
        num = self.scale_monomial([-k for k in sn])
        den = other.scale_monomial([-k for k in sd])
        q = _poly_divexact(num, den)
        shift = [a - b for a, b in zip(sn, sd)]
        out = q.scale_monomial(shift)
        laurent = self.laurent or other.laurent
        if not laurent and any(k < 0 for e in out.terms for k in e):
            raise NotDivisibleError("quotient needs negative exponents in polynomial mode")
        out.laurent = laurent
        return out


def _poly_divexact(num: MultiPoly, den: MultiPoly) -> MultiPoly:
    """Exact division of genuine polynomials via grlex leading terms."""
    lt_e, lt_c = den.leading_term()
    rem = dict(num.terms)
    quot: dict[tuple[int, ...], Fraction] = {}
    den_items = list(den.terms.items())
    while rem:
        e = max(rem, key=_grlex_key)
        c = rem[e]
        qe = tuple(a - b for a, b in zip(e, lt_e))
        if any(k < 0 for k in qe):
            raise NotDivisibleError("leading monomial not divisible")
        qc = c / lt_c
        quot[qe] = qc
        for de, dc in den_items:
            key = tuple(a + b for a, b in zip(qe, de))
            s = rem.get(key, 0) - qc * dc
            if s:
                rem[key] = s
            else:
                rem.pop(key, None)
    return MultiPoly._raw(num.variables, quot, num.laurent)


def poly_eval(p: MultiPoly, point: Sequence) -> Fraction:
    """Exact value of ``p`` at ``point``."""
    if len(point) != len(p.variables):
        raise ValidationError(f"point has {len(point)} coordinates, expected {len(p.variables)}")
    xs = [to_rational(v) for v in point]
    total = Fraction(0)
    for e, c in p.terms.items():
        term = c
        for x, k in zip(xs, e):
            if k < 0 and x == 0:
                raise DomainError("zero substituted into a negative-exponent variable")
            if k:
                term *= x ** k
        total += term
    return total


def multipoly_to_upoly(p: MultiPoly) -> UPoly:
    if len(p.variables) != 1:
        raise ValidationError("expected a univariate polynomial")
    if any(e[0] < 0 for e in p.terms):
        raise DomainError("polynomial division needs polynomial mode")
    deg = max((e[0] for e in p.terms), default=-1)
    cs = [Fraction(0)] * (deg + 1)
    for e, c in p.terms.items():
        cs[e[0]] = c
    return UPoly(cs)


def upoly_to_multipoly(u: UPoly, var: str = "x") -> MultiPoly:
    return MultiPoly((var,), {(k,): c for k, c in enumerate(u.coeffs)})


def poly_divmod(a: MultiPoly, b: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """Univariate division with remainder; ``a = q*b + r`` and ``deg r < deg b``."""
    if a.variables != b.variables:
        raise ValidationError("operands must share their variable")
    ua, ub = multipoly_to_upoly(a), multipoly_to_upoly(b)
    if ub.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    q, r = divmod(ua, ub)
    var = a.variables[0]
    return upoly_to_multipoly(q, var), upoly_to_multipoly(r, var)


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


class RationalFunction:
    """Quotient of two MultiPolys, content-normalised.

    Monomial denominators are folded into the numerator when either side is
    in Laurent mode, so a Laurent polynomial always has denominator 1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.const(num.variables, 1, num.laurent)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num, self.den = _normalise(num, den)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.num.variables

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den == 1

    def _lift(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, MultiPoly):
            return RationalFunction(other)
        return RationalFunction(MultiPoly.const(self.variables, to_rational(other), self.num.laurent))

    def __add__(self, other) -> "RationalFunction":
        o = self._lift(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "RationalFunction":
        return self._lift(other) - self

    def __mul__(self, other) -> "RationalFunction":
        o = self._lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __eq__(self, other) -> bool:
        o = self._lift(other)
        return (self - o).is_zero()

    __hash__ = None  # mutable-looking equality; not hashable

    def __repr__(self) -> str:
        return f"RationalFunction({self.num.to_str()!r}, {self.den.to_str()!r})"

    def to_str(self) -> str:
        if self.is_polynomial():
            return self.num.to_str()
        return f"({self.num.to_str()}) / ({self.den.to_str()})"

    def evaluate(self, point: Sequence) -> Fraction:
        d = poly_eval(self.den, point)
        if d == 0:
            raise DomainError("denominator vanishes at point")
        return poly_eval(self.num, point) / d


def _normalise(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    laurent = num.laurent or den.laurent
    if num.is_zero():
        return MultiPoly._raw(num.variables, {}, laurent), MultiPoly.const(num.variables, 1, laurent)
    if den.is_monomial() and laurent:
        (e, c), = den.terms.items()
        num = num.scale_monomial([-k for k in e]) * (1 / c)
        num.laurent = True
        return num, MultiPoly.const(num.variables, 1, True)
    try:
        q = num.divexact(den)
        q.laurent = laurent
        return q, MultiPoly.const(num.variables, 1, laurent)
    except NotDivisibleError:
        pass
    cn, cd = num.content(), den.content()
    num, den = num * (1 / cn), den * (1 / cd)
    ratio = cn / cd
    if den.leading_term()[1] < 0:
        den, ratio = -den, -ratio
    return num * ratio, den


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------


def _bareiss_rank_and_echelon(rows: list[list[int]]) -> tuple[int, list[list[int]], list[int]]:
    """Fraction-free elimination on an integer matrix (in place).

    Returns rank, the eliminated matrix and pivot columns.
    """
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    prev = 1
    r = 0
    pivots = []
    for col in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        for i in range(r + 1, m):
            a = rows[i][col]
            rows[i] = [(p * rows[i][j] - a * rows[r][j]) // prev for j in range(ncols)]
        prev = p
        pivots.append(col)
        r += 1
    return r, rows, pivots


def matrix_rank(M: Sequence[Sequence]) -> int:
    rows = _integer_rows([list(map(to_rational, row)) for row in M])
    return _bareiss_rank_and_echelon(rows)[0]


def _integer_rows(rows: list[list[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        den = reduce(lcm, (c.denominator for c in row), 1)
        out.append([int(c * den) for c in row])
    return out


def solve_linear_exact(M: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve the square system ``M x = rhs`` exactly.

    Rows are cleared to integers and reduced with Bareiss elimination.
    A singular matrix raises :class:`SingularSystemError` carrying the rank.
    """
    n = len(M)
    if any(len(row) != n for row in M) or len(rhs) != n:
        raise ValidationError("solve_linear_exact needs a square system")
    aug = [[to_rational(c) for c in row] + [to_rational(b)] for row, b in zip(M, rhs)]
    rows = _integer_rows(aug)
    rank_aug, ech, pivots = _bareiss_rank_and_echelon(rows)
    coeff_rank = sum(1 for p in pivots if p < n)
    if coeff_rank < n:
        raise SingularSystemError(coeff_rank, n)
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(ech[i][n])
        for j in range(i + 1, n):
            s -= ech[i][j] * x[j]
        x[i] = s / ech[i][i]
    return x


def det_exact(M: Sequence[Sequence]) -> Fraction:
    """Determinant by Bareiss elimination over cleared integer rows."""
    n = len(M)
    rows = [[to_rational(c) for c in row] for row in M]
    scale = Fraction(1)
    irows = []
    for row in rows:
        den = reduce(lcm, (c.denominator for c in row), 1)
        scale /= den
        irows.append([int(c * den) for c in row])
    sign = 1
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if irows[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            irows[k], irows[piv] = irows[piv], irows[k]
            sign = -sign
        p = irows[k][k]
        for i in range(k + 1, n):
            a = irows[i][k]
            irows[i] = [(p * irows[i][j] - a * irows[k][j]) // prev for j in range(n)]
        prev = p
    return sign * Fraction(irows[n - 1][n - 1]) * scale if n else Fraction(1)
