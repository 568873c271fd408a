"""Exact rational arithmetic: polynomials over Q, Sturm-based sign analysis,
and a small exact solver for negative definite systems.

Rationals are :class:`fractions.Fraction` throughout. Nothing in this module
touches binary floating point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import MalformedRational, NotNegativeDefinite, SingularSystem

DEFAULT_WITNESS_BITS = 20


def parse_rational(value) -> Fraction:
    """Parse ``"p/q"``, an integer, or a decimal string exactly.

    Binary floats are rejected: their value is rarely the one the user typed.
    """
    if isinstance(value, bool):
        raise MalformedRational(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise MalformedRational(f"not a rational: {value!r}") from None
    raise MalformedRational(f"not a rational: {value!r}")


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def decimal_string(q: Fraction, digits: int = 12) -> str:
    """Render ``q`` with ``digits`` significant digits, rounding exactly."""
    from decimal import Decimal, localcontext

    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(q.numerator) / Decimal(q.denominator)
    return format(d, "g")


class Poly:
    """Univariate polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [parse_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def const(cls, c) -> Poly:
        return cls([c])

    @classmethod
    def x(cls) -> Poly:
        return cls([0, 1])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ")

    def _lift(self, other) -> Poly:
        return other if isinstance(other, Poly) else Poly.const(other)

    def __add__(self, other) -> Poly:
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> Poly:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> Poly:
        return self._lift(other) - self

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            c = parse_rational(other)
            return Poly(c * a for a in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, c) -> Poly:
        return self * (1 / parse_rational(c))

    def __pow__(self, k: int) -> Poly:
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> Poly:
        return Poly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def antiderivative(self) -> Poly:
        """The antiderivative vanishing at 0."""
        return Poly([0] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def shift(self, a) -> Poly:
        """Return ``p(x + a)``."""
        a = parse_rational(a)
        out = Poly()
        xa = Poly([a, 1])
        for c in reversed(self.coeffs):
            out = out * xa + c
        return out

    def scale_arg(self, c) -> Poly:
        """Return ``p(c*x)``."""
        c = parse_rational(c)
        return Poly(a * c**k for k, a in enumerate(self.coeffs))

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lead
            if c == 0:
                continue
            quot[k - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] -= c * b
        return Poly(quot), Poly(rem[:dq] if dq > 0 else [])

    def monic(self) -> Poly:
        return self / self.leading if self.coeffs else self

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def squarefree_part(p: Poly) -> Poly:
    if p.degree <= 0:
        return p
    g = poly_gcd(p, p.derivative())
    return p.divmod(g)[0]


def poly_cumulative(p: Poly, lam) -> Fraction:
    """Exact value of the integral of ``p`` over ``[0, lam]``."""
    return p.antiderivative()(parse_rational(lam))


def poly_integral(p: Poly, a, b) -> Fraction:
    """Integral over ``[a, b]`` through the shifted antiderivative."""
    a, b = parse_rational(a), parse_rational(b)
    return p.shift(a).antiderivative()(b - a)


def weighted_cumulative(p: Poly) -> Poly:
    """The polynomial ``lam -> integral_0^lam (lam - x) p(x) dx``."""
    return p.antiderivative().antiderivative()


# -- Sturm sequences ---------------------------------------------------------


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-seq[-2].divmod(seq[-1])[1])
    return seq[:-1]


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def sign_variations(seq: Sequence[Poly], x: Fraction) -> int:
    signs = [s for s in (_sign(q(x)) for q in seq) if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_roots(p: Poly, a, b) -> int:
    """Number of distinct real roots of ``p`` in the half-open ``(a, b]``."""
    a, b = parse_rational(a), parse_rational(b)
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    sq = squarefree_part(p)
    if sq.degree <= 0:
        return 0
    seq = sturm_sequence(sq)
    return sign_variations(seq, a) - sign_variations(seq, b)


class SignVerdict(str, enum.Enum):
    STRICTLY_POSITIVE = "StrictlyPositive"
    NONNEGATIVE_WITH_ZEROS = "NonnegativeWithZeros"
    ATTAINS_NEGATIVE = "AttainsNegative"


@dataclass(frozen=True)
class SignReport:
    """Exact sign classification of a polynomial on a closed interval.

    ``zeros`` are isolating intervals ``(lo, hi)``, one per distinct root;
    ``lo == hi`` means the root is known exactly. ``negative_witness`` is a
    closed interval free of roots whose midpoint evaluates negative.
    """

    verdict: SignVerdict
    zeros: tuple[tuple[Fraction, Fraction], ...] = ()
    negative_witness: tuple[Fraction, Fraction] | None = None
    witness_value: Fraction | None = None
    gaps: tuple[tuple[tuple[Fraction, Fraction], Fraction], ...] = field(
        default=(), repr=False
    )

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "zeros": [[format_rational(lo), format_rational(hi)] for lo, hi in self.zeros],
            "negative_witness": None
            if self.negative_witness is None
            else [format_rational(x) for x in self.negative_witness],
            "witness_value": None
            if self.witness_value is None
            else format_rational(self.witness_value),
        }


def isolate_roots(p: Poly, a, b, width=None) -> list[tuple[Fraction, Fraction]]:
    """Isolate the distinct roots of ``p`` in ``[a, b]``.

    Each returned pair is either an exact root ``(c, c)`` or an open interval
    ``(lo, hi)`` containing exactly one root with ``p(lo), p(hi)`` nonzero and
    ``hi - lo <= width`` (default ``2**-20 * (b - a)``).
    """
    a, b = parse_rational(a), parse_rational(b)
    if a > b:
        raise ValueError("empty interval")
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    if width is None:
        width = (b - a) / 2**DEFAULT_WITNESS_BITS
    width = parse_rational(width)
    sq = squarefree_part(p)
    if sq.degree <= 0:
        return []
    seq = sturm_sequence(sq)
    var = {}

    def v(x):
        if x not in var:
            var[x] = sign_variations(seq, x)
        return var[x]

    roots: list[tuple[Fraction, Fraction]] = []
    if sq(a) == 0:
        roots.append((a, a))
    if a == b:
        return roots

    # items: (lo, hi, k, hi_done) with k = number of roots in (lo, hi]
    stack = [(a, b, v(a) - v(b), False)]
    while stack:
        lo, hi, k, hi_done = stack.pop()
        if k == 0:
            continue
        if not hi_done and sq(hi) == 0:
            roots.append((hi, hi))
            hi_done = True
            k -= 1
            if k == 0:
                continue
        if not hi_done and k == 1 and sq(lo) != 0 and hi - lo <= width:
            roots.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        left = v(lo) - v(mid)
        stack.append((mid, hi, k - left, hi_done))
        stack.append((lo, mid, left, False))
    return sorted(roots)


def min_sign_on_interval(p: Poly, interval, width=None) -> SignReport:
    """Decide the sign behaviour of ``p`` on the closed ``interval`` exactly."""
    a, b = (parse_rational(t) for t in interval)
    if a > b:
        raise ValueError("empty interval")
    if p.is_zero():
        return SignReport(SignVerdict.NONNEGATIVE_WITH_ZEROS, zeros=((a, b),))
    zeros = isolate_roots(p, a, b, width)

    # closed, root-free gaps between consecutive roots; their midpoints
    # carry the sign of p on the open region between those roots
    gaps = []
    prev_end = a
    for lo, hi in zeros:
        if lo == hi:
            if lo != a:
                gaps.append((prev_end, lo))
        else:
            gaps.append((prev_end, lo))
        prev_end = hi
    if not zeros or zeros[-1] != (b, b):
        gaps.append((prev_end, b))

    gap_values = []
    for g_lo, g_hi in gaps:
        mid = (g_lo + g_hi) / 2
        gap_values.append(((g_lo, g_hi), p(mid)))

    negatives = [(g, val) for g, val in gap_values if val < 0]
    if negatives:
        g, val = min(negatives, key=lambda t: t[1])
        return SignReport(
            SignVerdict.ATTAINS_NEGATIVE,
            zeros=tuple(zeros),
            negative_witness=g,
            witness_value=val,
            gaps=tuple(gap_values),
        )
    if zeros:
        return SignReport(
            SignVerdict.NONNEGATIVE_WITH_ZEROS, zeros=tuple(zeros), gaps=tuple(gap_values)
        )
    return SignReport(SignVerdict.STRICTLY_POSITIVE, gaps=tuple(gap_values))


# -- exact linear algebra ----------------------------------------------------


def determinant(m: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [[parse_rational(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


def is_negative_definite(m: Sequence[Sequence[Fraction]]) -> bool:
    """Sylvester's criterion: the k-th leading minor has sign (-1)^k."""
    n = len(m)
    for k in range(1, n + 1):
        minor = determinant([row[:k] for row in m[:k]])
        if _sign(minor) != (-1) ** k:
            return False
    return True


def solve_negdef(m, b) -> list[Fraction]:
    """Solve ``m r = b`` exactly after checking ``m`` is negative definite."""
    mat = [[parse_rational(x) for x in row] for row in m]
    rhs = [parse_rational(x) for x in b]
    n = len(mat)
    if any(len(row) != n for row in mat) or len(rhs) != n:
        raise ValueError("matrix must be square and match the right-hand side")
    for i in range(n):
        for j in range(i):
            if mat[i][j] != mat[j][i]:
                raise ValueError("matrix is not symmetric")
    if not is_negative_definite(mat):
        raise NotNegativeDefinite("intersection matrix is not negative definite")

    aug = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularSystem("singular system")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col] / aug[col][col]
                for c in range(col, n + 1):
                    aug[r][c] -= f * aug[col][c]
    return [aug[i][n] / aug[i][i] for i in range(n)]
