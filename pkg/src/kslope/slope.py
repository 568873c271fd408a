"""Twisted slope data of a divisor and the exact stability test.

For a setup of dimension n, a divisor D and twist alpha the engine builds

    alpha1(x) = (Omega - x D)^n / n!
    alpha2(x) = (c1 - alpha).(Omega - x D)^(n-1) / (2 (n-1)!)
    S_hat     = n (c1 - alpha).Omega^(n-1) / Omega^n

and packages them as

    Num(lam) = lam alpha2(0) - int_0^lam alpha2 + (alpha1(0) - alpha1(lam)) / 2
    Den(lam) = lam alpha1(0) - int_0^lam alpha1
    F(lam)   = Num(lam) - (S_hat / 2) Den(lam)

Semistability with respect to D asks F >= 0 on [0, eps(D, Omega)].
The same data is also available in the (lam - x)-weighted form used by
:func:`audit_printed`, which is kept for comparison only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import DegenerateDivisor, NonpositiveDenominator
from .exact import (
    Poly,
    SignVerdict,
    format_rational,
    min_sign_on_interval,
    parse_rational,
    weighted_cumulative,
)
from .geometry import ClassVector, Divisor, Setup, add, is_zero, power_pairing, scale, self_power


@dataclass(frozen=True)
class SlopeData:
    alpha1: Poly
    alpha2: Poly
    s_hat: Fraction
    num: Poly
    den: Poly
    f_alpha: Poly

    def to_json(self) -> dict:
        return {
            "alpha1": self.alpha1.to_json(),
            "alpha2": self.alpha2.to_json(),
            "s_hat": format_rational(self.s_hat),
            "num": self.num.to_json(),
            "den": self.den.to_json(),
            "f_alpha": self.f_alpha.to_json(),
        }


@dataclass(frozen=True)
class EnergyPieces:
    f_I: Poly
    f_J: Poly
    f_log: Poly

    def to_json(self) -> dict:
        return {"f_I": self.f_I.to_json(), "f_J": self.f_J.to_json(), "f_log": self.f_log.to_json()}


class Status(str, enum.Enum):
    SATISFIED = "SatisfiedOnInterval"
    BOUNDARY = "SemistableBoundary"
    VIOLATED = "Violated"


@dataclass(frozen=True)
class Verdict:
    status: Status
    lambda_max: Fraction
    zeros: tuple[tuple[Fraction, Fraction], ...]
    witness: tuple[Fraction, Fraction] | None = None
    witness_value: Fraction | None = None
    den_positive: bool = True

    @property
    def witness_midpoint(self) -> Fraction | None:
        return None if self.witness is None else (self.witness[0] + self.witness[1]) / 2

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "lambda_max": format_rational(self.lambda_max),
            "zeros": [[format_rational(lo), format_rational(hi)] for lo, hi in self.zeros],
            "witness": None
            if self.witness is None
            else {
                "lambda_interval": [format_rational(t) for t in self.witness],
                "midpoint": format_rational(self.witness_midpoint),
                "f_value": format_rational(self.witness_value),
            },
            "den_positive": self.den_positive,
        }


@dataclass(frozen=True)
class AuditReport:
    printed_f: Poly
    canonical_f: Poly
    identity1_residual: Poly
    identity2_residual: Poly
    num_residual: Poly
    den_residual: Poly

    def to_json(self) -> dict:
        return {k: getattr(self, k).to_json() for k in self.__dataclass_fields__}


def _twisted_c1(setup: Setup) -> ClassVector:
    return add(setup.c1, scale(-1, setup.twist))


def _check_divisor(D: Divisor | ClassVector) -> ClassVector:
    cls = D.total_class if isinstance(D, Divisor) else tuple(D)
    if is_zero(cls):
        raise DegenerateDivisor("divisor class is zero")
    return cls


def _divisor_class(D: Divisor | ClassVector) -> ClassVector:
    return D.total_class if isinstance(D, Divisor) else tuple(D)


def alpha_polys(setup: Setup, d: ClassVector) -> tuple[Poly, Poly]:
    n = setup.n
    om = setup.omega
    a1 = Poly(
        comb(n, k) * (-1) ** k * power_pairing(setup, om, d, k) / factorial(n) for k in range(n + 1)
    )
    tw = _twisted_c1(setup)
    a2 = Poly(
        comb(n - 1, k) * (-1) ** k * power_pairing(setup, om, d, k, head=tw) / (2 * factorial(n - 1))
        for k in range(n)
    )
    return a1, a2


def s_hat(setup: Setup) -> Fraction:
    n = setup.n
    tw = _twisted_c1(setup)
    return n * power_pairing(setup, setup.omega, setup.omega, 0, head=tw) / self_power(setup, setup.omega)


def slope_data(setup: Setup, D: Divisor | ClassVector) -> SlopeData:
    d = _check_divisor(D)
    a1, a2 = alpha_polys(setup, d)
    lam = Poly.x()
    num = lam * a2(0) - a2.antiderivative() + (a1(0) - a1) / 2
    den = lam * a1(0) - a1.antiderivative()
    sh = s_hat(setup)
    return SlopeData(a1, a2, sh, num, den, num - den * (sh / 2))


def f_alpha_at(setup: Setup, D, lam) -> Fraction:
    lam = parse_rational(lam)
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    return slope_data(setup, D).f_alpha(lam)


def mu_lambda(setup: Setup, D, lam) -> Fraction:
    """Slope ``Num/Den``; ``mu >= S_hat/2`` iff ``F >= 0`` where ``Den > 0``."""
    lam = parse_rational(lam)
    sd = slope_data(setup, D)
    den = sd.den(lam)
    if lam <= 0 or den <= 0:
        raise NonpositiveDenominator(f"Den({lam}) = {den} is not positive")
    return sd.num(lam) / den


def energy_pieces(setup: Setup, D, *, diagnostic: bool = False) -> EnergyPieces:
    """The three log-coefficient sums, with integrals replaced by intersections.

    ``diagnostic=True`` accepts a zero divisor class.
    """
    d = _divisor_class(D) if diagnostic else _check_divisor(D)
    n = setup.n
    om = setup.omega
    tw_neg = scale(-1, _twisted_c1(setup))  # alpha - c1
    f_j = [Fraction(0)] * (n + 2)
    f_i = [Fraction(0)] * (n + 2)
    f_log = [Fraction(0)] * (n + 2)
    for p in range(1, n):
        pairing = power_pairing(setup, om, d, p, head=tw_neg)
        f_j[p + 1] += Fraction((-1) ** (p + 1), 2 * factorial(p + 1) * factorial(n - 1 - p)) * pairing
    for p in range(1, n + 1):
        pairing = power_pairing(setup, om, d, p)
        f_i[p + 1] += Fraction((-1) ** (p + 1), 2 * factorial(p + 1) * factorial(n - p)) * pairing
        f_log[p] += Fraction((-1) ** (p - 1), factorial(p) * factorial(n - p)) * pairing
    return EnergyPieces(Poly(f_i), Poly(f_j), Poly(f_log))


def audit_printed(setup: Setup, D) -> AuditReport:
    """Compare the weighted-integral packaging with the canonical one.

    The weighted form and its two companion identities are evaluated verbatim;
    the residuals are returned exactly, nonzero where they disagree.
    """
    sd = slope_data(setup, D)
    pieces = energy_pieces(setup, D)
    lam = Poly.x()
    w2 = weighted_cumulative(sd.alpha2)
    w1 = weighted_cumulative(sd.alpha1)
    head = w2 + lam * (sd.alpha1(0) / 2)
    printed = head - w1 * (sd.s_hat / 2)
    return AuditReport(
        printed_f=printed,
        canonical_f=sd.f_alpha,
        identity1_residual=head - (pieces.f_log + pieces.f_J),
        identity2_residual=w1 - pieces.f_I * (-2),
        num_residual=sd.num - (pieces.f_log / 2 - pieces.f_J),
        den_residual=sd.den - pieces.f_I * 2,
    )


def den_positive_on(setup: Setup, D, lambda_max) -> bool:
    """Whether ``Den > 0`` on ``(0, lambda_max]``."""
    sd = slope_data(setup, D)
    lambda_max = parse_rational(lambda_max)
    rep = min_sign_on_interval(sd.den, (0, lambda_max))
    if rep.verdict == SignVerdict.ATTAINS_NEGATIVE:
        return False
    return all(lo == hi == 0 for lo, hi in rep.zeros)


def check_stability(setup: Setup, D, lambda_max, width=None) -> Verdict:
    """Exact sign classification of F on ``[0, lambda_max]``.

    The root at 0 is always present and never counts against stability.
    """
    lambda_max = parse_rational(lambda_max)
    if lambda_max <= 0:
        raise ValueError("lambda_max must be positive")
    sd = slope_data(setup, D)
    rep = min_sign_on_interval(sd.f_alpha, (0, lambda_max), width)
    if rep.verdict == SignVerdict.ATTAINS_NEGATIVE:
        status = Status.VIOLATED
    elif any(hi > 0 for _, hi in rep.zeros):
        status = Status.BOUNDARY
    else:
        status = Status.SATISFIED
    return Verdict(
        status,
        lambda_max,
        rep.zeros,
        rep.negative_witness,
        rep.witness_value,
        den_positive_on(setup, D, lambda_max),
    )


def sample_table(setup: Setup, D, start, stop, steps: int) -> list[dict]:
    """Exact values of F, Num, Den and mu on ``steps + 1`` equally spaced points."""
    start, stop = parse_rational(start), parse_rational(stop)
    if steps < 1:
        raise ValueError("steps must be at least 1")
    sd = slope_data(setup, D)
    rows = []
    for i in range(steps + 1):
        lam = start + (stop - start) * i / steps
        num, den = sd.num(lam), sd.den(lam)
        rows.append(
            {
                "lambda": lam,
                "F": sd.f_alpha(lam),
                "Num": num,
                "Den": den,
                "mu": num / den if lam > 0 and den > 0 else None,
            }
        )
    return rows
