"""Destabilising exceptional divisors on surfaces.

An exceptional divisor D = sum m_i D_i with 2 p_a(D) - 2 + D.alpha > 0 breaks
the stability inequality for Kähler classes close to a big class Omega_0 with
Omega_0 . D_j = 0. The family used is Omega_s = (1 + s) H + sum r_i D_i,
where H is a reference Kähler class and the r_i solve
sum_i (D_i . D_j) r_i = -H . D_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    ConeViolation,
    CriterionNotSatisfied,
    NonPositiveVolume,
    NonpositiveSolution,
    NotASurface,
    SetupError,
)
from .exact import format_rational, parse_rational, solve_negdef
from .geometry import (
    ClassVector,
    Divisor,
    Setup,
    add,
    check_kahler,
    intersect,
    lincomb,
    setup_digest,
    vec,
)
from .seshadri import exceptional_lower_bound
from .slope import Status, check_stability, slope_data

DEFAULT_SCHEDULE = tuple(Fraction(1, 2**k) for k in range(1, 21))


def _require_surface(setup: Setup) -> None:
    if setup.n != 2:
        raise NotASurface("this operation is defined on surfaces only")


def arithmetic_genus(setup: Setup, D: Divisor) -> Fraction:
    """Adjunction: 2 p_a - 2 = (K + D) . D."""
    _require_surface(setup)
    d = D.total_class
    return intersect(setup, [add(setup.canonical, d), d]) / 2 + 1


def rp_criterion(setup: Setup, D: Divisor) -> tuple[bool, Fraction]:
    """``2 p_a(D) - 2 + D . alpha`` and whether it is positive."""
    _require_surface(setup)
    d = D.total_class
    value = 2 * arithmetic_genus(setup, D) - 2 + intersect(setup, [d, setup.twist])
    return value > 0, value


@dataclass(frozen=True)
class DegenerationFamily:
    reference: ClassVector
    r: tuple[Fraction, ...]
    components: tuple[ClassVector, ...]

    def omega_at(self, s) -> ClassVector:
        s = parse_rational(s)
        return lincomb([(1 + s, self.reference)] + list(zip(self.r, self.components)))

    def to_json(self) -> dict:
        return {
            "reference": [format_rational(c) for c in self.reference],
            "r": [format_rational(c) for c in self.r],
        }


def component_gram(setup: Setup, D: Divisor) -> list[list[Fraction]]:
    return [[intersect(setup, [a.cls, b.cls]) for b in D.components] for a in D.components]


def degenerating_family(setup: Setup, D: Divisor, H_ref: ClassVector) -> DegenerationFamily:
    _require_surface(setup)
    H_ref = vec(H_ref)
    check_kahler(setup, H_ref, "reference class")
    gram = component_gram(setup, D)
    rhs = [-intersect(setup, [H_ref, c.cls]) for c in D.components]
    r = solve_negdef(gram, rhs)
    if any(ri <= 0 for ri in r):
        raise NonpositiveSolution(f"solution r = {[str(x) for x in r]} is not strictly positive")
    fam = DegenerationFamily(H_ref, tuple(r), tuple(c.cls for c in D.components))
    omega0 = fam.omega_at(0)
    for c in D.components:
        # exact by construction; kept as a hard check
        assert intersect(setup, [omega0, c.cls]) == 0
    return fam


def reference_class(setup: Setup, H_ref=None) -> ClassVector:
    if H_ref is not None:
        return vec(H_ref)
    if "reference" in setup.named_classes:
        return setup.named_classes["reference"]
    raise SetupError("no reference class given and the setup declares none")


@dataclass(frozen=True)
class Witness:
    """Certified violation: F(midpoint) < 0 for the class Omega_s."""

    setup_digest: str
    divisor: str
    reference: ClassVector
    r: tuple[Fraction, ...]
    s: Fraction
    lambda_interval: tuple[Fraction, Fraction]
    f_value: Fraction
    lambda_bound_used: Fraction

    @property
    def midpoint(self) -> Fraction:
        return (self.lambda_interval[0] + self.lambda_interval[1]) / 2

    def to_json(self) -> dict:
        return {
            "status": "Witness",
            "setup_digest": self.setup_digest,
            "divisor": self.divisor,
            "reference": [format_rational(c) for c in self.reference],
            "r": [format_rational(c) for c in self.r],
            "s": format_rational(self.s),
            "lambda_interval": [format_rational(t) for t in self.lambda_interval],
            "lambda_midpoint": format_rational(self.midpoint),
            "f_value": format_rational(self.f_value),
            "lambda_bound_used": format_rational(self.lambda_bound_used),
        }


@dataclass(frozen=True)
class NotFound:
    """The schedule was exhausted; this is not a stability proof."""

    tried: tuple[tuple[Fraction, str], ...]

    def to_json(self) -> dict:
        return {
            "status": "NotFound",
            "tried": [{"s": format_rational(s), "outcome": o} for s, o in self.tried],
        }


def find_witness(
    setup: Setup,
    D: Divisor,
    H_ref=None,
    s_schedule: Sequence | None = None,
    *,
    require_criterion: bool = True,
) -> Witness | NotFound:
    """Search the family Omega_s for a certified violation.

    Schedule entries are tried from the largest s down, so the returned
    witness is the one with the largest violating s.
    """
    _require_surface(setup)
    ok, value = rp_criterion(setup, D)
    if require_criterion and not ok:
        raise CriterionNotSatisfied(f"2 p_a(D) - 2 + D.alpha = {value} is not positive")
    H = reference_class(setup, H_ref)
    fam = degenerating_family(setup, D, H)
    bound = exceptional_lower_bound(setup, D, fam.r)
    schedule = sorted({parse_rational(s) for s in (s_schedule or DEFAULT_SCHEDULE)}, reverse=True)
    digest = setup_digest(setup)
    tried = []
    for s in schedule:
        if s <= 0:
            raise ValueError("schedule entries must be positive")
        omega = fam.omega_at(s)
        try:
            check_kahler(setup, omega, "omega_s")
        except (NonPositiveVolume, ConeViolation) as exc:
            tried.append((s, f"skipped: {exc}"))
            continue
        verdict = check_stability(setup.with_omega(omega), D, bound)
        tried.append((s, verdict.status.value))
        if verdict.status == Status.VIOLATED:
            return Witness(
                digest, D.name, H, fam.r, s, verdict.witness, verdict.witness_value, bound
            )
    return NotFound(tuple(tried))


def verify_witness(setup: Setup, D: Divisor, witness: Witness) -> bool:
    """Independent re-check of a witness against its setup."""
    if witness.setup_digest != setup_digest(setup) or witness.divisor != D.name:
        return False
    fam = DegenerationFamily(
        tuple(witness.reference), tuple(witness.r), tuple(c.cls for c in D.components)
    )
    omega0 = fam.omega_at(0)
    if any(intersect(setup, [omega0, c]) != 0 for c in fam.components):
        return False
    if exceptional_lower_bound(setup, D, fam.r) != witness.lambda_bound_used:
        return False
    lo, hi = witness.lambda_interval
    if not (0 < lo <= hi <= witness.lambda_bound_used):
        return False
    f = slope_data(setup.with_omega(fam.omega_at(witness.s)), D).f_alpha
    value = f(witness.midpoint)
    return value == witness.f_value and value < 0
