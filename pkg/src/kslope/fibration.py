"""Adiabatic-limit inputs and the projective-bundle obstruction.

A submersion with fibrewise cscK metrics induces on its base the twist class
kappa + S_b / (n_f + 1) * ell, where kappa and ell are the first Chern classes
of the pushforwards of the relative canonical bundle and of the polarisation.
Feeding that twist into the witness search obstructs cscK metrics in the
adiabatic classes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .destabilizer import NotFound, Witness, find_witness
from .errors import NonpositiveDegree, RankMismatch, SetupError
from .exact import format_rational, parse_rational
from .geometry import ClassVector, Divisor, Setup, add, intersect, scale, vec

SEMIPOSITIVITY_UNVERIFIED = "SemipositivityUnverified"
OBSTRUCTED_FAMILY = "c₁(O_ℙ(1)) + r·Ω_B, r ≫ 0"
SESHADRI_RECORD = "ε(ℙ(F), Ω_r) = 1"


def fibre_average_scalar(h: int, d) -> Fraction:
    """Average scalar curvature of a genus-h fibre of degree d, no 2*pi."""
    d = parse_rational(d)
    if d <= 0:
        raise NonpositiveDegree(f"fibre degree {d} is not positive")
    if int(h) != h or h < 0:
        raise ValueError("genus must be a nonnegative integer")
    return Fraction(2 - 2 * int(h)) / d


@dataclass(frozen=True)
class FibrationData:
    base: Setup
    fibre_dimension: int
    S_b: Fraction
    kappa: ClassVector
    ell: ClassVector

    def __post_init__(self):
        size = len(self.base.basis)
        if len(self.kappa) != size or len(self.ell) != size:
            raise SetupError("kappa and ell must live in the base lattice")
        if self.fibre_dimension < 1:
            raise SetupError("fibre dimension must be positive")

    @classmethod
    def from_setup(cls, setup: Setup) -> FibrationData:
        """Read the ``fibration`` section of a setup document."""
        sec = setup.sections.get("fibration")
        if sec is None:
            raise SetupError("setup has no fibration section")
        n_f = int(sec.get("fibre_dimension", 1))
        if "fibre_average_scalar" in sec:
            s_b = parse_rational(sec["fibre_average_scalar"])
        elif "fibre_genus" in sec and "fibre_degree" in sec:
            s_b = fibre_average_scalar(int(sec["fibre_genus"]), sec["fibre_degree"])
        else:
            raise SetupError("fibration section needs fibre_average_scalar or fibre_genus/fibre_degree")
        zero = setup.zero
        kappa = vec(sec["kappa"]) if "kappa" in sec else zero
        ell = vec(sec["ell"]) if "ell" in sec else zero
        return cls(setup, n_f, s_b, kappa, ell)


def adiabatic_twist(data: FibrationData) -> ClassVector:
    return add(data.kappa, scale(data.S_b / (data.fibre_dimension + 1), data.ell))


@dataclass(frozen=True)
class AdiabaticResult:
    outcome: Witness | NotFound
    twist: ClassVector
    warnings: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "twist": [format_rational(c) for c in self.twist],
            "warnings": list(self.warnings),
            "outcome": self.outcome.to_json(),
        }


def adiabatic_obstruction(
    data: FibrationData, D: Divisor, H_ref=None, s_schedule: Sequence | None = None
) -> AdiabaticResult:
    """Install the adiabatic twist on the base and run the witness search.

    Semipositivity of the twist cannot be read off from classes; only the
    proxy ``D . alpha >= 0`` is checked, and a failure is reported as a
    warning rather than an error.
    """
    twist = adiabatic_twist(data)
    base = data.base.with_twist(twist)
    warnings = []
    if intersect(base, [D.total_class, twist]) < 0:
        warnings.append(SEMIPOSITIVITY_UNVERIFIED)
    outcome = find_witness(base, D, H_ref, s_schedule)
    return AdiabaticResult(outcome, twist, tuple(warnings))


# -- projective bundles ------------------------------------------------------


class BundleStatus(str, enum.Enum):
    UNSTABLE = "Unstable"
    EQUAL = "StrictlySemistableEqual"
    STABLE = "StableWithRespectToGivenData"


@dataclass(frozen=True)
class BundleData:
    """Either split degrees (one line summand each) or one corank-1 subbundle."""

    rank: int
    degrees: tuple[Fraction, ...] | None = None
    sub: tuple[Fraction, int, Fraction, int] | None = None

    def __post_init__(self):
        if self.rank < 1:
            raise RankMismatch("rank must be positive")
        if (self.degrees is None) == (self.sub is None):
            raise SetupError("give either split degrees or subbundle data")
        if self.degrees is not None and len(self.degrees) != self.rank:
            raise RankMismatch(f"{len(self.degrees)} degrees for rank {self.rank}")
        if self.sub is not None:
            _, sub_rank, _, total_rank = self.sub
            if total_rank != self.rank or sub_rank < 1 or sub_rank != total_rank - 1:
                raise RankMismatch("subbundle must have corank 1 in the given rank")

    @classmethod
    def split(cls, degrees) -> BundleData:
        degs = tuple(parse_rational(d) for d in degrees)
        return cls(len(degs), degrees=degs)

    @classmethod
    def from_sub(cls, sub_degree, sub_rank, total_degree, total_rank) -> BundleData:
        sub = (parse_rational(sub_degree), int(sub_rank), parse_rational(total_degree), int(total_rank))
        return cls(int(total_rank), sub=sub)

    @classmethod
    def from_json(cls, doc: dict) -> BundleData:
        if "degrees" in doc:
            data = cls.split(doc["degrees"])
            if "rank" in doc and int(doc["rank"]) != data.rank:
                raise RankMismatch(f"{data.rank} degrees for rank {doc['rank']}")
            return data
        try:
            return cls.from_sub(doc["sub_degree"], doc["sub_rank"], doc["total_degree"], doc["total_rank"])
        except KeyError as exc:
            raise SetupError(f"bundle data is missing {exc}") from None

    def scaled(self, c) -> BundleData:
        c = parse_rational(c)
        if self.degrees is not None:
            return BundleData.split([c * d for d in self.degrees])
        sd, sr, td, tr = self.sub
        return BundleData.from_sub(c * sd, sr, c * td, tr)

    def to_json(self) -> dict:
        if self.degrees is not None:
            return {"rank": self.rank, "degrees": [format_rational(d) for d in self.degrees]}
        sd, sr, td, tr = self.sub
        return {
            "sub_degree": format_rational(sd),
            "sub_rank": sr,
            "total_degree": format_rational(td),
            "total_rank": tr,
        }


@dataclass(frozen=True)
class BundleVerdict:
    """Mumford slope comparison with both the sub and the quotient reading.

    ``sub_*`` compares the best corank-1 subbundle with E; ``quotient_*``
    compares the corresponding line quotient with E. For an exact sequence
    the two comparisons always agree, only the named destabiliser differs.
    """

    status: BundleStatus
    mu_E: Fraction
    mu_sub: Fraction
    mu_quotient: Fraction
    sub_summands: tuple[int, ...] | None = None
    quotient_summand: int | None = None
    certificate: dict | None = field(default=None, compare=False)

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "mu_E": format_rational(self.mu_E),
            "sub_slope": {
                "mu_sub": format_rational(self.mu_sub),
                "summands": None if self.sub_summands is None else list(self.sub_summands),
                "destabilizes": self.mu_sub > self.mu_E,
            },
            "quotient_slope": {
                "mu_quotient": format_rational(self.mu_quotient),
                "summand": self.quotient_summand,
                "destabilizes": self.mu_quotient < self.mu_E,
            },
            "certificate": self.certificate,
        }


def bundle_obstruction(data: BundleData) -> BundleVerdict:
    if data.degrees is not None:
        degs = data.degrees
        total = sum(degs, Fraction(0))
        mu_E = total / data.rank
        if data.rank == 1:
            return BundleVerdict(BundleStatus.STABLE, mu_E, mu_E, mu_E)
        # removing the lowest-degree summand gives the corank-1 sub of largest slope
        q = min(range(len(degs)), key=lambda i: (degs[i], i))
        sub_idx = tuple(i for i in range(len(degs)) if i != q)
        mu_sub = (total - degs[q]) / (data.rank - 1)
        mu_q = degs[q]
    else:
        sd, sr, td, tr = data.sub
        mu_E = td / tr
        mu_sub = sd / sr
        mu_q = (td - sd) / (tr - sr)
        sub_idx, q = None, None

    if mu_sub > mu_E:
        status = BundleStatus.UNSTABLE
    elif mu_sub == mu_E:
        status = BundleStatus.EQUAL
    else:
        status = BundleStatus.STABLE
    cert = None
    if status == BundleStatus.UNSTABLE:
        cert = {
            "obstructed_family": OBSTRUCTED_FAMILY,
            "seshadri": SESHADRI_RECORD,
            "mu_E": format_rational(mu_E),
            "mu_sub": format_rational(mu_sub),
            "mu_quotient": format_rational(mu_q),
        }
    return BundleVerdict(status, mu_E, mu_sub, mu_q, sub_idx, q, cert)
