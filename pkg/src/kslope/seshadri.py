"""Seshadri constants on surfaces, relative to a declared cone of curves."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import AssumptionViolated, NonpositiveCoefficient, NotASurface
from .exact import Poly, format_rational, isolate_roots, parse_rational
from .geometry import Divisor, Setup, check_kahler, intersect

DEFAULT_TOL = Fraction(1, 1024)


@dataclass(frozen=True)
class Enclosure:
    """``lo <= eps(D, Omega) <= hi``.

    For every ``x`` in ``[0, lo)`` the class ``Omega - x D`` has positive
    volume and pairs positively with every declared curve; at ``lo`` these
    quantities are still nonnegative.
    """

    lo: Fraction
    hi: Fraction
    binding_constraint: str

    def to_json(self) -> dict:
        return {
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "binding_constraint": self.binding_constraint,
        }


@dataclass(frozen=True)
class NoBindingConstraint:
    """Every declared check holds for all x >= 0; the model may be incomplete."""

    reason: str = "no declared constraint bounds x"

    def to_json(self) -> dict:
        return {"status": "NoBindingConstraint", "reason": self.reason}


def seshadri_enclosure(setup: Setup, D: Divisor, tol=DEFAULT_TOL) -> Enclosure | NoBindingConstraint:
    if setup.n != 2:
        raise NotASurface("Seshadri enclosures are computed on surfaces only")
    tol = parse_rational(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    check_kahler(setup, setup.omega, "omega")
    om, d = setup.omega, D.total_class

    linear_bound: Fraction | None = None
    linear_name = None
    for curve in setup.curve_cone or ():
        dc = intersect(setup, [d, curve.cls])
        if dc > 0:
            bound = intersect(setup, [om, curve.cls]) / dc
            if linear_bound is None or bound < linear_bound:
                linear_bound, linear_name = bound, curve.name

    # (Omega - x D)^2 as a polynomial in x
    vol = Poly([intersect(setup, [om, om]), -2 * intersect(setup, [om, d]), intersect(setup, [d, d])])
    search_hi = linear_bound
    if search_hi is None and vol.degree >= 1:
        search_hi = _root_bound(vol)
    if search_hi is None:
        return NoBindingConstraint()

    # isolating inside [0, search_hi] keeps every bracket below the linear bound
    roots = [r for r in isolate_roots(vol, 0, search_hi, tol) if r[1] > 0]
    if roots and (linear_bound is None or roots[0][0] < linear_bound):
        lo, hi = roots[0]
        return Enclosure(lo, hi, "volume")
    if linear_bound is None:
        return NoBindingConstraint()
    return Enclosure(linear_bound, linear_bound, linear_name)


def _root_bound(p: Poly) -> Fraction:
    """Cauchy bound: every real root has absolute value below this."""
    lead = abs(p.leading)
    return 1 + max(abs(c) / lead for c in p.coeffs[:-1])


def exceptional_lower_bound(setup: Setup, D: Divisor, r) -> Fraction:
    """``min r_i / m_i``, a Seshadri lower bound for D w.r.t. H + sum r_i D_i.

    Requires ``D . D_i <= 0`` for every component.
    """
    r = [parse_rational(x) for x in r]
    if len(r) != len(D.components):
        raise ValueError("one coefficient per component is required")
    for ri, comp in zip(r, D.components):
        if ri <= 0:
            raise NonpositiveCoefficient(f"coefficient for {comp.name} is {ri}")
        if intersect(setup, [D.total_class, comp.cls]) > 0:
            raise AssumptionViolated(f"D . {comp.name} > 0")
    return min(ri / comp.multiplicity for ri, comp in zip(r, D.components))
