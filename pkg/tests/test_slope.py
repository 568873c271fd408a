import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from factories import random_rational, random_setup
from kslope.corpus import pp2, product_of_curves
from kslope.destabilizer import degenerating_family
from kslope.errors import DegenerateDivisor, NonpositiveDenominator
from kslope.exact import Poly, poly_cumulative
from kslope.geometry import intersect, power_pairing, scale
from kslope.slope import (
    Status,
    audit_printed,
    check_stability,
    energy_pieces,
    f_alpha_at,
    mu_lambda,
    sample_table,
    slope_data,
)

x = Poly.x()
half = Fraction(1, 2)


def cxc_at(s):
    base = product_of_curves(2)
    D = base.divisor("delta")
    fam = degenerating_family(base, D, (1, 1, 0))
    return base.with_omega(fam.omega_at(s)), D


def test_pp2_line_polynomials():
    s = pp2()
    sd = slope_data(s, s.divisor("line"))
    assert sd.alpha1 == Poly([half, -1, half])
    assert sd.alpha2 == Poly([Fraction(3, 2), Fraction(-3, 2)])
    assert sd.s_hat == 6
    assert sd.num == Poly([0, half, half])
    assert sd.den == Poly([0, 0, half, Fraction(-1, 6)])
    assert sd.f_alpha == x * (1 - x) ** 2 / 2


def test_twist_equal_to_c1():
    s = pp2()
    s = s.with_twist(s.c1)
    sd = slope_data(s, s.divisor("line"))
    assert sd.alpha2.is_zero() and sd.s_hat == 0
    assert sd.f_alpha == x / 2 - x**2 / 4


def test_zero_divisor_rejected():
    s = pp2()
    with pytest.raises(DegenerateDivisor):
        slope_data(s, (0,))
    assert energy_pieces(s, (0,), diagnostic=True).f_I.is_zero()
    with pytest.raises(DegenerateDivisor):
        energy_pieces(s, (0,))


def test_mu_examples():
    s = pp2()
    line = s.divisor("line")
    assert mu_lambda(s, line, 1) == 3 == slope_data(s, line).s_hat / 2
    assert mu_lambda(s, line, half) == Fraction(3 * Fraction(3, 2), half * Fraction(5, 2))
    with pytest.raises(NonpositiveDenominator):
        mu_lambda(s, line, 0)
    with pytest.raises(NonpositiveDenominator):
        mu_lambda(s, line, 3)  # Den(3) = 0


def test_cxc_small_s_values():
    s, D = cxc_at(Fraction(1, 100))
    sd = slope_data(s, D)
    assert sd.s_hat == Fraction(-80400, 20401)
    assert sd.num == Poly([0, Fraction(1, 100), -half])
    assert sd.den == Poly([0, 0, Fraction(1, 100), Fraction(1, 3)])
    assert f_alpha_at(s, D, Fraction(1, 4)) == Fraction(-281623, 16320800)
    assert mu_lambda(s, D, Fraction(1, 4)) == Fraction(-69, 14)


def test_energy_pieces_pp2():
    s = pp2()
    e = energy_pieces(s, s.divisor("line"))
    assert e.f_I == Poly([0, 0, Fraction(1, 4), Fraction(-1, 12)])
    assert e.f_J == Poly([0, 0, Fraction(-3, 4)])
    assert e.f_log == Poly([0, 1, -half])


def test_audit_pp2():
    s = pp2()
    rep = audit_printed(s, s.divisor("line"))
    assert rep.num_residual.is_zero() and rep.den_residual.is_zero()
    assert not rep.identity2_residual.is_zero()
    assert rep.printed_f == Poly([0, Fraction(1, 4), 0, Fraction(1, 4), Fraction(-1, 8)])
    assert rep.canonical_f == x * (1 - x) ** 2 / 2


def test_check_stability_statuses():
    s = pp2()
    v = check_stability(s, s.divisor("line"), 1)
    assert v.status == Status.BOUNDARY
    assert v.zeros == ((0, 0), (1, 1))
    assert v.den_positive

    s1 = product_of_curves(2)
    v = check_stability(s1, s1.divisor("delta"), 1)
    assert v.status == Status.SATISFIED
    assert slope_data(s1, s1.divisor("delta")).f_alpha == x + Fraction(5, 14) * x**2 + Fraction(2, 7) * x**3

    s2, D = cxc_at(Fraction(1, 100))
    v = check_stability(s2, D, 1)
    assert v.status == Status.VIOLATED
    lo, hi = v.witness
    assert lo < Fraction(1, 4) < hi
    assert f_alpha_at(s2, D, v.witness_midpoint) == v.witness_value < 0


def test_sample_table_matches():
    s = pp2()
    line = s.divisor("line")
    rows = sample_table(s, line, 0, 2, 8)
    assert len(rows) == 9
    assert rows[0]["mu"] is None
    for row in rows:
        assert row["F"] == f_alpha_at(s, line, row["lambda"])


seeds = st.integers(0, 10**6)
dims = st.sampled_from([2, 3, 4])


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_identities_hold(seed, n):
    s = random_setup(random.Random(seed), n)
    rep = audit_printed(s, s.divisor("D"))
    assert rep.num_residual.is_zero()
    assert rep.den_residual.is_zero()


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_linear_coefficient_of_num(seed, n):
    s = random_setup(random.Random(seed), n)
    d = s.divisor("D").total_class
    sd = slope_data(s, d)
    assert sd.num.coeff(0) == 0
    assert sd.num.coeff(1) == power_pairing(s, s.omega, d, 1) / (2 * factorial(n - 1))


@settings(max_examples=40, deadline=None)
@given(seeds, dims, st.sampled_from([Fraction(3, 2), Fraction(2), Fraction(1, 3)]))
def test_scaling_omega(seed, n, c):
    s = random_setup(random.Random(seed), n)
    d = s.divisor("D").total_class
    f = slope_data(s, d).f_alpha
    g = slope_data(s.with_omega(scale(c, s.omega)), d).f_alpha
    assert g.scale_arg(c) == f * c**n


@settings(max_examples=40, deadline=None)
@given(seeds, dims, st.integers(2, 4))
def test_multiplicity(seed, n, k):
    # only the (alpha1(0) - alpha1)/2 part of Num survives D -> kD, lam -> lam/k unscaled
    s = random_setup(random.Random(seed), n)
    d = s.divisor("D").total_class
    sd = slope_data(s, d)
    h = (sd.alpha1(0) - sd.alpha1) / 2
    g = slope_data(s, scale(k, d)).f_alpha
    assert g.scale_arg(Fraction(1, k)) == (sd.f_alpha - h) / k + h


def test_multiple_divisor_changes_polynomial():
    s = pp2()
    f_line = slope_data(s, (1,)).f_alpha
    f_conic = slope_data(s, (2,)).f_alpha.scale_arg(half)
    assert f_conic == x / 2 - Fraction(5, 8) * x**2 + x**3 / 4
    assert f_conic != f_line
    assert check_stability(s, (1,), 1).status == Status.BOUNDARY
    assert check_stability(s, (2,), half).status == Status.SATISFIED


def surface_mu(s, d, lam):
    od = intersect(s, [s.omega, d])
    kd = intersect(s, [s.canonical, d]) + intersect(s, [s.twist, d])
    dd = intersect(s, [d, d])
    return 3 * (2 * od - lam * (kd + dd)) / (2 * lam * (3 * od - lam * dd))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_surface_formula(seed):
    rng = random.Random(seed)
    s = random_setup(rng, 2)
    d = s.divisor("D").total_class
    lam = random_rational(rng)
    if slope_data(s, d).den(lam) <= 0:
        return
    assert mu_lambda(s, d, lam) == surface_mu(s, d, lam)


@settings(max_examples=25, deadline=None)
@given(seeds, dims)
def test_cumulative_against_quadrature(seed, n):
    rng = random.Random(seed)
    s = random_setup(rng, n)
    sd = slope_data(s, s.divisor("D"))
    lam = random_rational(rng)
    for p in (sd.alpha1, sd.alpha2):
        numeric, _ = quad(lambda t: float(p(Fraction(t))), 0, float(lam), epsabs=1e-13, epsrel=1e-13)
        assert abs(float(poly_cumulative(p, lam)) - numeric) < 1e-9
