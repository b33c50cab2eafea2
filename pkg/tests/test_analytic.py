"""Periods, elliptic log, Betti coordinates, rational reconstruction."""

import random
from fractions import Fraction

import mpmath
import pytest

from cyclotorsion.analytic import (
    BettiCoords,
    LatticeCache,
    a_coordinates,
    betti_coordinates,
    elliptic_exp,
    elliptic_log,
    mpf_to_fraction,
    optimal_agm,
    period_lattice,
    rational_reconstruct,
    theta_map,
)
from cyclotorsion.elliptic import legendre_scheme
from cyclotorsion.errors import PrecisionExhausted
from cyclotorsion.ratfunc import RationalFunction


def lemniscatic_quadrature(prec):
    """Oracle for ∫₁^∞ dx/√(x³−x), independent of the AGM path.

    Substituting x = 1 + 1/t² gives x³−x = s(1+s)(2+s) with s = 1/t², so the
    integrand 2/(t²·√((1+s)(2+s))) has no cancellation and extends
    continuously to t = 0 with value 2.
    """
    with mpmath.workprec(prec + 40):
        def g(t):
            if t == 0:
                return mpmath.mpf(2)
            s = 1 / (t * t)
            return 2 / (t * t * mpmath.sqrt((1 + s) * (2 + s)))

        return mpmath.quad(g, [0, 1, mpmath.inf])


class TestPeriodLattice:
    def test_lemniscatic_period_vs_quadrature(self):
        lattice = period_lattice(0, -1, 0, prec=256)
        with mpmath.workprec(360):
            oracle = lemniscatic_quadrature(256)
            assert abs(lattice.omega1 - oracle) < mpmath.mpf(10) ** -30
            frozen = mpmath.mpf("2.6220575542921198")
            assert abs(lattice.omega1 - frozen) < mpmath.mpf(10) ** -15
            assert abs(lattice.tau - mpmath.mpc(0, 1)) < mpmath.mpf(10) ** -70

    def test_agm_frozen_value(self):
        with mpmath.workprec(128):
            m = optimal_agm(mpmath.sqrt(2), mpmath.mpf(1), 96)
            assert abs(m - mpmath.mpf("1.19814023473559")) < mpmath.mpf("1e-14")

    def test_square_lattice_at_half(self):
        lattice = period_lattice(Fraction(-3, 2), Fraction(1, 2), 0, prec=256)
        with mpmath.workprec(300):
            assert abs(lattice.tau - mpmath.mpc(0, 1)) < mpmath.mpf(10) ** -30

    def test_scaling_homogeneity(self):
        base = period_lattice(0, -1, 0, prec=192)
        scaled = period_lattice(0, -16, 0, prec=192)
        with mpmath.workprec(250):
            tol = mpmath.mpf(2) ** -96
            assert abs(base.omega1 / scaled.omega1 - 2) < tol
            assert abs(base.omega2 / scaled.omega2 - 2) < tol

    def test_half_period_values_match_roots(self):
        lattice = period_lattice(Fraction(-3, 2), Fraction(1, 2), 0, prec=128)
        with mpmath.workprec(190):
            for hp, root in zip(lattice.half_periods(), lattice.roots):
                x, y = lattice.exp_point(hp)
                assert abs(x - root) < mpmath.mpf(2) ** -100
                assert abs(y) < mpmath.mpf(2) ** -100

    def test_singular_curve_rejected(self):
        with pytest.raises(ValueError):
            period_lattice(0, 0, 0, prec=128)

    def test_low_precision_rejected(self):
        with pytest.raises(ValueError):
            period_lattice(0, -1, 0, prec=32)

    def test_real_curve_has_real_omega1(self):
        # three real roots: the canonical basis keeps omega1 on the real axis
        lattice = period_lattice(0, -1, 0, prec=128)
        assert mpmath.im(lattice.omega1) == 0


class TestExpLog:
    @pytest.mark.parametrize("prec", [128, 256])
    def test_roundtrip(self, prec):
        lattice = period_lattice(0, -1, 0, prec=prec)
        rng = random.Random(99 + prec)
        with mpmath.workprec(prec + 120):
            tol = mpmath.mpf(2) ** (-prec // 2)
            for _ in range(15):
                s = mpmath.mpf(rng.randint(5, 95)) / 100
                t = mpmath.mpf(rng.randint(5, 95)) / 100
                z = (s + t * lattice.tau) * lattice.omega1
                point = elliptic_exp(lattice, z)
                z_back = elliptic_log(lattice, point)
                b_orig = betti_coordinates(lattice, z)
                b_back = betti_coordinates(lattice, z_back)
                assert abs(b_orig.b1 - b_back.b1) < tol
                assert abs(b_orig.b2 - b_back.b2) < tol

    def test_log_of_infinity_is_zero(self):
        lattice = period_lattice(0, -1, 0, prec=128)
        assert elliptic_log(lattice, None) == 0

    def test_exp_at_lattice_point_is_infinity(self):
        lattice = period_lattice(0, -1, 0, prec=128)
        assert elliptic_exp(lattice, 0) is None
        with mpmath.workprec(300):
            z = lattice.omega1 + lattice.omega2
        assert elliptic_exp(lattice, z) is None

    def test_two_torsion_lands_on_half_period(self):
        lattice = period_lattice(0, -1, 0, prec=192)
        with mpmath.workprec(260):
            z = elliptic_log(lattice, (0, 0))
            # doubling must land in the lattice
            assert lattice.is_lattice_point(2 * z)
            assert not lattice.is_lattice_point(z)

    def test_log_matches_carlson_on_real_locus(self):
        lattice = period_lattice(0, -1, 0, prec=128)
        with mpmath.workprec(190):
            x0 = mpmath.mpf(3)
            y0 = mpmath.sqrt(x0 ** 3 - x0)
            z = elliptic_log(lattice, (x0, y0))
            x_back, y_back = elliptic_exp(lattice, z)
            assert abs(x_back - x0) < mpmath.mpf(2) ** -100
            assert abs(y_back - y0) < mpmath.mpf(2) ** -100


class TestBetti:
    def test_zero(self):
        lattice = period_lattice(0, -1, 0, prec=128)
        bc = betti_coordinates(lattice, 0)
        assert bc.b1 == 0 and bc.b2 == 0

    def test_midpoint(self):
        lattice = period_lattice(0, -1, 0, prec=128)
        with mpmath.workprec(190):
            z = (lattice.omega1 + lattice.omega2) / 2
            bc = betti_coordinates(lattice, z)
            assert abs(bc.b1 - mpmath.mpf(1) / 2) < mpmath.mpf(2) ** -100
            assert abs(bc.b2 - mpmath.mpf(1) / 2) < mpmath.mpf(2) ** -100

    def test_tie_at_one_pushes_to_zero(self):
        lattice = period_lattice(0, -1, 0, prec=128)
        with mpmath.workprec(300):
            z = (1 - mpmath.mpf(2) ** -140) * lattice.omega1
            bc = betti_coordinates(lattice, z)
            assert bc.b1 == 0 and bc.b2 == 0

    def test_carries_error_bound(self):
        lattice = period_lattice(0, -1, 0, prec=128)
        bc = betti_coordinates(lattice, lattice.omega1 / 3)
        assert isinstance(bc, BettiCoords)
        assert bc.err > 0


class TestACoordinates:
    def test_ones(self):
        vals = a_coordinates([1, 1, 1], 128)
        assert all(v == 0 for v in vals)

    def test_i_is_quarter(self):
        with mpmath.workprec(170):
            v = a_coordinates([mpmath.mpc(0, 1)], 128)[0]
            assert abs(v - mpmath.mpf(1) / 4) < mpmath.mpf(2) ** -120

    def test_primitive_seventh(self):
        with mpmath.workprec(200):
            x = mpmath.exp(2 * mpmath.pi * mpmath.mpc(0, 1) * 3 / 7)
            v = a_coordinates([x], 160)[0]
            assert abs(v - mpmath.mpf(3) / 7) < mpmath.mpf(2) ** -140
            assert abs(mpmath.im(v)) < mpmath.mpf(2) ** -140

    def test_root_of_unity_mod_one(self):
        # principal branch returns values in (-1/2, 1/2]; compare mod 1
        with mpmath.workprec(200):
            x = mpmath.exp(2 * mpmath.pi * mpmath.mpc(0, 1) * 4 / 5)
            v = mpmath.re(a_coordinates([x], 160)[0])
            frac = v - mpmath.floor(v)
            assert abs(frac - mpmath.mpf(4) / 5) < mpmath.mpf(2) ** -140

    def test_off_circle_imaginary_part(self):
        v = a_coordinates([2], 128)[0]
        assert abs(mpmath.im(v)) > 0

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            a_coordinates([1, 0], 128)


class TestRationalReconstruct:
    def test_third(self):
        r = mpmath.mpf(1) / 3
        assert rational_reconstruct(r, 10, mpmath.mpf(10) ** -10) == Fraction(1, 3)

    def test_half_exact(self):
        assert rational_reconstruct(mpmath.mpf("0.5"), 2, Fraction(1, 100)) == Fraction(1, 2)

    def test_inverse_pi_has_no_small_denominator(self):
        with mpmath.workprec(200):
            r = 1 / mpmath.pi
            assert rational_reconstruct(r, 50, mpmath.mpf(10) ** -20) is None

    def test_coarse_tolerance_rejected(self):
        with pytest.raises(ValueError):
            rational_reconstruct(mpmath.mpf("0.5"), 1000, mpmath.mpf("0.001"))

    def test_monotone_under_tighter_tolerance(self):
        with mpmath.workprec(250):
            r = mpmath.mpf(22) / 7 - 3
            first = rational_reconstruct(r, 100, mpmath.mpf(2) ** -60)
            second = rational_reconstruct(r, 100, mpmath.mpf(2) ** -120)
            assert first == second == Fraction(1, 7)

    def test_mpf_to_fraction_exact(self):
        x = mpmath.mpf(3) / 8
        assert mpf_to_fraction(x) == Fraction(3, 8)
        assert mpf_to_fraction(-x) == Fraction(-3, 8)
        assert mpf_to_fraction(mpmath.mpf(0)) == Fraction(0)


class TestThetaMap:
    def test_legendre_two_torsion(self):
        scheme = legendre_scheme()
        lp = theta_map(scheme, 2, [1, 1], None, prec=128)
        with mpmath.workprec(190):
            halves = {0, 1}
            b1_twice = +(2 * lp.b1)
            b2_twice = +(2 * lp.b2)
            assert min(abs(b1_twice - h) for h in halves) < mpmath.mpf(2) ** -100
            assert min(abs(b2_twice - h) for h in halves) < mpmath.mpf(2) ** -100
            assert (lp.b1, lp.b2) != (0, 0)
            assert all(v == 0 for v in lp.a)

    def test_stable_across_precisions(self):
        scheme = legendre_scheme()
        low = theta_map(scheme, 2, [1, 1], None, prec=128)
        high = theta_map(scheme, 2, [1, 1], None, prec=256)
        with mpmath.workprec(300):
            assert abs(low.b1 - high.b1) < mpmath.mpf(2) ** -64
            assert abs(low.b2 - high.b2) < mpmath.mpf(2) ** -64

    def test_third_torsion_lands_on_thirds(self):
        # lambda = 4*sqrt(2) - 4 makes the section (2, *) a 3-torsion point
        scheme = legendre_scheme()
        with mpmath.workprec(320):
            lam0 = 4 * mpmath.sqrt(2) - 4
            lp = theta_map(scheme, lam0, [1], None, prec=256)
            tol = mpmath.mpf(10) ** -20
            thirds = [mpmath.mpf(k) / 3 for k in range(4)]
            d1 = min(abs(lp.b1 - t) for t in thirds)
            d2 = min(abs(lp.b2 - t) for t in thirds)
            assert d1 < tol and d2 < tol
            near_zero = (min(abs(lp.b1 - t) for t in (0, 1)) < tol
                         and min(abs(lp.b2 - t) for t in (0, 1)) < tol)
            assert not near_zero

    def test_consistency_guard(self):
        scheme = legendre_scheme()
        ident = RationalFunction.variable()
        theta_map(scheme, 2, [1, 1], None, prec=128, consistency=ident)
        with pytest.raises(ValueError):
            theta_map(scheme, 2, [1], None, prec=128, consistency=ident)

    def test_unit_circle_gives_real_a(self):
        scheme = legendre_scheme()
        with mpmath.workprec(190):
            zeta = mpmath.exp(2 * mpmath.pi * mpmath.mpc(0, 1) / 5)
            lp = theta_map(scheme, 3, [zeta, zeta ** -1], None, prec=128)
            for v in lp.a:
                assert abs(mpmath.im(v)) < mpmath.mpf(2) ** -100


class TestLatticeCache:
    def test_reuse(self):
        cache = LatticeCache()
        first = cache.get(0, -1, 0, 128)
        second = cache.get(0, -1, 0, 128)
        assert first is second
        third = cache.get(0, -1, 0, 192)
        assert third is not first
