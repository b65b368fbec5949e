import math

import mpmath
import numpy as np
import pytest

from hydrogen_vpt.errors import DomainError
from hydrogen_vpt.models import SmearingInput
from hydrogen_vpt.smearing import (
    coulomb_expectation,
    coulomb_expectation_direct,
    coulomb_expectation_origin,
    coulomb_expectation_origin_T0,
)

TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


def _random_configs(count=20, seed=11):
    rng = np.random.default_rng(seed)
    configs = []
    for _ in range(count):
        a2_perp, a2_par = (float(v) for v in rng.uniform(0.05, 4.0, size=2))
        rho0, z0 = (float(v) for v in rng.uniform(0.0, 3.0, size=2))
        configs.append((a2_perp, a2_par, rho0, z0))
    return configs


class TestCoulombExpectation:
    def test_negative(self):
        assert coulomb_expectation(SmearingInput.of(0.5, 0.8, 1.0, 0.3)) < 0

    def test_far_from_nucleus_is_bare_coulomb(self):
        value = coulomb_expectation(SmearingInput.of(0.5, 0.5, 30.0, 40.0))
        assert value == pytest.approx(-1.0 / 50.0, rel=1e-6)

    def test_isotropic_matches_error_function(self):
        a2, r = 0.7, 1.3
        expected = -math.erf(r / math.sqrt(2.0 * a2)) / r
        assert coulomb_expectation(SmearingInput.of(a2, a2, r, 0.0)) == pytest.approx(expected, rel=1e-10)
        assert coulomb_expectation(SmearingInput.of(a2, a2, 0.0, r)) == pytest.approx(expected, rel=1e-10)

    def test_even_in_z(self):
        up = coulomb_expectation(SmearingInput.of(0.4, 1.1, 0.5, 0.9))
        down = coulomb_expectation(SmearingInput.of(0.4, 1.1, 0.5, -0.9))
        assert up == down

    @pytest.mark.parametrize("a2_perp,a2_par", [(2.0, 0.5), (0.5, 2.0), (1.0, 1.0), (1.0, 1.0 + 1e-9)])
    def test_origin_closed_form_matches_quadrature(self, a2_perp, a2_par):
        quad = coulomb_expectation(SmearingInput.of(a2_perp, a2_par))
        assert -quad == pytest.approx(coulomb_expectation_origin(a2_perp, a2_par), rel=1e-9)

    def test_rejects_zero_width(self):
        with pytest.raises(DomainError, match="a2_perp"):
            SmearingInput.of(0.0, 1.0)

    @pytest.mark.slow
    @pytest.mark.parametrize("a2_perp,a2_par,rho0,z0", _random_configs())
    def test_matches_three_dimensional_average(self, a2_perp, a2_par, rho0, z0):
        smearing = SmearingInput.of(a2_perp, a2_par, rho0, z0)
        assert coulomb_expectation(smearing) == pytest.approx(coulomb_expectation_direct(smearing), rel=1e-6)


class TestOriginClosedForm:
    def test_isotropic(self):
        assert coulomb_expectation_origin(0.5, 0.5) == pytest.approx(math.sqrt(2.0 / (math.pi * 0.5)), rel=1e-14)

    @pytest.mark.parametrize("a2_perp", [1.0 - 1e-5, 1.0 - 1e-7, 1.0 + 1e-7, 1.0 + 1e-5])
    def test_continuous_across_isotropic_point(self, a2_perp):
        assert coulomb_expectation_origin(a2_perp, 1.0) == pytest.approx(
            coulomb_expectation_origin(1.0, 1.0), rel=1e-5
        )

    def test_strongly_prolate(self):
        # a2_par >> a2_perp: the artanh branch near u = 1 stays finite
        assert math.isfinite(coulomb_expectation_origin(1e-8, 1.0))

    @pytest.mark.parametrize("a2_perp,a2_par", [(0.0, 1.0), (1.0, -1.0), (float("nan"), 1.0)])
    def test_rejects_bad_widths(self, a2_perp, a2_par):
        with pytest.raises(DomainError):
            coulomb_expectation_origin(a2_perp, a2_par)


class TestOriginZeroTemperature:
    @pytest.mark.parametrize("omega_par,omega_perp2", [(2.0, 1.0), (0.3, 1.0), (0.5, 1.0), (0.5, 1.0 + 1e-8)])
    def test_equals_ground_state_widths(self, omega_par, omega_perp2):
        expected = coulomb_expectation_origin(1.0 / omega_perp2, 1.0 / (2.0 * omega_par))
        assert coulomb_expectation_origin_T0(omega_par, omega_perp2) == pytest.approx(expected, rel=1e-12)

    def test_middle_case(self):
        assert coulomb_expectation_origin_T0(0.5, 1.0) == pytest.approx(TWO_OVER_SQRT_PI * math.sqrt(0.5), rel=1e-12)

    def test_continuous_at_branch_boundary(self):
        center = coulomb_expectation_origin_T0(0.5, 1.0)
        above = coulomb_expectation_origin_T0(0.5 + 5e-6, 1.0)
        below = coulomb_expectation_origin_T0(0.5 - 5e-6, 1.0)
        assert above == pytest.approx(center, rel=1e-4)
        assert below == pytest.approx(center, rel=1e-4)
        assert 0.5 * (above + below) == pytest.approx(center, rel=1e-9)

    def test_matches_quadrature_at_ground_state_widths(self):
        omega_par, omega_perp2 = 1.7, 0.6
        quad = coulomb_expectation(SmearingInput.of(1.0 / omega_perp2, 1.0 / (2.0 * omega_par)))
        assert coulomb_expectation_origin_T0(omega_par, omega_perp2) == pytest.approx(-quad, rel=1e-9)

    def test_hydrogen_trial_value(self):
        # isotropic at omega = 32/(9 pi): <1/r> = 8/(3 pi)
        omega = 32.0 / (9.0 * math.pi)
        assert coulomb_expectation_origin_T0(0.5 * omega, omega) == pytest.approx(8.0 / (3.0 * math.pi), rel=1e-12)

    @pytest.mark.parametrize("offset", [-0.6, -1e-5, -2e-6, 2e-6, 1e-5])
    def test_accurate_next_to_expansion_band(self, offset):
        omega_par, omega_perp2 = 0.5 * (1.0 + offset), 1.0
        with mpmath.mp.workdps(40):
            op, o2 = mpmath.mpf(omega_par), mpmath.mpf(omega_perp2)
            d = 2 * op - o2
            s = mpmath.sqrt(abs(d) / o2)
            shape = mpmath.atan(s) if d > 0 else mpmath.atanh(s)
            expected = float(2 / mpmath.sqrt(mpmath.pi) * mpmath.sqrt(op * o2 / abs(d)) * shape)
        assert coulomb_expectation_origin_T0(omega_par, omega_perp2) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.xfail(strict=True, reason="arctan prefactor with omega_par - omega_perp2 is discontinuous at the branch point")
    def test_uncorrected_prefactor(self):
        omega_par, omega_perp2 = 2.0, 1.0
        uncorrected = (
            TWO_OVER_SQRT_PI
            * math.sqrt(omega_par * omega_perp2 / (omega_par - omega_perp2))
            * math.atan(math.sqrt(2.0 * omega_par / omega_perp2 - 1.0))
        )
        assert coulomb_expectation_origin_T0(omega_par, omega_perp2) == pytest.approx(uncorrected, rel=1e-6)

    def test_rejects_zero_frequency(self):
        with pytest.raises(DomainError, match="omega_par"):
            coulomb_expectation_origin_T0(0.0, 1.0)


def _random_frequency_pairs(count=200, seed=5):
    rng = np.random.default_rng(seed)
    pairs = [(float(a), float(b)) for a, b in 10.0 ** rng.uniform(-1.0, 1.0, size=(count - 4, 2))]
    # exact middle case 2 omega_par = omega_perp2
    return pairs + [(0.25, 0.5), (1.0, 2.0), (3.0, 6.0), (0.1, 0.2)]


class TestSmearingProperties:
    def test_origin_closed_form_matches_quadrature_on_random_pairs(self):
        pairs = _random_frequency_pairs()
        branches = {(2.0 * op > o2) - (2.0 * op < o2) for op, o2 in pairs}
        assert branches == {-1, 0, 1}
        for omega_par, omega_perp2 in pairs:
            quad = coulomb_expectation(SmearingInput.of(1.0 / omega_perp2, 1.0 / (2.0 * omega_par)))
            assert coulomb_expectation_origin_T0(omega_par, omega_perp2) == pytest.approx(-quad, rel=1e-8)

    @pytest.mark.parametrize("axis", ["rho0", "z0"])
    def test_magnitude_decreases_along_rays(self, axis):
        distances = np.linspace(0.0, 6.0, 25)
        magnitudes = []
        for d in distances:
            coords = {"rho0": 0.0, "z0": 0.0, axis: float(d)}
            magnitudes.append(-coulomb_expectation(SmearingInput.of(0.7, 1.9, coords["rho0"], coords["z0"])))
        assert all(later < earlier for earlier, later in zip(magnitudes, magnitudes[1:]))

    @pytest.mark.parametrize("lam", [0.25, 3.0, 40.0])
    def test_scales_as_inverse_square_root(self, lam):
        base = coulomb_expectation(SmearingInput.of(0.6, 1.4, 0.8, 1.1))
        root = math.sqrt(lam)
        scaled = coulomb_expectation(SmearingInput.of(0.6 * lam, 1.4 * lam, 0.8 * root, 1.1 * root))
        assert scaled == pytest.approx(base / root, rel=1e-9)
