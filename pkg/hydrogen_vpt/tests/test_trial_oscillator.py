import math

import numpy as np
import pytest

from hydrogen_vpt import trial_oscillator as to
from hydrogen_vpt.errors import DomainError, SingularConfigurationError
from hydrogen_vpt.models import FrequencyTriple


def _make_triple(o1, o2, op):
    return FrequencyTriple.of(o1, o2, op)


def _free_energy(beta, o1, o2, op):
    return to.restricted_free_energy(beta, _make_triple(o1, o2, op))


def _random_points(count=20, seed=7):
    rng = np.random.default_rng(seed)
    points = []
    while len(points) < count:
        beta = float(rng.uniform(0.1, 50.0))
        o1, o2, op = (float(v) for v in rng.uniform(0.05, 5.0, size=3))
        if abs(o1 - o2) > 0.05:
            points.append((beta, o1, o2, op))
    return points


class TestSingleModeFreeEnergy:
    def test_zero_frequency(self):
        assert to.single_mode_free_energy(3.0, 0.0) == 0.0

    def test_increasing(self):
        values = [to.single_mode_free_energy(2.0, w) for w in (0.1, 0.5, 1.0, 5.0, 50.0)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_closed_form(self):
        beta, omega = 2.0, 1.5
        x = 0.5 * beta * omega
        assert to.single_mode_free_energy(beta, omega) == pytest.approx(math.log(math.sinh(x) / x) / beta, rel=1e-13)

    def test_large_argument_does_not_overflow(self):
        beta, omega = 1e4, 100.0
        x = 0.5 * beta * omega
        expected = (x - math.log(2 * x)) / beta
        assert to.single_mode_free_energy(beta, omega) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("beta_omega", [to.SMALL_ARGUMENT, to.SERIES_ARGUMENT])
    def test_continuous_at_branch_switch(self, beta_omega):
        below = to.single_mode_free_energy(1.0, beta_omega * (1 - 1e-12))
        above = to.single_mode_free_energy(1.0, beta_omega * (1 + 1e-12))
        assert above == pytest.approx(below, rel=1e-9)

    def test_negative_frequency(self):
        with pytest.raises(DomainError, match="non-negative"):
            to.single_mode_free_energy(1.0, -1.0)

    @pytest.mark.parametrize("beta", [0.0, -1.0, float("inf")])
    def test_bad_beta(self, beta):
        with pytest.raises(DomainError, match="beta"):
            to.single_mode_free_energy(beta, 1.0)


class TestWidthFunction:
    def test_zero(self):
        assert to.width_function_g(1.0, 0.0) == 0.0

    def test_ground_state_limit(self):
        assert to.width_function_g(1e3, 10.0) == pytest.approx(0.5 - 1 / 1e4, rel=1e-12)

    def test_is_derivative_of_free_energy(self):
        beta, omega, h = 3.0, 0.7, 1e-5
        fd = (to.single_mode_free_energy(beta, omega + h) - to.single_mode_free_energy(beta, omega - h)) / (2 * h)
        assert to.width_function_g(beta, omega) == pytest.approx(fd, rel=1e-8)

    def test_small_argument_series(self):
        beta, omega = 1.0, 1e-6
        assert to.width_function_g(beta, omega) == pytest.approx(beta * omega / 12, rel=1e-9)


class TestRestrictedPartition:
    def test_product_of_modes(self):
        beta, f = 2.0, _make_triple(0.4, 1.2, 0.9)
        expected = 1.0
        for omega in (0.8, 0.4, 0.9):
            x = 0.5 * beta * omega
            expected *= x / math.sinh(x)
        assert to.restricted_partition(beta, f) == pytest.approx(expected, rel=1e-12)

    def test_log_partition_stays_finite_at_low_temperature(self):
        f = _make_triple(1.0, 2.0, 3.0)
        assert math.isfinite(to.log_restricted_partition(1e6, f))

    def test_mode_frequencies(self):
        assert to.mode_frequencies(_make_triple(3.0, 1.0, 0.0)) == (2.0, 1.0)

    @pytest.mark.parametrize("beta,o1,o2,op", _random_points(count=5, seed=13))
    def test_symmetric_under_transverse_swap(self, beta, o1, o2, op):
        assert to.restricted_partition(beta, _make_triple(o1, o2, op)) == to.restricted_partition(
            beta, _make_triple(o2, o1, op)
        )

    def test_classical_limit_is_one(self):
        assert to.restricted_partition(1e-8, _make_triple(0.7, 1.3, 0.4)) == pytest.approx(1.0, abs=1e-15)


class TestFluctuationWidths:
    @pytest.mark.parametrize("beta", [1e-2, 1e-3])
    def test_classical_limit(self, beta):
        widths = to.fluctuation_widths(beta, _make_triple(0.7, 1.3, 0.4))
        # relative corrections are O(beta^2)
        assert widths.a2_perp == pytest.approx(beta / 12.0, rel=1e-4)
        assert widths.a2_par == pytest.approx(beta / 12.0, rel=1e-4)

    @pytest.mark.parametrize("beta,o1,o2,op", _random_points())
    def test_match_free_energy_derivatives(self, beta, o1, o2, op):
        widths = to.fluctuation_widths(beta, _make_triple(o1, o2, op))

        def d(index, x):
            h = 1e-5 * x[index]
            up, down = list(x), list(x)
            up[index] += h
            down[index] -= h
            return (_free_energy(beta, *up) - _free_energy(beta, *down)) / (2 * h)

        x = (o1, o2, op)
        assert widths.b2_perp == pytest.approx(d(0, x), rel=1e-6, abs=1e-8)
        assert widths.a2_perp == pytest.approx(2.0 / o2 * d(1, x), rel=1e-6)
        assert widths.a2_par == pytest.approx(d(2, x) / op, rel=1e-6)

    def test_free_particle(self):
        widths = to.fluctuation_widths(6.0, _make_triple(0.0, 0.0, 0.0))
        assert widths.a2_perp == pytest.approx(0.5)
        assert widths.a2_par == pytest.approx(0.5)
        assert widths.b2_perp == 0.0

    def test_zero_omega_perp1_is_the_limit(self):
        beta = 4.0
        exact = to.fluctuation_widths(beta, _make_triple(0.0, 1.3, 0.4))
        near = to.fluctuation_widths(beta, _make_triple(1e-9, 1.3, 0.4))
        assert exact.a2_perp == pytest.approx(near.a2_perp, rel=1e-8)
        assert exact.b2_perp == pytest.approx(near.b2_perp, abs=1e-8)

    def test_smooth_across_equal_transverse_frequencies(self):
        beta = 2.0
        below = to.fluctuation_widths(beta, _make_triple(1.0 - 1e-7, 1.0, 0.5))
        equal = to.fluctuation_widths(beta, _make_triple(1.0, 1.0, 0.5))
        above = to.fluctuation_widths(beta, _make_triple(1.0 + 1e-7, 1.0, 0.5))
        assert below.a2_perp == pytest.approx(equal.a2_perp, rel=1e-6)
        assert above.a2_perp == pytest.approx(equal.a2_perp, rel=1e-6)
        assert below.b2_perp == pytest.approx(equal.b2_perp, rel=1e-6)
        assert above.b2_perp == pytest.approx(equal.b2_perp, rel=1e-6)

    def test_ground_state_widths(self):
        widths = to.fluctuation_widths(1e6, _make_triple(0.5, 2.0, 0.8))
        assert widths.a2_perp == pytest.approx(1 / 2.0, rel=1e-5)
        assert widths.a2_par == pytest.approx(1 / (2 * 0.8), rel=1e-5)
        assert widths.b2_perp == pytest.approx(0.0, abs=1e-5)

    def test_singular_transverse_width(self):
        f = _make_triple(1.0, 0.0, 0.5)
        assert to.is_singular(f)
        with pytest.raises(SingularConfigurationError, match="omega_perp2"):
            to.fluctuation_widths(1.0, f)

    def test_negative_frequency_rejected(self):
        with pytest.raises(DomainError, match="omega_perp1"):
            FrequencyTriple.of(-1.0, 1.0, 1.0)

    def test_far_field_triple(self):
        beta, omega_c = 3.0, 1.7
        widths = to.fluctuation_widths(beta, _make_triple(omega_c, omega_c, 0.4))
        g = to.width_function_g(beta, omega_c)
        assert widths.a2_perp == pytest.approx(g / omega_c, rel=1e-14)
        assert widths.b2_perp == pytest.approx(0.5 * g, rel=1e-14)

    def test_reference_point(self):
        beta, x = 1.0, (1.0, 3.0, 2.0)
        widths = to.fluctuation_widths(beta, _make_triple(*x))
        h = 1e-5

        def shifted(index, delta):
            y = list(x)
            y[index] += delta
            return _free_energy(beta, *y)

        d_perp1 = (shifted(0, h) - shifted(0, -h)) / (2 * h)
        # derivatives with respect to the squared frequencies
        d_perp2_sq = (
            _free_energy(beta, 1.0, math.sqrt(9.0 + h), 2.0) - _free_energy(beta, 1.0, math.sqrt(9.0 - h), 2.0)
        ) / (2 * h)
        d_par_sq = (
            _free_energy(beta, 1.0, 3.0, math.sqrt(4.0 + h)) - _free_energy(beta, 1.0, 3.0, math.sqrt(4.0 - h))
        ) / (2 * h)
        assert widths.b2_perp == pytest.approx(d_perp1, rel=1e-6)
        assert widths.a2_perp == pytest.approx(4.0 * d_perp2_sq, rel=1e-6)
        assert widths.a2_par == pytest.approx(2.0 * d_par_sq, rel=1e-6)
