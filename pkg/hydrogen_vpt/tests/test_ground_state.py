import math

import pytest
from mpmath import mp
from pydantic import ValidationError

from hydrogen_vpt import ground_state as gs
from hydrogen_vpt.effective_potential import w1
from hydrogen_vpt.errors import DomainError, NumericalError
from hydrogen_vpt.models import FrequencyTriple, ThermoPoint
from hydrogen_vpt.weak_field import weak_field_binding

HYDROGEN_T0 = -4.0 / (3.0 * math.pi)


class TestEnergyT0:
    def test_hydrogen_trial_energy(self):
        omega = 32.0 / (9.0 * math.pi)
        assert gs.energy_T0(omega, 0.5 * omega, 0.0) == pytest.approx(HYDROGEN_T0, rel=1e-14)

    def test_without_coulomb(self):
        assert gs.energy_T0(2.0, 0.0, 3.0, coulomb=False) == pytest.approx((4.0 + 9.0) / 8.0)

    @pytest.mark.parametrize(
        "args,match",
        [
            ((0.0, 1.0, 1.0), "omega_perp2"),
            ((1.0, 0.0, 1.0), "omega_par"),
            ((1.0, 1.0, -1.0), "'B'"),
            ((float("inf"), 1.0, 1.0), "omega_perp2"),
        ],
    )
    def test_rejects_bad_arguments(self, args, match):
        with pytest.raises(DomainError, match=match):
            gs.energy_T0(*args)

    @pytest.mark.parametrize("beta,omega_perp1_fraction,tolerance", [(1e6, 0.5, 1e-3), (1e6, 0.9, 1e-3), (1e4, 0.5, 5e-3)])
    def test_low_temperature_limit_of_w1(self, beta, omega_perp1_fraction, tolerance):
        omega_perp2, omega_par, B = 1.2, 0.7, 1.0
        f = FrequencyTriple.of(omega_perp1_fraction * omega_perp2, omega_perp2, omega_par)
        value = w1(ThermoPoint.of(beta, B), f).value
        assert value == pytest.approx(gs.energy_T0(omega_perp2, omega_par, B), abs=tolerance)

    def test_omega_perp1_barely_matters_at_low_temperature(self):
        point = ThermoPoint.of(1e5, 1.0)
        values = [w1(point, FrequencyTriple.of(fraction * 1.2, 1.2, 0.7)).value for fraction in (0.5, 0.9)]
        assert max(values) - min(values) < 1e-3


class TestGroundStateResult:
    def test_converged_must_be_finite(self):
        with pytest.raises(ValidationError, match="finite"):
            gs.GroundStateResult(B=1.0, energy=math.nan, omega_perp2=1.0, omega_par=1.0)

    def test_converged_needs_positive_omega_par_with_coulomb(self):
        with pytest.raises(ValidationError, match="omega_par"):
            gs.GroundStateResult(B=1.0, energy=0.0, omega_perp2=1.0, omega_par=0.0)

    def test_failed_row(self):
        row = gs.GroundStateResult.failed(2.0, NumericalError.not_converged("ground-state optimization", B=2.0))
        assert row.status == "failed"
        assert math.isnan(row.binding)
        assert row.landau_estimate == pytest.approx(0.5 * math.log(2.0) ** 2)
        assert row.diagnostics["data"]["procedure"] == "ground-state optimization"

    def test_serialized_fields(self):
        row = gs.GroundStateResult(B=0.0, energy=-0.4, omega_perp2=1.0, omega_par=0.5)
        dumped = row.model_dump()
        assert dumped["binding"] == pytest.approx(0.4)
        assert dumped["landau_estimate"] is None


class TestOptimizeT0:
    def test_zero_field(self, event_recorder):
        result = gs.optimize_T0(0.0)
        assert result.energy == pytest.approx(HYDROGEN_T0, abs=1e-8)
        assert result.binding == pytest.approx(0.4244131816, abs=1e-8)
        assert result.omega_perp2 == pytest.approx(32.0 / (9.0 * math.pi), rel=1e-4)
        assert result.omega_par == pytest.approx(16.0 / (9.0 * math.pi), rel=1e-4)
        assert event_recorder.events[-1].operation == "optimize_T0"
        assert event_recorder.events[-1].details["status"] == "converged"

    def test_strong_field_binding(self):
        result = gs.optimize_T0(1e5)
        assert result.binding == pytest.approx(20.60, abs=0.05)
        assert result.omega_perp2 == pytest.approx(1e5, rel=1e-2)

    @pytest.mark.parametrize("B", [0.1, 1.0, 100.0])
    def test_landau_level_without_coulomb(self, B):
        result = gs.optimize_T0(B, coulomb=False)
        assert result.energy == pytest.approx(0.5 * B, abs=1e-10)
        assert result.omega_perp2 == pytest.approx(B, rel=1e-5)
        assert result.omega_par == 0.0

    def test_free_particle_without_coulomb_has_no_optimum(self):
        with pytest.raises(DomainError, match="free particle"):
            gs.optimize_T0(0.0, coulomb=False)

    def test_rejects_negative_field(self, event_recorder):
        with pytest.raises(DomainError):
            gs.optimize_T0(-1.0)
        assert event_recorder.events[-1].outcome == "failure"

    def test_weak_field_agrees_with_series(self):
        B = 1e-6
        result = gs.optimize_T0(B)
        assert result.binding == pytest.approx(float(weak_field_binding(B, order=3)), abs=1e-8)

    def test_high_precision_digits(self):
        result = gs.optimize_T0(0.0, precision=30)
        with mp.workdps(30):
            assert abs(mp.mpf(result.energy_high_precision) + 4 / (3 * mp.pi)) < mp.mpf(10) ** -25

    def test_rejects_low_precision(self):
        with pytest.raises(DomainError, match="precision"):
            gs.optimize_T0(0.0, precision=10)

    @pytest.mark.slow
    def test_residual_beyond_third_order_scales_as_B8(self):
        fields = (0.01, 0.02, 0.05)
        with mp.workdps(50):
            gaps = []
            for B in fields:
                energy = mp.mpf(gs.optimize_T0(B, precision=50).energy_high_precision)
                series_energy = mp.mpf(B) / 2 - weak_field_binding(B, order=3, precision=50)
                gaps.append(abs(energy - series_energy))
            slope = (mp.log(gaps[-1]) - mp.log(gaps[0])) / (mp.log(fields[-1]) - mp.log(fields[0]))
            scaled = [gap / mp.mpf(B) ** 8 for gap, B in zip(gaps, fields)]
        assert slope >= 7
        # a single constant C bounds every gap by C B^8
        assert max(scaled) < 1.5 * min(scaled)


class TestBindingScan:
    def test_monotone(self):
        rows = gs.binding_scan([0.0, 0.1, 1.0, 10.0, 100.0])
        assert all(r.status == "converged" for r in rows)
        bindings = [r.binding for r in rows]
        assert all(b > a for a, b in zip(bindings, bindings[1:]))

    def test_strong_field_stays_below_landau_estimate(self):
        rows = gs.binding_scan([1e3, 1e4])
        for row in rows:
            assert row.binding < row.landau_estimate

    @pytest.mark.parametrize("B_list,match", [([], "at least one"), ([1.0, 0.5], "ascending"), ([1.0, 1.0], "ascending")])
    def test_rejects_bad_lists(self, B_list, match):
        with pytest.raises(DomainError, match=match):
            gs.binding_scan(B_list)

    def test_failed_point_does_not_stop_the_scan(self, monkeypatch):
        real = gs.optimize_T0

        def flaky(B, **kwargs):
            if B == 1.0:
                raise NumericalError.not_converged("ground-state optimization", B=B)
            return real(B, **kwargs)

        monkeypatch.setattr(gs, "optimize_T0", flaky)
        rows = gs.binding_scan([0.5, 1.0, 2.0])
        assert [r.status for r in rows] == ["converged", "failed", "converged"]
        assert "did not converge" in rows[1].error
