import logging

import pytest

from hydrogen_vpt.config import PRECISION_ENV_VAR, Settings, fd_step, load_settings


class TestLoadSettings:
    def test_defaults(self, fresh_settings, monkeypatch):
        monkeypatch.delenv(PRECISION_ENV_VAR, raising=False)
        settings = load_settings()
        assert settings.precision == 50
        assert settings.residual_tolerance == 1e-6
        assert settings.csv_digits == 10

    def test_cached(self, fresh_settings):
        assert load_settings() is load_settings()

    def test_environment_override(self, fresh_settings, monkeypatch):
        monkeypatch.setenv(PRECISION_ENV_VAR, "80")
        assert load_settings().precision == 80

    def test_unparsable_override_is_ignored(self, fresh_settings, monkeypatch, caplog):
        monkeypatch.setenv(PRECISION_ENV_VAR, "lots")
        with caplog.at_level(logging.WARNING, logger="hydrogen_vpt.config"):
            assert load_settings().precision == 50
        assert "not an integer" in caplog.text

    def test_out_of_range_override_is_ignored(self, fresh_settings, monkeypatch, caplog):
        monkeypatch.setenv(PRECISION_ENV_VAR, "5")
        with caplog.at_level(logging.WARNING, logger="hydrogen_vpt.config"):
            assert load_settings().precision == 50
        assert "out-of-range" in caplog.text


class TestFdStep:
    @pytest.mark.parametrize("omega,expected", [(0.0, 1e-6), (0.5, 1e-6), (-20.0, 2e-5), (1e5, 0.1)])
    def test_scales_with_frequency(self, omega, expected):
        assert fd_step(omega, Settings()) == pytest.approx(expected)
