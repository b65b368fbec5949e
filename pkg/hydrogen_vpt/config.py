"""Package-wide numerical settings and their environment overrides."""

from __future__ import annotations

import logging
import os
from functools import lru_cache

from pydantic import BaseModel, Field, ValidationError

log = logging.getLogger(__name__)

# Environment variable holding the default working precision (decimal digits)
# of the series solver.
PRECISION_ENV_VAR = "HYDROGEN_VPT_PRECISION"


class Settings(BaseModel):
    """Defaults shared by the numerical modules."""

    precision: int = Field(default=50, ge=20, le=1000)
    """Working precision of the series solver, in decimal digits."""

    quad_tolerance: float = Field(default=1e-10, gt=0)
    """Absolute error that the smearing quadrature must certify."""

    quad_epsabs: float = Field(default=1e-13, gt=0)
    quad_epsrel: float = Field(default=1e-12, gt=0)
    quad_limit: int = Field(default=200, ge=10)

    residual_tolerance: float = Field(default=1e-6, gt=0)
    """Gradient-norm tolerance of the variational optimizer."""

    fd_step: float = Field(default=1e-6, gt=0)
    """Finite-difference step rule: h = max(fd_step, fd_step * |omega|)."""

    max_evaluations: int = Field(default=20000, ge=100)

    csv_digits: int = Field(default=10, ge=3, le=17)


@lru_cache(maxsize=1)
def load_settings() -> Settings:
    """Build the settings, applying environment overrides.

    An unparsable override is logged and ignored.
    """
    overrides: dict[str, int] = {}
    raw = os.environ.get(PRECISION_ENV_VAR)
    if raw:
        try:
            overrides["precision"] = int(raw)
        except ValueError:
            log.warning("Ignoring %s=%r: not an integer.", PRECISION_ENV_VAR, raw)
    try:
        return Settings(**overrides)
    except ValidationError:
        log.warning("Ignoring out-of-range %s=%r.", PRECISION_ENV_VAR, raw, exc_info=True)
        return Settings()


def fd_step(omega: float, settings: Settings | None = None) -> float:
    s = settings or load_settings()
    return max(s.fd_step, s.fd_step * abs(omega))
