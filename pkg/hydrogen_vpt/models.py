"""
Shared domain records.

All quantities are in natural atomic units (hbar = e^2 = k_B = c = M = 1).
"""

from __future__ import annotations

from typing import TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import DomainError

_Model = TypeVar("_Model", bound=BaseModel)


def build(model: type[_Model], **fields) -> _Model:
    """Construct ``model`` and report validation failures as DomainError."""
    try:
        return model(**fields)
    except ValidationError as error:
        raise DomainError.from_validation(error) from error


class FrequencyTriple(BaseModel):
    """The trial frequencies (omega_perp1, omega_perp2, omega_par)."""

    model_config = ConfigDict(frozen=True)

    omega_perp1: float = Field(ge=0, allow_inf_nan=False)
    omega_perp2: float = Field(ge=0, allow_inf_nan=False)
    omega_par: float = Field(ge=0, allow_inf_nan=False)

    @classmethod
    def of(cls, omega_perp1: float, omega_perp2: float, omega_par: float) -> "FrequencyTriple":
        return build(cls, omega_perp1=omega_perp1, omega_perp2=omega_perp2, omega_par=omega_par)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.omega_perp1, self.omega_perp2, self.omega_par)


class ThermoPoint(BaseModel):
    """
    Inverse temperature, field strength and anchor position.

    The cyclotron frequency equals ``B`` in natural units. Positions enter
    only through the transverse distance ``rho0`` and the longitudinal
    coordinate ``z0``.
    """

    model_config = ConfigDict(frozen=True)

    beta: float = Field(gt=0, allow_inf_nan=False)
    B: float = Field(ge=0, allow_inf_nan=False)
    rho0: float = Field(default=0.0, ge=0, allow_inf_nan=False)
    z0: float = Field(default=0.0, allow_inf_nan=False)

    @classmethod
    def of(cls, beta: float, B: float, rho0: float = 0.0, z0: float = 0.0) -> "ThermoPoint":
        return build(cls, beta=beta, B=B, rho0=rho0, z0=z0)

    @property
    def omega_c(self) -> float:
        return self.B

    def moved_to(self, rho0: float, z0: float) -> "ThermoPoint":
        return ThermoPoint.of(self.beta, self.B, rho0, z0)


class FluctuationWidths(BaseModel):
    """Transverse and longitudinal widths a2_perp, a2_par and the mixed moment b2_perp."""

    model_config = ConfigDict(frozen=True)

    a2_perp: float = Field(gt=0, allow_inf_nan=False)
    a2_par: float = Field(gt=0, allow_inf_nan=False)
    b2_perp: float = Field(allow_inf_nan=False)


class SmearingInput(BaseModel):
    model_config = ConfigDict(frozen=True)

    a2_perp: float = Field(gt=0, allow_inf_nan=False)
    a2_par: float = Field(gt=0, allow_inf_nan=False)
    rho0: float = Field(default=0.0, ge=0, allow_inf_nan=False)
    z0: float = Field(default=0.0, allow_inf_nan=False)

    @classmethod
    def of(cls, a2_perp: float, a2_par: float, rho0: float = 0.0, z0: float = 0.0) -> "SmearingInput":
        return build(cls, a2_perp=a2_perp, a2_par=a2_par, rho0=rho0, z0=z0)


class PotentialEvaluation(BaseModel):
    """One evaluation of the first-order effective classical potential."""

    model_config = ConfigDict(frozen=True)

    value: float = Field(allow_inf_nan=False)
    widths: FluctuationWidths
    frequencies: FrequencyTriple
    point: ThermoPoint
