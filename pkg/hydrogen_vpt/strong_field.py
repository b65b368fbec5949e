"""
Strong-field asymptotics of the first-order binding energy.

For B >> 1 the transverse frequency locks to the cyclotron frequency and the
binding energy reduces to

    eps(Omega_perp, Omega_par) = B/2 - [Omega_perp/4 + B^2/(4 Omega_perp) + Omega_par/4
                                        + sqrt(Omega_par/pi) ln(Omega_par / (2 Omega_perp))],

whose optimum expands in powers of 1/ln B.
"""

from __future__ import annotations

import logging
import math
from typing import Sequence

from pydantic import BaseModel, ConfigDict, Field, computed_field
from scipy import optimize

from .errors import DomainError, NumericalError

log = logging.getLogger(__name__)

A_CONSTANT = 2.0 - math.log(2.0)
B_CONSTANT = math.log(math.pi / 2.0) - 2.0


def _log_field(B: float) -> float:
    if not (B > 0) or not math.isfinite(B) or math.log(B) <= 1.0:
        raise DomainError.invalid_argument("B", "the ln B expansion needs ln B > 1", B)
    return math.log(B)


def landau_estimate(B: float) -> float:
    """The simple asymptotic estimate 0.5 ln^2 B."""
    if not (B > 0):
        raise DomainError.invalid_argument("B", "field strength must be positive", B)
    return 0.5 * math.log(B) ** 2


def binding_reduced(omega_perp: float, omega_par: float, B: float) -> float:
    for name, value in (("omega_perp", omega_perp), ("omega_par", omega_par), ("B", B)):
        if not (value > 0) or not math.isfinite(value):
            raise DomainError.invalid_argument(name, "must be positive and finite", value)
    return 0.5 * B - (
        0.25 * omega_perp
        + B * B / (4.0 * omega_perp)
        + 0.25 * omega_par
        + math.sqrt(omega_par / math.pi) * math.log(omega_par / (2.0 * omega_perp))
    )


def omega_par_expansion(B: float) -> float:
    """
    Omega_par from sqrt(Omega_par) = (2/sqrt(pi)) (L - 2 ln L + 2a/L + a^2/L^2 + b), L = ln B.

    The right-hand side is taken as written; it omits a 4 ln L / L term of the
    same order as 2a/L, so it approaches the numeric optimum only slowly.
    """
    L = _log_field(B)
    root = (2.0 / math.sqrt(math.pi)) * (
        L - 2.0 * math.log(L) + 2.0 * A_CONSTANT / L + A_CONSTANT**2 / L**2 + B_CONSTANT
    )
    return root * root


class AsymptoticBreakdown(BaseModel):
    """The six leading terms of the ln B expansion with its 1/ln B correction."""

    model_config = ConfigDict(frozen=True)

    B: float = Field(gt=0)
    terms: tuple[float, float, float, float, float, float]
    correction_1_over_lnB: float
    landau_estimate: float

    @computed_field
    @property
    def partial_sum(self) -> float:
        return math.fsum(self.terms)

    @computed_field
    @property
    def total(self) -> float:
        return self.partial_sum + self.correction_1_over_lnB


def binding_lnB_expansion(B: float) -> AsymptoticBreakdown:
    L = _log_field(B)
    LL = math.log(L)
    b = B_CONSTANT
    terms = tuple(
        v / math.pi
        for v in (
            L * L,
            -4.0 * L * LL,
            4.0 * LL * LL,
            -4.0 * b * LL,
            2.0 * (b + 2.0) * L,
            b * b,
        )
    )
    correction = -(8.0 * LL * LL - 8.0 * b * LL + 2.0 * b * b) / (math.pi * L)
    return AsymptoticBreakdown(B=B, terms=terms, correction_1_over_lnB=correction, landau_estimate=landau_estimate(B))


class StrongFieldOptimum(BaseModel):
    model_config = ConfigDict(frozen=True)

    B: float
    omega_perp: float
    omega_par: float
    binding: float


def optimize_reduced(B: float) -> StrongFieldOptimum:
    """
    Maximize the reduced binding energy over (Omega_perp, Omega_par).

    Nelder-Mead in log coordinates from Omega_perp = B, Omega_par = (4/pi) ln^2 B.
    """
    L = _log_field(B)
    seed = [math.log(B), math.log(4.0 / math.pi * L * L)]

    def negative_binding(y) -> float:
        return -binding_reduced(math.exp(y[0]), math.exp(y[1]), B) / max(1.0, L * L)

    res = optimize.minimize(
        negative_binding, seed, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000}
    )
    if not res.success:
        raise NumericalError.not_converged("reduced strong-field optimization", B=B, message=res.message)
    omega_perp, omega_par = math.exp(res.x[0]), math.exp(res.x[1])
    log.debug("reduced optimum at B=%g: omega_perp=%.10g omega_par=%.10g", B, omega_perp, omega_par)
    return StrongFieldOptimum(
        B=B, omega_perp=omega_perp, omega_par=omega_par, binding=binding_reduced(omega_perp, omega_par, B)
    )


class LandauGapRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    B: float
    expansion: float
    landau_estimate: float
    absolute_gap: float
    relative_gap: float


def landau_gap(B_list: Sequence[float]) -> list[LandauGapRow]:
    """Gap between 0.5 ln^2 B and the ln B expansion (six terms plus correction)."""
    rows = []
    for B in B_list:
        breakdown = binding_lnB_expansion(B)
        gap = abs(breakdown.landau_estimate - breakdown.total)
        rows.append(
            LandauGapRow(
                B=B,
                expansion=breakdown.total,
                landau_estimate=breakdown.landau_estimate,
                absolute_gap=gap,
                relative_gap=gap / breakdown.landau_estimate,
            )
        )
    return rows
