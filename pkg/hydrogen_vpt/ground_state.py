"""
Zero-temperature limit of the first-order variational energy.

At T = 0 the widths become a2_perp = 1/omega_perp2 and a2_par = 1/(2 omega_par),
and the energy

    E(omega_perp2, omega_par) = (omega_perp2^2 + B^2)/(4 omega_perp2) + omega_par/4 - <1/|x|>

no longer depends on omega_perp1. The binding energy is B/2 - E.
"""

from __future__ import annotations

import logging
import math
from typing import Any, Literal, Sequence

import mpmath
import numpy as np
from mpmath import mp
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator
from scipy import optimize

from .errors import DomainError, NumericalError, VptError
from .series import odd_log_kernel
from .smearing import _origin_T0
from .strong_field import landau_estimate, omega_par_expansion
from .telemetry import auto_emit_event

log = logging.getLogger(__name__)

WEAK_FIELD_SEED = (32.0 / (9.0 * math.pi), 16.0 / (9.0 * math.pi))

# Relative gradient (in log coordinates) accepted as stationary.
_STATIONARITY_TOLERANCE = 1e-6


class GroundStateResult(BaseModel):
    """Optimized ground-state energy at one field strength."""

    model_config = ConfigDict(frozen=True)

    B: float = Field(ge=0)
    energy: float
    omega_perp2: float
    omega_par: float
    coulomb: bool = True
    status: Literal["converged", "failed"] = "converged"
    evaluations: int = 0
    energy_high_precision: str | None = None
    error: str | None = None
    diagnostics: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_converged(self) -> "GroundStateResult":
        if self.status == "converged":
            if not all(math.isfinite(v) for v in (self.energy, self.omega_perp2, self.omega_par)):
                raise ValueError("converged result must be finite")
            if self.omega_perp2 <= 0:
                raise ValueError("omega_perp2 must be positive")
            if self.omega_par < 0 or (self.coulomb and self.omega_par == 0):
                raise ValueError("omega_par must be positive with the Coulomb term on")
        return self

    @computed_field
    @property
    def binding(self) -> float:
        return 0.5 * self.B - self.energy

    @computed_field
    @property
    def landau_estimate(self) -> float | None:
        return landau_estimate(self.B) if self.B > 0 else None

    @classmethod
    def failed(cls, B: float, error: VptError, coulomb: bool = True) -> "GroundStateResult":
        return cls(B=B, energy=math.nan, omega_perp2=math.nan, omega_par=math.nan, coulomb=coulomb,
                   status="failed", error=str(error), diagnostics=error.to_dict())


def _energy(omega_perp2: float, omega_par: float, B: float, coulomb: bool) -> float:
    value = (omega_perp2 * omega_perp2 + B * B) / (4.0 * omega_perp2) + 0.25 * omega_par
    if coulomb:
        value -= _origin_T0(omega_par, omega_perp2)
    return value


def energy_T0(omega_perp2: float, omega_par: float, B: float, coulomb: bool = True) -> float:
    """
    Zero-temperature first-order energy.

    With ``coulomb=False`` the Coulomb expectation is dropped and
    omega_par = 0 is admitted.
    """
    if not (omega_perp2 > 0) or not math.isfinite(omega_perp2):
        raise DomainError.invalid_argument("omega_perp2", "frequency must be positive and finite", omega_perp2)
    if coulomb and not (omega_par > 0):
        raise DomainError.invalid_argument("omega_par", "frequency must be positive", omega_par)
    if omega_par < 0 or not math.isfinite(omega_par):
        raise DomainError.invalid_argument("omega_par", "frequency must be non-negative and finite", omega_par)
    if B < 0 or not math.isfinite(B):
        raise DomainError.invalid_argument("B", "field strength must be non-negative and finite", B)
    return _energy(omega_perp2, omega_par, B, coulomb)


def _seeds(B: float, warm_start: tuple[float, float] | None) -> list[tuple[float, float]]:
    seeds = [WEAK_FIELD_SEED]
    if B > 0 and math.log(B) > 1.0:
        seeds.append((B, omega_par_expansion(B)))
    if warm_start is not None:
        seeds.insert(0, warm_start)
    return seeds


def _log_gradient(fn, y: np.ndarray) -> np.ndarray:
    grad = np.zeros(2)
    for i in range(2):
        h = 1e-6 * max(1.0, abs(y[i]))
        up, down = y.copy(), y.copy()
        up[i] += h
        down[i] -= h
        grad[i] = (fn(up) - fn(down)) / (2.0 * h)
    return grad


def _optimize_landau(B: float) -> GroundStateResult:
    """Without the Coulomb term omega_par stays at 0 and only omega_perp2 is optimized."""
    if B <= 0:
        raise DomainError.invalid_argument("B", "a free particle at B = 0 has no optimum without the Coulomb term", B)
    res = optimize.minimize_scalar(
        lambda y: _energy(math.exp(y), 0.0, B, coulomb=False),
        bounds=(math.log(B) - 5.0, math.log(B) + 5.0),
        method="bounded",
        options={"xatol": 1e-12},
    )
    omega_perp2 = math.exp(res.x)
    return GroundStateResult(B=B, energy=_energy(omega_perp2, 0.0, B, False), omega_perp2=omega_perp2,
                             omega_par=0.0, coulomb=False, evaluations=int(res.nfev))


def _mp_energy(eta, omega, B):
    """E in (eta = 2 omega_par/omega_perp2, Omega = omega_perp2) at the working precision."""
    coulomb = mp.sqrt(eta * omega / (2 * mp.pi)) * odd_log_kernel(1 - eta)
    return omega / 4 + eta * omega / 8 + B * B / (4 * omega) - coulomb


def _polish_high_precision(B: float, omega_perp2: float, omega_par: float, digits: int) -> tuple:
    """Solve both stationarity conditions with mpmath.findroot starting at the float optimum."""
    with mp.workdps(digits):
        Bm = mp.mpf(B)

        def stationarity(eta, omega):
            return [
                mp.diff(lambda e: _mp_energy(e, omega, Bm), eta),
                mp.diff(lambda o: _mp_energy(eta, o, Bm), omega),
            ]

        start = (mp.mpf(2 * omega_par / omega_perp2), mp.mpf(omega_perp2))
        try:
            root = mp.findroot(stationarity, start, tol=mp.mpf(10) ** (-digits + 5))
        except (ValueError, ZeroDivisionError) as e:
            raise NumericalError.not_converged("high-precision ground state", B=B, reason=str(e)) from e
        eta, omega = root[0], root[1]
        energy = _mp_energy(eta, omega, Bm)
        return energy, float(omega), float(eta * omega / 2)


def _optimize_details(B: float, *args, **kwargs) -> dict[str, Any]:
    return {"B": B, "coulomb": kwargs.get("coulomb", True)}


@auto_emit_event("optimize_T0", _optimize_details)
def optimize_T0(
    B: float,
    coulomb: bool = True,
    precision: int | None = None,
    warm_start: tuple[float, float] | None = None,
) -> GroundStateResult:
    """
    Minimize the zero-temperature energy over (omega_perp2, omega_par).

    Nelder-Mead in log coordinates from the weak-field seed
    (32/9pi, 16/9pi), the strong-field seed (B, omega_par_expansion(B)) and an
    optional ``warm_start``. With ``precision`` the optimum is refined by
    mpmath at that many digits and reported in ``energy_high_precision``.

    :raises DomainError: for B < 0, or B = 0 without the Coulomb term.
    :raises NumericalError: if no seed reaches a stationary point.
    """
    if not (B >= 0) or not math.isfinite(B):
        raise DomainError.invalid_argument("B", "field strength must be non-negative and finite", B)
    if not coulomb:
        return _optimize_landau(B)

    scale = max(1.0, 0.5 * B)

    def objective(y: np.ndarray) -> float:
        return _energy(math.exp(y[0]), math.exp(y[1]), B, True) / scale

    best = None
    evaluations = 0
    for seed in _seeds(B, warm_start):
        y0 = np.log(np.asarray(seed, dtype=float))
        res = optimize.minimize(
            objective, y0, method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 5000, "maxfev": 10000},
        )
        evaluations += int(res.nfev)
        log.debug("seed %s -> E=%.15g", seed, res.fun * scale)
        if best is None or res.fun < best.fun:
            best = res

    residual = float(np.linalg.norm(_log_gradient(objective, best.x)))
    if residual > _STATIONARITY_TOLERANCE:
        raise NumericalError.not_converged(
            "ground-state optimization", B=B, residual=residual, last_iterate=[math.exp(v) for v in best.x],
            evaluations=evaluations,
        )

    omega_perp2, omega_par = math.exp(best.x[0]), math.exp(best.x[1])
    energy = _energy(omega_perp2, omega_par, B, True)
    energy_hp = None
    if precision is not None:
        if precision < 20:
            raise DomainError.invalid_argument("precision", "at least 20 decimal digits are needed", precision)
        energy_mp, omega_perp2, omega_par = _polish_high_precision(B, omega_perp2, omega_par, precision)
        energy = float(energy_mp)
        energy_hp = mpmath.nstr(energy_mp, precision)
    return GroundStateResult(
        B=B, energy=energy, omega_perp2=omega_perp2, omega_par=omega_par, evaluations=evaluations,
        energy_high_precision=energy_hp, diagnostics={"stationarity_residual": residual},
    )


def binding_scan(
    B_list: Sequence[float],
    coulomb: bool = True,
    precision: int | None = None,
) -> list[GroundStateResult]:
    """
    Ground state along an ascending list of field strengths.

    Each point is warm-started from the previous optimum; a failing point is
    recorded with ``status="failed"`` and the scan continues.
    """
    values = [float(b) for b in B_list]
    if not values:
        raise DomainError.invalid_argument("B_list", "needs at least one field strength")
    if any(b2 <= b1 for b1, b2 in zip(values, values[1:])):
        raise DomainError.invalid_argument("B_list", "field strengths must be strictly ascending")

    results: list[GroundStateResult] = []
    warm: tuple[float, float] | None = None
    for B in values:
        try:
            result = optimize_T0(B, coulomb=coulomb, precision=precision, warm_start=warm)
        except VptError as e:
            log.error("Ground state at B=%g failed", B, exc_info=True)
            results.append(GroundStateResult.failed(B, e, coulomb))
            continue
        results.append(result)
        if coulomb:
            warm = (result.omega_perp2, result.omega_par)
    log.info("Binding scan over %d field strengths (%d failed)", len(results),
             sum(r.status == "failed" for r in results))
    return results
