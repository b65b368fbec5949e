"""
First-order effective classical potential of hydrogen in a magnetic field.

    W1 = F + (omega_c - omega_perp1) b2_perp - (M/4)(omega_perp2^2 - omega_c^2) a2_perp
           - (M/2) omega_par^2 a2_par - <1/|x|>

with F the restricted trial free energy and the widths and smeared Coulomb
term evaluated at the anchor (rho0, z0). M = 1 in natural units.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy import integrate

from . import trial_oscillator
from .errors import DomainError, NumericalError, SingularConfigurationError
from .models import FluctuationWidths, FrequencyTriple, PotentialEvaluation, ThermoPoint
from .smearing import _quad_coulomb

log = logging.getLogger(__name__)

PARTITION_CONVENTION = (
    "Z_rel = lambda_th^-3 * int 2 pi rho0 drho0 dz0 {exp[-beta (W1 - W_far)] - 1} over the grid box; "
    "W_far is the far-field plateau -(1/beta) ln[(beta B/2)/sinh(beta B/2)], lambda_th = sqrt(2 pi beta). "
    "The plateau contributes exp(-beta W_far)/lambda_th^3 per unit volume and is reported separately."
)

# relative distance of z_grid[0] from 0 still read as 0
_ZERO_SLACK = 1e-12


def _w1_terms(
    beta: float,
    B: float,
    rho0: float,
    z0: float,
    omega_perp1: float,
    omega_perp2: float,
    omega_par: float,
    coulomb: bool = True,
) -> tuple[float, tuple[float, float, float]]:
    """Raw W1 and (a2_perp, a2_par, b2_perp); omega_par enters through |omega_par|."""
    omega_par = abs(omega_par)
    a2_perp, a2_par, b2_perp = trial_oscillator._widths(beta, omega_perp1, omega_perp2, omega_par)
    value = (
        trial_oscillator._free_energy(beta, omega_perp1, omega_perp2, omega_par)
        + (B - omega_perp1) * b2_perp
        - 0.25 * (omega_perp2 * omega_perp2 - B * B) * a2_perp
        - 0.5 * omega_par * omega_par * a2_par
    )
    if coulomb:
        value += _quad_coulomb(a2_perp, a2_par, rho0, z0)
    return value, (a2_perp, a2_par, b2_perp)


def _w1_value(point: ThermoPoint, omegas: Sequence[float]) -> float:
    """W1 for raw frequencies; used by the optimizer's inner loops."""
    return _w1_terms(point.beta, point.B, point.rho0, abs(point.z0), *omegas)[0]


def w1(point: ThermoPoint, f: FrequencyTriple) -> PotentialEvaluation:
    """
    Evaluate the first-order effective classical potential.

    :raises SingularConfigurationError: if omega_perp2 = 0 while omega_perp1 > 0.
    :raises NumericalError: if the smearing quadrature does not converge.
    """
    if trial_oscillator.is_singular(f):
        raise SingularConfigurationError.invalid_argument(
            "omega_perp2", "transverse width is singular at omega_perp2 = 0", f.omega_perp2
        )
    value, (a2_perp, a2_par, b2_perp) = _w1_terms(
        point.beta, point.B, point.rho0, abs(point.z0), *f.as_tuple()
    )
    return PotentialEvaluation(
        value=value,
        widths=FluctuationWidths(a2_perp=a2_perp, a2_par=a2_par, b2_perp=b2_perp),
        frequencies=f,
        point=point,
    )


def w1_far_field(point: ThermoPoint) -> float:
    """Plateau -(1/beta) ln[(beta omega_c/2)/sinh(beta omega_c/2)] reached far from the nucleus."""
    return trial_oscillator.single_mode_free_energy(point.beta, point.B)


@dataclass
class PartitionIntegral:
    """Relative partition integral over a finite (rho0, z0) box."""

    value: float
    error_estimate: float
    w_far: float
    plateau_weight: float
    volume: float
    rho_max: float
    z_range: tuple[float, float]
    convention: str = PARTITION_CONVENTION
    meta: dict[str, Any] = field(default_factory=dict)


def _trapezoid_2d(values: np.ndarray, rho: np.ndarray, z: np.ndarray) -> float:
    weighted = 2.0 * math.pi * rho[:, None] * values
    return float(integrate.trapezoid(integrate.trapezoid(weighted, z, axis=1), rho))


def partition_integral(
    beta: float,
    B: float,
    rho_grid: Sequence[float],
    z_grid: Sequence[float],
    potential: np.ndarray,
    tol: float = 1e-4,
) -> PartitionIntegral:
    """
    Relative configuration-space partition integral of an optimized W1 grid.

    ``potential[i, j]`` holds W1 at (rho_grid[i], z_grid[j]). A z grid starting
    at 0 is treated as half of a mirror-symmetric box; one starting below 0
    is the full box. ``meta`` records the convention and the box. The integral of
    exp[-beta (W1 - W_far)] - 1 is taken by the trapezoid rule on the full grid
    and on every second point; Richardson extrapolation of the pair gives
    the value and its error estimate.

    :raises DomainError: for grids that cannot be halved, do not match, or
        start above z = 0.
    :raises NumericalError: if the error estimate exceeds ``tol`` relative
        to max(1, |value|).
    """
    point = ThermoPoint.of(beta, B)
    rho = np.asarray(rho_grid, dtype=float)
    z = np.asarray(z_grid, dtype=float)
    w = np.asarray(potential, dtype=float)
    if w.shape != (rho.size, z.size):
        raise DomainError.invalid_argument(
            "potential", f"shape {w.shape} does not match grid ({rho.size}, {z.size})"
        )
    for name, axis in (("rho_grid", rho), ("z_grid", z)):
        if axis.size < 5 or axis.size % 2 == 0:
            raise DomainError.invalid_argument(name, "needs an odd number (>= 5) of points for Richardson halving")
        if np.any(np.diff(axis) <= 0):
            raise DomainError.invalid_argument(name, "must be strictly ascending")
    if rho[0] < 0:
        raise DomainError.invalid_argument("rho_grid", "distances must be non-negative")
    if not np.all(np.isfinite(w)):
        raise DomainError.invalid_argument("potential", "contains non-finite values")

    # a start within rounding of 0 marks the z >= 0 half of a mirrored box
    if abs(z[0]) <= _ZERO_SLACK * (z[-1] - z[0]):
        z = z.copy()
        z[0] = 0.0
        mirror = 2.0
    elif z[0] > 0:
        raise DomainError.invalid_argument(
            "z_grid", "must start at 0 (half box mirrored in z) or below 0 (full box)", float(z[0])
        )
    else:
        mirror = 1.0

    w_far = w1_far_field(point)
    boltzmann = np.expm1(-beta * (w - w_far))

    fine = mirror * _trapezoid_2d(boltzmann, rho, z)
    coarse = mirror * _trapezoid_2d(boltzmann[::2, ::2], rho[::2], z[::2])
    thermal_volume = (2.0 * math.pi * beta) ** 1.5
    extrapolated = (fine + (fine - coarse) / 3.0) / thermal_volume
    error = abs(fine - coarse) / 3.0 / thermal_volume
    log.debug("partition integral: fine=%g coarse=%g error=%g", fine, coarse, error)
    if error > tol * max(1.0, abs(extrapolated)):
        raise NumericalError.not_converged(
            "partition integral", error_estimate=error, value=extrapolated, tolerance=tol
        )

    z_lo = -z[-1] if mirror == 2.0 else z[0]
    volume = math.pi * (rho[-1] ** 2 - rho[0] ** 2) * (z[-1] - z_lo)
    plateau_weight = math.exp(-beta * w_far) / thermal_volume
    meta = {
        "convention": PARTITION_CONVENTION,
        "w_far": w_far,
        "plateau_weight": plateau_weight,
        "thermal_wavelength": math.sqrt(2.0 * math.pi * beta),
        "mirrored_in_z": mirror == 2.0,
        "rho_range": [float(rho[0]), float(rho[-1])],
        "z_range": [float(z_lo), float(z[-1])],
        "volume": volume,
        "grid_points": [int(rho.size), int(z.size)],
    }
    return PartitionIntegral(
        value=extrapolated,
        error_estimate=error,
        w_far=w_far,
        plateau_weight=plateau_weight,
        volume=volume,
        rho_max=float(rho[-1]),
        z_range=(float(z_lo), float(z[-1])),
        meta=meta,
    )
