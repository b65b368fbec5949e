"""
Gaussian-smeared Coulomb potential.

The electron position fluctuates around the anchor x0 = (rho0, 0, z0) with
an anisotropic Gaussian of transverse variance a2_perp and longitudinal
variance a2_par. The smeared Coulomb energy reduces to the one-dimensional
integral

    -sqrt(2 a2_par / pi) * int_0^1 dxi / (a2_par + xi^2 (a2_perp - a2_par))
        * exp{-(xi^2/2) [rho0^2 / (a2_par + xi^2 (a2_perp - a2_par)) + z0^2 / a2_par]},

which is evaluated by adaptive Gauss-Kronrod quadrature. At the anchor
rho0 = z0 = 0 it has a closed form with three branches by the sign of
a2_perp - a2_par.
"""

from __future__ import annotations

import logging
import math

from scipy import integrate
from scipy.special import i0e

from .config import load_settings
from .errors import DomainError, NumericalError
from .models import SmearingInput

log = logging.getLogger(__name__)

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)

# Relative distance from the isotropic point below which the branch
# expansions are used instead of arctan/artanh of a tiny argument.
_ISOTROPIC_EPS = 1e-6


def _integrand(xi: float, a2_perp: float, a2_par: float, rho2: float, z2: float) -> float:
    denom = a2_par + xi * xi * (a2_perp - a2_par)
    return math.exp(-0.5 * xi * xi * (rho2 / denom + z2 / a2_par)) / denom


def _quad_coulomb(
    a2_perp: float,
    a2_par: float,
    rho0: float,
    z0: float,
    epsabs: float | None = None,
    epsrel: float | None = None,
) -> float:
    """Value of -<1/|x|>; raw arguments, no validation."""
    settings = load_settings()
    value, abserr, info = integrate.quad(
        _integrand,
        0.0,
        1.0,
        args=(a2_perp, a2_par, rho0 * rho0, z0 * z0),
        epsabs=settings.quad_epsabs if epsabs is None else epsabs,
        epsrel=settings.quad_epsrel if epsrel is None else epsrel,
        limit=settings.quad_limit,
        full_output=1,
    )[:3]
    prefactor = math.sqrt(2.0 * a2_par / math.pi)
    if prefactor * abserr > settings.quad_tolerance:
        raise NumericalError.not_converged(
            "smearing quadrature",
            error_estimate=prefactor * abserr,
            evaluations=info["neval"],
            subintervals=info["last"],
            a2_perp=a2_perp,
            a2_par=a2_par,
            rho0=rho0,
            z0=z0,
        )
    return -prefactor * value


def coulomb_expectation(smearing: SmearingInput) -> float:
    """
    Smeared Coulomb energy -<1/|x|> (negative).

    QUADPACK QAGS on xi in [0, 1]: 21-point Gauss-Kronrod rule with adaptive
    bisection, certified to an absolute error of ``quad_tolerance``.

    :raises NumericalError: if the quadrature error estimate stays above the
        tolerance.
    """
    return _quad_coulomb(smearing.a2_perp, smearing.a2_par, smearing.rho0, smearing.z0)


def _origin(a2_perp: float, a2_par: float) -> float:
    """<1/|x|> at the anchor, three-branch closed form."""
    d = a2_perp - a2_par
    r = d / a2_par
    if abs(r) < _ISOTROPIC_EPS:
        # arctan(s)/s and artanh(s)/s = 1 - r/3 + r^2/5 with s^2 = +-r
        return math.sqrt(2.0 / (math.pi * a2_par)) * (1.0 - r / 3.0 + r * r / 5.0)
    if d > 0:
        return math.sqrt(2.0 / (math.pi * d)) * math.atan(math.sqrt(r))
    u = math.sqrt(-r)
    # artanh(u) written to stay accurate as u -> 1
    artanh = math.log1p(u) - 0.5 * math.log1p(-u * u)
    return math.sqrt(2.0 / (math.pi * -d)) * artanh


def coulomb_expectation_origin(a2_perp: float, a2_par: float) -> float:
    """<1/|x|> (positive) for the Gaussian centred on the nucleus."""
    for name, value in (("a2_perp", a2_perp), ("a2_par", a2_par)):
        if not (value > 0) or not math.isfinite(value):
            raise DomainError.invalid_argument(name, "width must be positive and finite", value)
    return _origin(a2_perp, a2_par)


def _origin_T0(omega_par: float, omega_perp2: float) -> float:
    diff = 2.0 * omega_par - omega_perp2
    if abs(diff) <= _ISOTROPIC_EPS * omega_perp2:
        # widths differ by a relative amount diff/omega_perp2; use the expansion
        return _origin(1.0 / omega_perp2, 1.0 / (2.0 * omega_par))
    prefactor = math.sqrt(omega_par * omega_perp2 / abs(diff))
    if diff > 0:
        return _TWO_OVER_SQRT_PI * prefactor * math.atan(math.sqrt(diff / omega_perp2))
    # u from diff, not 1 - eta, which cancels near the isotropic point
    u = math.sqrt(-diff / omega_perp2)
    if u < 0.5:
        return _TWO_OVER_SQRT_PI * prefactor * math.atanh(u)
    # artanh(u) = ln[(1 + u)/(1 - u)]/2 = ln(1 + u) - ln(eta)/2, eta = 1 - u^2
    eta = 2.0 * omega_par / omega_perp2
    return _TWO_OVER_SQRT_PI * prefactor * (math.log1p(u) - 0.5 * math.log(eta))


def coulomb_expectation_origin_T0(omega_par: float, omega_perp2: float) -> float:
    """
    Zero-temperature <1/|x|> at the nucleus (positive).

    The ground-state widths are a2_perp = 1/omega_perp2, a2_par = 1/(2 omega_par).
    With D = 2 omega_par - omega_perp2 the value is (2/sqrt(pi)) times

    - sqrt(omega_par omega_perp2 / D) arctan sqrt(2 omega_par/omega_perp2 - 1)   (D > 0)
    - sqrt(omega_par)                                                           (D = 0)
    - sqrt(omega_par omega_perp2 / -D) artanh sqrt(1 - 2 omega_par/omega_perp2)  (D < 0)

    The first prefactor carries 2 omega_par - omega_perp2 under the root; only
    this form is continuous at D = 0 and equals the quadrature at T = 0.
    """
    for name, value in (("omega_par", omega_par), ("omega_perp2", omega_perp2)):
        if not (value > 0) or not math.isfinite(value):
            raise DomainError.invalid_argument(name, "frequency must be positive and finite", value)
    return _origin_T0(omega_par, omega_perp2)


def coulomb_expectation_direct(smearing: SmearingInput, epsrel: float = 1e-10) -> float:
    """
    Smeared Coulomb energy from the three-dimensional Gaussian average.

    Independent of the reduced integral: spherical coordinates (u, theta, phi)
    centred on the nucleus, where the Jacobian u^2 cancels the 1/u
    singularity and the azimuth integrates to 2 pi I0. The remaining (u, theta)
    integral runs over u up to 12 standard deviations beyond the anchor.
    """
    a2_perp, a2_par = smearing.a2_perp, smearing.a2_par
    rho0, z0 = smearing.rho0, smearing.z0
    norm = (2.0 * math.pi) ** -1.5 / (a2_perp * math.sqrt(a2_par))
    sigma = math.sqrt(max(a2_perp, a2_par))
    u_max = math.hypot(rho0, z0) + 12.0 * sigma

    def integrand(theta: float, u: float) -> float:
        s, c = math.sin(theta), math.cos(theta)
        kappa = u * s * rho0 / a2_perp
        exponent = (
            -((u * s) ** 2 + rho0 * rho0) / (2.0 * a2_perp)
            - (u * c - z0) ** 2 / (2.0 * a2_par)
            + kappa
        )
        # i0e(k) = exp(-k) I0(k)
        return u * s * 2.0 * math.pi * float(i0e(kappa)) * math.exp(exponent)

    # split at the anchor distance, where the integrand peaks
    distance = math.hypot(rho0, z0)
    edges = [0.0, distance, u_max] if distance > 0 else [0.0, u_max]
    total = 0.0
    for lower, upper in zip(edges[:-1], edges[1:]):
        part, _ = integrate.dblquad(integrand, lower, upper, 0.0, math.pi, epsabs=1e-13, epsrel=epsrel)
        total += part
    return -norm * total
