"""
Thermodynamics of the harmonic trial system.

The trial action couples the transverse motion through an angular-momentum
term (frequency omega_perp1) and a transverse oscillator (omega_perp2); its
normal modes are omega_plus/minus = |omega_perp1 +- omega_perp2| / 2, plus the
longitudinal oscillator omega_par. With the path average pinned, each mode
contributes a factor (beta*Omega/2) / sinh(beta*Omega/2) to the restricted
partition function, i.e. a free energy

    f(Omega) = (1/beta) ln[sinh(beta*Omega/2) / (beta*Omega/2)],

and the fluctuation widths are derivatives of the total restricted free
energy F = f(omega_plus) + f(omega_minus) + f(omega_par):

    b2_perp = dF/d(omega_perp1)
    a2_perp = 4 dF/d(omega_perp2^2)
    a2_par  = 2 dF/d(omega_par^2)

The derivative of f is g(Omega) = coth(beta*Omega/2)/2 - 1/(beta*Omega).
Natural units with M = hbar = 1 throughout.
"""

from __future__ import annotations

import math

from scipy.special import bernoulli

from .errors import DomainError, SingularConfigurationError
from .models import FluctuationWidths, FrequencyTriple, build

# Below this value of beta*Omega the 4-term Taylor series is used.
SMALL_ARGUMENT = 1e-4
# Below this value of beta*Omega the full Laurent sum of coth is used; the
# closed forms lose digits to cancellation there.
SERIES_ARGUMENT = 1.0
# Above this half-argument sinh would overflow; use the asymptotic log form.
_LARGE_HALF_ARGUMENT = 20.0

_SERIES_TERMS = 14
_TAYLOR_TERMS = 4

# coth(x) = 1/x + sum_k _COTH[k-1] * x^(2k-1)
_BERNOULLI = bernoulli(2 * _SERIES_TERMS)
_COTH = [
    2.0 ** (2 * k) * float(_BERNOULLI[2 * k]) / math.factorial(2 * k)
    for k in range(1, _SERIES_TERMS + 1)
]


def _check_beta(beta: float) -> None:
    if not (beta > 0) or not math.isfinite(beta):
        raise DomainError.invalid_argument("beta", "inverse temperature must be positive and finite", beta)


def _terms(beta_omega: float) -> int:
    return _TAYLOR_TERMS if beta_omega < SMALL_ARGUMENT else _SERIES_TERMS


def _log_sinhc(x: float) -> float:
    """ln(sinh(x)/x) for x >= 0."""
    if 2 * x < SERIES_ARGUMENT:
        x2 = x * x
        total, power = 0.0, x2
        for k in range(1, _terms(2 * x) + 1):
            total += _COTH[k - 1] * power / (2 * k)
            power *= x2
        return total
    if x < _LARGE_HALF_ARGUMENT:
        return math.log(math.sinh(x) / x)
    return x - math.log(2.0 * x) + math.log1p(-math.exp(-2.0 * x))


def _half_coth_minus_inverse(x: float) -> float:
    """(coth(x) - 1/x) / 2 for x >= 0."""
    if 2 * x < SERIES_ARGUMENT:
        x2 = x * x
        total, power = 0.0, x
        for k in range(1, _terms(2 * x) + 1):
            total += _COTH[k - 1] * power
            power *= x2
        return 0.5 * total
    return 0.5 / math.tanh(x) - 0.5 / x


def _g_over_omega(beta: float, omega: float) -> float:
    """g(Omega)/Omega with the Omega -> 0 limit beta/12."""
    x = 0.5 * beta * abs(omega)
    if 2 * x < SERIES_ARGUMENT:
        x2 = x * x
        total, power = 0.0, 1.0
        for k in range(1, _terms(2 * x) + 1):
            total += _COTH[k - 1] * power
            power *= x2
        return 0.25 * beta * total
    return _half_coth_minus_inverse(x) / abs(omega)


def mode_frequencies(f: FrequencyTriple) -> tuple[float, float]:
    """Return (omega_plus, omega_minus) of the transverse motion."""
    return _modes(f.omega_perp1, f.omega_perp2)


def _modes(omega_perp1: float, omega_perp2: float) -> tuple[float, float]:
    return 0.5 * (omega_perp1 + omega_perp2), 0.5 * abs(omega_perp1 - omega_perp2)


def single_mode_free_energy(beta: float, omega: float) -> float:
    """f(Omega) = (1/beta) ln[sinh(beta Omega/2)/(beta Omega/2)], increasing from f(0) = 0."""
    _check_beta(beta)
    if omega < 0:
        raise DomainError.invalid_argument("omega", "frequency must be non-negative", omega)
    return _log_sinhc(0.5 * beta * omega) / beta


def width_function_g(beta: float, omega: float) -> float:
    """g(Omega) = coth(beta Omega/2)/2 - 1/(beta Omega), the derivative of f; g(0) = 0."""
    _check_beta(beta)
    if omega < 0:
        raise DomainError.invalid_argument("omega", "frequency must be non-negative", omega)
    return _half_coth_minus_inverse(0.5 * beta * omega)


def _free_energy(beta: float, omega_perp1: float, omega_perp2: float, omega_par: float) -> float:
    plus, minus = _modes(omega_perp1, omega_perp2)
    return (
        _log_sinhc(0.5 * beta * plus)
        + _log_sinhc(0.5 * beta * minus)
        + _log_sinhc(0.5 * beta * abs(omega_par))
    ) / beta


def restricted_free_energy(beta: float, f: FrequencyTriple) -> float:
    """F = -(1/beta) ln Z of the trial system."""
    _check_beta(beta)
    return _free_energy(beta, *f.as_tuple())


def log_restricted_partition(beta: float, f: FrequencyTriple) -> float:
    """ln Z of the trial system; exact in log space for any beta*Omega."""
    return -beta * restricted_free_energy(beta, f)


def restricted_partition(beta: float, f: FrequencyTriple) -> float:
    """Product of (beta Omega/2)/sinh(beta Omega/2) over the three normal modes."""
    return math.exp(log_restricted_partition(beta, f))


def _widths(
    beta: float, omega_perp1: float, omega_perp2: float, omega_par: float
) -> tuple[float, float, float]:
    """Raw (a2_perp, a2_par, b2_perp); caller guarantees omega_perp2 > 0 unless omega_perp1 = 0."""
    plus, minus = _modes(omega_perp1, omega_perp2)
    g_plus = _half_coth_minus_inverse(0.5 * beta * plus)
    g_minus = _half_coth_minus_inverse(0.5 * beta * minus)
    sign = math.copysign(1.0, omega_perp2 - omega_perp1) if omega_perp1 != omega_perp2 else 0.0
    if omega_perp1 == 0.0:
        # both modes at omega_perp2/2; finite down to omega_perp2 = 0
        a2_perp = _g_over_omega(beta, 0.5 * omega_perp2)
    else:
        a2_perp = (g_plus + sign * g_minus) / omega_perp2
    b2_perp = 0.5 * (g_plus - sign * g_minus)
    a2_par = _g_over_omega(beta, omega_par)
    return a2_perp, a2_par, b2_perp


def fluctuation_widths(beta: float, f: FrequencyTriple) -> FluctuationWidths:
    """
    Fluctuation widths of the pinned trial system.

    :raises SingularConfigurationError: if omega_perp2 = 0 while
        omega_perp1 > 0, where the transverse width has no finite value.
        All-zero frequencies are the free particle, with widths beta/12.
    """
    _check_beta(beta)
    if is_singular(f):
        raise SingularConfigurationError.invalid_argument(
            "omega_perp2", "transverse width is singular at omega_perp2 = 0", f.omega_perp2
        )
    a2_perp, a2_par, b2_perp = _widths(beta, *f.as_tuple())
    return build(FluctuationWidths, a2_perp=a2_perp, a2_par=a2_par, b2_perp=b2_perp)


def is_singular(f: FrequencyTriple) -> bool:
    """True where the transverse width has no finite value."""
    return f.omega_perp2 <= 0 and f.omega_perp1 > 0
