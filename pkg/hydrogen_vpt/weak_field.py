"""
Weak-field expansion of the zero-temperature variational energy.

In the variables Omega = omega_perp2 and eta = 2 omega_par / omega_perp2 the
first-order energy at T = 0 reads

    E(eta, Omega; t) = Omega/4 + eta Omega/8 + t/(4 Omega) - sqrt(eta Omega / 2 pi) L(1 - eta)

with t = B^2 and L the odd-log kernel, analytic at eta = 1. Expanding eta(t)
and Omega(t) in powers of t and imposing dE/deta = dE/dOmega = 0 order by
order gives linear 2x2 systems with the zeroth-order Hessian as matrix. The
binding energy is B/2 - E = B/2 - sum_n epsilon_n B^(2n).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp

from . import series as ts
from .config import load_settings
from .errors import DomainError, NumericalError
from .series import TruncatedSeries, odd_log_kernel
from .telemetry import auto_emit_event

log = logging.getLogger(__name__)

# Exact hydrogen coefficients of E(B) = sum_n e_n B^(2n), for comparison.
EXACT_HYDROGEN = (Fraction(-1, 2), Fraction(1, 4), Fraction(-53, 192), Fraction(5581, 4608))

# Power of pi carried by the n-th coefficient of each family.
_PI_POWER = {
    "eta": lambda n: 2 * n,
    "omega": lambda n: 2 * n - 1,
    "epsilon": lambda n: 2 * n - 1,
}

_MAX_DENOMINATOR = 10**16


def _check_precision(precision: int | None) -> int:
    digits = load_settings().precision if precision is None else precision
    if digits < 20:
        raise DomainError.invalid_argument("precision", "at least 20 decimal digits are needed", digits)
    return digits


def binding_functional(eta, omega, B):
    """Scalar B/2 - E(eta, Omega; B^2) at the working precision."""
    eta, omega, B = mp.mpf(eta), mp.mpf(omega), mp.mpf(B)
    t = B * B
    coulomb = mp.sqrt(eta * omega / (2 * mp.pi)) * odd_log_kernel(1 - eta)
    return B / 2 - (omega / 4 + eta * omega / 8 + t / (4 * omega) - coulomb)


def _energy_series(eta: TruncatedSeries, omega: TruncatedSeries) -> TruncatedSeries:
    t = TruncatedSeries.variable(eta.order)
    coulomb = ts.sqrt(eta * omega / (2 * mp.pi)) * ts.kernel(1 - eta)
    return omega / 4 + eta * omega / 8 + t / (4 * omega) - coulomb


def _gradient_series(eta: TruncatedSeries, omega: TruncatedSeries) -> tuple[TruncatedSeries, TruncatedSeries]:
    """(dE/deta, dE/dOmega) as series in t."""
    t = TruncatedSeries.variable(eta.order)
    norm = 1 / mp.sqrt(2 * mp.pi)
    kernel = ts.kernel(1 - eta)
    kernel_prime = ts.kernel_derivative(1 - eta)
    d_eta = omega / 8 - norm * (ts.sqrt(omega / eta) * kernel / 2 - ts.sqrt(eta * omega) * kernel_prime)
    d_omega = 1 / mp.mpf(4) + eta / 8 - t / (4 * omega * omega) - norm * ts.sqrt(eta / omega) * kernel / 2
    return d_eta, d_omega


def binding_functional_series(eta: TruncatedSeries, omega: TruncatedSeries) -> TruncatedSeries:
    """
    Series of epsilon(B) - B/2 = -E in t = B^2, i.e. -sum_n epsilon_n t^n.

    The Coulomb term is expanded through L(1 - eta), so eta0 = 1 is a
    regular point.
    """
    if eta.order != omega.order:
        raise DomainError.invalid_argument("order", "eta and omega series must share their order")
    if omega[0] <= 0:
        raise DomainError.invalid_argument("omega", "constant term must be positive", float(omega[0]))
    if not (0 < eta[0] < 2):
        raise DomainError.invalid_argument("eta", "constant term must lie in (0, 2)", float(eta[0]))
    return -_energy_series(eta, omega)


@dataclass
class WeakFieldRow:
    n: int
    eta: "mpmath.mpf"
    omega: "mpmath.mpf"
    epsilon: "mpmath.mpf"
    epsilon_exact_hydrogen: Fraction | None = None
    closed_forms: dict[str, str | None] = field(default_factory=dict)


@dataclass
class WeakFieldTable:
    """Coefficient table with the series it was read from."""

    order: int
    precision: int
    rows: list[WeakFieldRow]
    eta: TruncatedSeries
    omega: TruncatedSeries
    energy: TruncatedSeries
    residual: "mpmath.mpf"


def recognize_pi_rational(value, power: int, precision: int) -> Fraction | None:
    """
    The rational q with value = q * pi^power, if one with a modest denominator
    reproduces ``value`` to all but ten of the working digits; otherwise None.
    """
    with mp.workdps(precision):
        scaled = mp.mpf(value) / mp.pi**power
        man, exp = abs(scaled).man_exp
        candidate = Fraction(int(man)) * Fraction(2) ** int(exp)
        if scaled < 0:
            candidate = -candidate
        candidate = candidate.limit_denominator(_MAX_DENOMINATOR)
        error = abs(scaled - mp.mpf(candidate.numerator) / candidate.denominator)
        if error > mp.mpf(10) ** (10 - precision) * max(1, abs(scaled)):
            return None
    return candidate


def format_closed_form(q: Fraction, power: int) -> str:
    """``-405/7168*pi^2`` style rendering."""
    rational = str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    if power == 0:
        return rational
    return f"{rational}*pi^{power}"


def _solve_details(order: int, *args, **kwargs) -> dict:
    return {"order": order}


@auto_emit_event("solve_weak_field", _solve_details)
def solve_weak_field(order: int, precision: int | None = None, exact_mode: bool = False) -> WeakFieldTable:
    """
    Weak-field coefficients eta_n, Omega_n, epsilon_n for n = 0 .. order.

    ``precision`` is the working precision in decimal digits (default from
    the settings). With ``exact_mode`` each coefficient is also matched to a
    rational multiple of pi^k and the rows carry ``closed_forms`` strings.

    :raises NumericalError: if the order-zero Hessian is singular.
    """
    if order < 0:
        raise DomainError.invalid_argument("order", "must be non-negative", order)
    digits = _check_precision(precision)
    table = _solve(order, digits)
    if exact_mode:
        for row in table.rows:
            for family, value in (("eta", row.eta), ("omega", row.omega), ("epsilon", row.epsilon)):
                power = _PI_POWER[family](row.n)
                q = recognize_pi_rational(value, power, digits)
                row.closed_forms[family] = None if q is None else format_closed_form(q, power)
                if q is None:
                    log.warning("No rational*pi^%d form found for %s_%d", power, family, row.n)
    return table


@lru_cache(maxsize=16)
def _solve_cached(order: int, digits: int) -> tuple:
    with mp.workdps(digits):
        omega0 = mp.mpf(32) / (9 * mp.pi)
        eta_c = [mp.mpf(1)] + [mp.mpf(0)] * order
        omega_c = [omega0] + [mp.mpf(0)] * order

        if order > 0:
            jacobian = _order_zero_hessian(omega0)
            if mp.det(jacobian) == 0:
                raise NumericalError.not_converged("weak-field solve", reason="singular order-zero Hessian")
        for n in range(1, order + 1):
            eta = TruncatedSeries.of(eta_c, order)
            omega = TruncatedSeries.of(omega_c, order)
            d_eta, d_omega = _gradient_series(eta, omega)
            rhs = mp.matrix([-d_eta[n], -d_omega[n]])
            solution = mp.lu_solve(jacobian, rhs)
            eta_c[n], omega_c[n] = solution[0], solution[1]
            log.debug("order %d: eta=%s omega=%s", n, mp.nstr(eta_c[n], 15), mp.nstr(omega_c[n], 15))

        eta = TruncatedSeries.of(eta_c, order)
        omega = TruncatedSeries.of(omega_c, order)
        energy = _energy_series(eta, omega)
        d_eta, d_omega = _gradient_series(eta, omega)
        residual = max(abs(c) for c in (*d_eta.coefficients, *d_omega.coefficients))
    return eta, omega, energy, residual


def _solve(order: int, digits: int) -> WeakFieldTable:
    eta, omega, energy, residual = _solve_cached(order, digits)
    rows = [
        WeakFieldRow(
            n=n,
            eta=eta[n],
            omega=omega[n],
            epsilon=energy[n],
            epsilon_exact_hydrogen=EXACT_HYDROGEN[n] if n < len(EXACT_HYDROGEN) else None,
        )
        for n in range(order + 1)
    ]
    log.info("Weak-field solve to order %d at %d digits, residual %s", order, digits, mp.nstr(residual, 3))
    return WeakFieldTable(order=order, precision=digits, rows=rows, eta=eta, omega=omega, energy=energy,
                          residual=residual)


def _order_zero_hessian(omega0) -> "mpmath.matrix":
    """d(dE/deta, dE/dOmega)/d(eta, Omega) at (1, omega0), read off a linear shift in t."""
    base_eta = TruncatedSeries.of([1], 1)
    base_omega = TruncatedSeries.of([omega0], 1)
    shift = TruncatedSeries.variable(1)
    reference = _gradient_series(base_eta, base_omega)
    columns = (_gradient_series(base_eta + shift, base_omega), _gradient_series(base_eta, base_omega + shift))
    return mp.matrix(
        [[columns[j][i][1] - reference[i][1] for j in range(2)] for i in range(2)]
    )


def weak_field_binding(B, order: int = 3, precision: int | None = None) -> "mpmath.mpf":
    """Binding energy B/2 - sum_{n <= order} epsilon_n B^(2n) from the truncated series."""
    if B < 0:
        raise DomainError.invalid_argument("B", "field strength must be non-negative", B)
    digits = _check_precision(precision)
    table = _solve(order, digits)
    with mp.workdps(digits):
        B = mp.mpf(B)
        return B / 2 - table.energy.evaluate(B * B)
