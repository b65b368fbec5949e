"""
Truncated power series in t with configurable-precision coefficients.

A ``TruncatedSeries`` of order N holds the coefficients of t^0 .. t^N as
mpmath reals. Arithmetic discards everything beyond t^N, so the ring is
closed at a fixed order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Literal, Union

import mpmath
from mpmath import mp

from .errors import DomainError

log = logging.getLogger(__name__)

Scalar = Union[int, float, "mpmath.mpf"]
AnalyticFunction = Literal["sqrt", "reciprocal-sqrt", "odd-log-kernel", "odd-log-kernel-derivative"]
ArithmeticOp = Literal["add", "sub", "mul", "div"]

# Below this |x| the odd-log kernel is summed from its power series.
_KERNEL_SERIES_RADIUS = 0.125


def odd_log_kernel(x: Scalar) -> "mpmath.mpf":
    """
    L(x) = (1/u) ln[(1+u)/(1-u)] with u^2 = x, i.e. 2 * sum_k x^k/(2k+1).

    Analytic for x < 1; for x < 0 it continues to (2/sqrt(-x)) arctan sqrt(-x).
    """
    x = mp.mpf(x)
    if x >= 1:
        raise DomainError.invalid_argument("x", "odd-log kernel is defined for x < 1", float(x))
    if abs(x) < _KERNEL_SERIES_RADIUS:
        total, power, k = mp.mpf(0), mp.mpf(1), 0
        eps = mp.eps
        while True:
            term = power / (2 * k + 1)
            total += term
            if abs(term) < eps * abs(total):
                return 2 * total
            power *= x
            k += 1
    if x > 0:
        u = mp.sqrt(x)
        return mp.log((1 + u) / (1 - u)) / u
    u = mp.sqrt(-x)
    return 2 * mp.atan(u) / u


def odd_log_kernel_derivative(x: Scalar) -> "mpmath.mpf":
    """dL/dx = 1/(x (1 - x)) - L(x)/(2x), with the limit 2/3 at x = 0."""
    x = mp.mpf(x)
    if abs(x) < _KERNEL_SERIES_RADIUS:
        total, power, k = mp.mpf(0), mp.mpf(1), 1
        while True:
            term = k * power / (2 * k + 1)
            total += term
            if abs(term) < mp.eps * abs(total):
                return 2 * total
            power *= x
            k += 1
    return 1 / (x * (1 - x)) - odd_log_kernel(x) / (2 * x)


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients of t^0 .. t^order."""

    coefficients: tuple

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise DomainError.invalid_argument("coefficients", "a series needs at least the constant term")
        object.__setattr__(self, "coefficients", tuple(mp.mpf(c) for c in self.coefficients))

    @classmethod
    def of(cls, coefficients: Iterable[Scalar], order: int | None = None) -> "TruncatedSeries":
        """Build a series, padding with zeros or cutting to ``order``."""
        values = list(coefficients)
        if order is not None:
            values = (values + [0] * (order + 1))[: order + 1]
        return cls(tuple(values))

    @classmethod
    def constant(cls, value: Scalar, order: int) -> "TruncatedSeries":
        return cls.of([value], order)

    @classmethod
    def variable(cls, order: int) -> "TruncatedSeries":
        """The series t itself."""
        return cls.of([0, 1], order)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, n: int) -> "mpmath.mpf":
        return self.coefficients[n]

    def __len__(self) -> int:
        return len(self.coefficients)

    def _coerce(self, other: "TruncatedSeries | Scalar") -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if other.order != self.order:
                raise DomainError.invalid_argument(
                    "order", f"series orders differ ({self.order} and {other.order})"
                )
            return other
        return TruncatedSeries.constant(other, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        return TruncatedSeries(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(tuple(-a for a in self.coefficients))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            factor = mp.mpf(other)
            return TruncatedSeries(tuple(a * factor for a in self.coefficients))
        other = self._coerce(other)
        a, b = self.coefficients, other.coefficients
        return TruncatedSeries(
            tuple(mp.fsum(a[k] * b[n - k] for k in range(n + 1)) for n in range(len(a)))
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        b = other.coefficients
        if b[0] == 0:
            raise DomainError.invalid_argument("divisor", "series with zero constant term is not invertible")
        c: list = []
        for n, a_n in enumerate(self.coefficients):
            c.append((a_n - mp.fsum(b[k] * c[n - k] for k in range(1, n + 1))) / b[0])
        return TruncatedSeries(tuple(c))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def evaluate(self, t: Scalar) -> "mpmath.mpf":
        """Sum of the series at ``t`` (Horner)."""
        t = mp.mpf(t)
        total = mp.mpf(0)
        for c in reversed(self.coefficients):
            total = total * t + c
        return total

    def derivative_at_zero(self) -> "mpmath.mpf":
        return self.coefficients[1] if self.order >= 1 else mp.mpf(0)

    def __str__(self) -> str:
        return " + ".join(f"{mp.nstr(c, 12)}*t^{n}" for n, c in enumerate(self.coefficients))


def series_arithmetic(a: TruncatedSeries, b: TruncatedSeries, op: ArithmeticOp) -> TruncatedSeries:
    """Exact truncated-ring arithmetic; ``mul`` is the Cauchy product cut at the common order."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise DomainError.unknown_kind(op, ("add", "sub", "mul", "div"))


def _taylor_coefficients(func: AnalyticFunction, x0: "mpmath.mpf", order: int) -> list:
    """Taylor coefficients f^(k)(x0)/k! for k = 0 .. order."""
    if func == "sqrt":
        if x0 <= 0:
            raise DomainError.invalid_argument("a0", "sqrt needs a positive constant term", float(x0))
        return [mp.binomial(mp.mpf(1) / 2, k) * x0 ** (mp.mpf(1) / 2 - k) for k in range(order + 1)]
    if func == "reciprocal-sqrt":
        if x0 <= 0:
            raise DomainError.invalid_argument("a0", "reciprocal-sqrt needs a positive constant term", float(x0))
        return [mp.binomial(-mp.mpf(1) / 2, k) * x0 ** (-mp.mpf(1) / 2 - k) for k in range(order + 1)]
    if func in ("odd-log-kernel", "odd-log-kernel-derivative"):
        if x0 >= 1:
            raise DomainError.invalid_argument("a0", "odd-log kernel needs a constant term below 1", float(x0))
        shift = 1 if func == "odd-log-kernel-derivative" else 0
        if x0 == 0:
            # L(x) = 2 sum_k x^k/(2k+1)
            return [
                mp.mpf(2) * mp.binomial(k + shift, shift) / (2 * (k + shift) + 1)
                for k in range(order + 1)
            ]
        kernel: Callable = odd_log_kernel if shift == 0 else odd_log_kernel_derivative
        return list(mp.taylor(kernel, x0, order))
    raise DomainError.unknown_kind(func, ("sqrt", "reciprocal-sqrt", "odd-log-kernel", "odd-log-kernel-derivative"))


def series_compose_analytic(a: TruncatedSeries, func: AnalyticFunction) -> TruncatedSeries:
    """
    func(a(t)) truncated at the order of ``a``.

    With d_k the Taylor coefficients of ``func`` about a0 and h = a - a0 (no
    constant term), the result is sum_k d_k h^k; h^k starts at t^k so k runs
    up to the order only.
    """
    coefficients = _taylor_coefficients(func, a[0], a.order)
    h = a - a[0]
    result = TruncatedSeries.constant(coefficients[0], a.order)
    power = TruncatedSeries.constant(1, a.order)
    for d_k in coefficients[1:]:
        power = power * h
        result = result + power * d_k
    return result


def sqrt(a: TruncatedSeries) -> TruncatedSeries:
    return series_compose_analytic(a, "sqrt")


def rsqrt(a: TruncatedSeries) -> TruncatedSeries:
    return series_compose_analytic(a, "reciprocal-sqrt")


def kernel(a: TruncatedSeries) -> TruncatedSeries:
    return series_compose_analytic(a, "odd-log-kernel")


def kernel_derivative(a: TruncatedSeries) -> TruncatedSeries:
    return series_compose_analytic(a, "odd-log-kernel-derivative")
