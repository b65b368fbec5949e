"""
Principle-of-minimal-sensitivity optimization of the effective classical potential.

For B > 0 the optimum is a saddle: W1 is minimized over (omega_perp2,
omega_par) and maximized over omega_perp1 (the far-field solution
(B, B, 0) is a maximum along omega_perp1). The search nests a bounded
scalar maximization over omega_perp1 inside a Nelder-Mead minimization in
(log omega_perp2, omega_par), then polishes the full three-dimensional
stationarity condition with Newton steps on numerically differentiated W1.

At B = 0 the problem is rotation invariant and the search runs over the
isotropic family (0, Omega, Omega/2), on which W1 is even in Omega.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Literal, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import optimize

from .config import fd_step, load_settings
from .effective_potential import _w1_value
from .errors import DomainError, NumericalError
from .models import FrequencyTriple, ThermoPoint, build
from .telemetry import auto_emit_event

log = logging.getLogger(__name__)

Status = Literal["minimum", "stationary", "boundary", "constrained", "failed"]
Direction = Literal["transverse", "longitudinal"]

HYDROGEN_SEED = (0.0, 32.0 / (9.0 * math.pi), 16.0 / (9.0 * math.pi))

# Relative size of the Hessian eigenvalue still accepted as non-negative.
_CURVATURE_SLACK = 1e-4
_POLISH_STEPS = 8


class OptimizationResult(BaseModel):
    """Outcome of one optimization at a fixed thermodynamic point."""

    model_config = ConfigDict(frozen=True)

    frequencies: FrequencyTriple
    value: float
    stationarity_residual: float = Field(ge=0)
    status: Status
    evaluations: int = Field(ge=0)
    tolerance: float = Field(gt=0)
    diagnostics: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _status_matches_residual(self) -> "OptimizationResult":
        if self.status in ("minimum", "stationary", "boundary") and self.stationarity_residual > self.tolerance:
            raise ValueError(
                f"status '{self.status}' requires residual <= {self.tolerance}, got {self.stationarity_residual}"
            )
        return self

    @property
    def converged(self) -> bool:
        return self.status != "failed"


class _BudgetExhausted(Exception):
    pass


@dataclass
class _CountingPotential:
    """W1 at a fixed point as a function of raw frequencies, with an evaluation budget."""

    point: ThermoPoint
    budget: int
    evaluations: int = 0

    def __call__(self, omega_perp1: float, omega_perp2: float, omega_par: float) -> float:
        self.evaluations += 1
        if self.evaluations > self.budget:
            raise _BudgetExhausted()
        return _w1_value(self.point, (omega_perp1, omega_perp2, omega_par))


@dataclass
class _Candidate:
    x: np.ndarray
    value: float
    residual: float
    status: Status
    seed: tuple[float, float, float]
    diagnostics: dict[str, Any] = field(default_factory=dict)


def _gradient(fn: Callable[..., float], x: np.ndarray, active: Sequence[int]) -> np.ndarray:
    grad = np.zeros(len(x))
    for i in active:
        h = fd_step(x[i])
        up, down = x.copy(), x.copy()
        up[i] += h
        down[i] -= h
        grad[i] = (fn(*up) - fn(*down)) / (2.0 * h)
    return grad


def _hessian(fn: Callable[..., float], x: np.ndarray, active: Sequence[int], f0: float) -> np.ndarray:
    """Second differences of function values; steps large enough to stay above quadrature noise."""
    n = len(x)
    k = np.array([1e-3 * max(abs(v), 0.1) for v in x])
    hess = np.zeros((n, n))

    def shifted(*offsets: tuple[int, float]) -> float:
        y = x.copy()
        for index, delta in offsets:
            y[index] += delta
        return fn(*y)

    for a, i in enumerate(active):
        hess[i, i] = (shifted((i, k[i])) - 2.0 * f0 + shifted((i, -k[i]))) / k[i] ** 2
        for j in active[a + 1:]:
            pp = shifted((i, k[i]), (j, k[j]))
            pm = shifted((i, k[i]), (j, -k[j]))
            mp = shifted((i, -k[i]), (j, k[j]))
            mm = shifted((i, -k[i]), (j, -k[j]))
            hess[i, j] = hess[j, i] = (pp - pm - mp + mm) / (4.0 * k[i] * k[j])
    return hess


def _clamp(x: np.ndarray, upper: float) -> np.ndarray:
    y = x.copy()
    y[0] = min(max(y[0], 0.0), upper)
    y[1] = max(y[1], 1e-12)
    y[2] = abs(y[2])
    return y


def _newton_polish(
    fn: Callable[..., float],
    x: np.ndarray,
    active: Sequence[int],
    tol: float,
    upper: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Newton iterations on the gradient restricted to ``active``; each accepted step lowers |grad|."""
    grad = _gradient(fn, x, active)
    residual = float(np.linalg.norm(grad[list(active)]))
    for _ in range(_POLISH_STEPS):
        if residual <= 0.1 * tol:
            break
        hess = _hessian(fn, x, active, fn(*x))
        sub = hess[np.ix_(active, active)]
        step = np.linalg.lstsq(sub, -grad[list(active)], rcond=1e-8)[0]
        accepted = False
        scale = 1.0
        for _ in range(6):
            trial = x.copy()
            trial[list(active)] += scale * step
            trial = _clamp(trial, upper)
            trial_grad = _gradient(fn, trial, active)
            trial_residual = float(np.linalg.norm(trial_grad[list(active)]))
            if trial_residual < residual:
                x, grad, residual = trial, trial_grad, trial_residual
                accepted = True
                break
            scale *= 0.5
        if not accepted:
            break
    return x, grad


def _omega_perp1_upper(omega_perp2: float, B: float) -> float:
    return 2.0 * max(omega_perp2, B) + 1.0


def _inner_max(
    fn: Callable[..., float], omega_perp2: float, omega_par: float, B: float
) -> tuple[float, float, str | None]:
    """Maximize W1 over omega_perp1; returns (omega_perp1, value, bound hit)."""
    upper = _omega_perp1_upper(omega_perp2, B)
    res = optimize.minimize_scalar(
        lambda o1: -fn(o1, omega_perp2, omega_par),
        bounds=(0.0, upper),
        method="bounded",
        options={"xatol": 1e-9},
    )
    o1, value = float(res.x), -float(res.fun)
    at_zero = fn(0.0, omega_perp2, omega_par)
    if at_zero >= value:
        return 0.0, at_zero, "lower"
    if upper - o1 < 1e-6 * upper:
        return o1, value, "upper"
    return o1, value, None


def _classify(
    fn: Callable[..., float], x: np.ndarray, grad: np.ndarray, bound: str | None, tol: float
) -> tuple[Status, float, dict[str, Any]]:
    free = [1, 2]
    if bound is None:
        residual = float(np.linalg.norm(grad))
    else:
        # a maximum at the lower bound needs dW/d(omega_perp1) <= 0, at the upper bound >= 0
        outward = grad[0] if bound == "lower" else -grad[0]
        residual = float(math.hypot(np.linalg.norm(grad[free]), max(outward, 0.0)))
    diagnostics: dict[str, Any] = {"gradient": [float(g) for g in grad]}
    if residual > tol:
        return "failed", residual, diagnostics
    if bound is not None:
        diagnostics["bound"] = bound
        return "boundary", residual, diagnostics

    hess = _hessian(fn, x, [0, 1, 2], fn(*x))
    scale = max(1.0, float(np.max(np.abs(hess))))
    block = hess[1:, 1:]
    h11 = hess[0, 0]
    if h11 < -_CURVATURE_SLACK * scale:
        block = block - np.outer(hess[1:, 0], hess[0, 1:]) / h11
    lowest = float(np.linalg.eigvalsh(block).min())
    diagnostics["curvature_omega_perp1"] = float(h11)
    diagnostics["lowest_minimized_curvature"] = lowest
    if h11 <= _CURVATURE_SLACK * scale and lowest >= -_CURVATURE_SLACK * scale:
        return "minimum", residual, diagnostics
    return "stationary", residual, diagnostics


def _run_seed(
    fn: _CountingPotential,
    seed: tuple[float, float, float],
    tol: float,
) -> _Candidate:
    B = fn.point.B

    def reduced(y: np.ndarray) -> float:
        return _inner_max(fn, math.exp(y[0]), abs(y[1]), B)[1]

    y0 = np.array([math.log(seed[1]), seed[2]])
    simplex = np.array([y0, y0 + [0.2, 0.0], y0 + [0.0, 0.1 * max(1.0, seed[2])]])
    res = optimize.minimize(
        reduced,
        y0,
        method="Nelder-Mead",
        options={"initial_simplex": simplex, "xatol": 1e-5, "fatol": 1e-12, "maxiter": 2000},
    )
    omega_perp2, omega_par = math.exp(res.x[0]), abs(res.x[1])
    omega_perp1, _, bound = _inner_max(fn, omega_perp2, omega_par, B)
    x = np.array([omega_perp1, omega_perp2, omega_par])
    upper = _omega_perp1_upper(omega_perp2, B)

    active = [0, 1, 2] if bound is None else [1, 2]
    x, grad = _newton_polish(fn, x, active, tol, upper)
    if bound is None and (x[0] <= 0.0 or x[0] >= upper):
        bound = "lower" if x[0] <= 0.0 else "upper"
        grad = _gradient(fn, x, [0, 1, 2])
    elif bound is not None:
        grad = _gradient(fn, x, [0, 1, 2])
    status, residual, diagnostics = _classify(fn, x, grad, bound, tol)
    diagnostics["nelder_mead_iterations"] = int(res.nit)
    return _Candidate(x=x, value=fn(*x), residual=residual, status=status, seed=seed, diagnostics=diagnostics)


def _run_isotropic(fn: _CountingPotential, seeds: Iterable[float], tol: float) -> _Candidate:
    """B = 0: one-dimensional search over (0, Omega, Omega/2)."""

    def family(omega: float) -> float:
        omega = abs(omega)
        return fn(0.0, omega, 0.5 * omega)

    grid = sorted({0.0, *np.geomspace(1e-3, 1e2, 26).tolist(), *(s for s in seeds if s > 0)})
    values = [family(omega) for omega in grid]
    best = int(np.argmin(values))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, len(grid) - 1)]
    omega, value = grid[best], values[best]
    if hi > lo:
        res = optimize.minimize_scalar(family, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
        if res.fun < value:
            omega, value = float(res.x), float(res.fun)

    curvature = 0.0
    for _ in range(_POLISH_STEPS):
        h = fd_step(omega)
        derivative = (family(omega + h) - family(omega - h)) / (2.0 * h)
        k = 1e-3 * max(omega, 0.1)
        curvature = (family(omega + k) - 2.0 * family(omega) + family(omega - k)) / (k * k)
        if abs(derivative) <= 0.1 * tol or curvature <= 0:
            break
        trial = abs(omega - derivative / curvature)
        if family(trial) > family(omega):
            break
        omega = trial

    h = fd_step(omega)
    family_residual = abs(family(omega + h) - family(omega - h)) / (2.0 * h)
    x = np.array([0.0, omega, 0.5 * omega])
    # the residual reported is the full gradient; off the nucleus it stays finite
    grad = _gradient(fn, x, [0, 1, 2])
    residual = float(np.linalg.norm(grad))
    diagnostics: dict[str, Any] = {
        "family": "isotropic",
        "family_residual": float(family_residual),
        "gradient": [float(g) for g in grad],
        "curvature": float(curvature),
    }
    if family_residual > tol:
        status: Status = "failed"
    elif residual > tol:
        status = "constrained"
    elif curvature >= -_CURVATURE_SLACK * max(1.0, abs(curvature)):
        status = "minimum"
    else:
        status = "stationary"
    return _Candidate(x=x, value=family(omega), residual=residual, status=status, seed=(0.0, omega, 0.5 * omega),
                      diagnostics=diagnostics)


def _seeds(point: ThermoPoint, init: FrequencyTriple | None, warm_starts: Iterable[FrequencyTriple]):
    seeds: list[tuple[float, float, float]] = []
    if init is not None:
        seeds.append(init.as_tuple())
    seeds.extend(w.as_tuple() for w in warm_starts)
    if point.B > 0:
        seeds.append((point.B, point.B, 0.0))
    seeds.append(HYDROGEN_SEED)
    unique: list[tuple[float, float, float]] = []
    for s in seeds:
        if s[1] <= 0:
            s = (s[0], max(point.B, HYDROGEN_SEED[1]), s[2])
        if not any(np.allclose(s, u, rtol=1e-6, atol=1e-9) for u in unique):
            unique.append(s)
    return unique


def _select(candidates: list[_Candidate], tol: float) -> _Candidate:
    """Lowest value among converged candidates; ties go to the smaller omega_par."""
    pool = [c for c in candidates if c.status != "failed"] or candidates
    lowest = min(c.value for c in pool)
    ties = [c for c in pool if c.value - lowest <= tol]
    return min(ties, key=lambda c: (c.x[2], c.value))


def _optimize_details(point: ThermoPoint, *args, **kwargs) -> dict[str, Any]:
    return {"beta": point.beta, "B": point.B, "rho0": point.rho0, "z0": point.z0}


@auto_emit_event("optimize_frequencies", _optimize_details)
def optimize_frequencies(
    point: ThermoPoint,
    init: FrequencyTriple | None = None,
    tol: float | None = None,
    warm_starts: Sequence[FrequencyTriple] = (),
) -> OptimizationResult:
    """
    Stationary point of W1 over the trial frequencies at ``point``.

    Seeds are ``init``, the ``warm_starts``, the far-field triple (B, B, 0)
    and the zero-field hydrogen optimum; the lowest converged candidate wins.
    A result that misses ``tol`` is returned with ``status="failed"`` and the
    per-seed diagnostics.
    """
    settings = load_settings()
    tol = settings.residual_tolerance if tol is None else tol
    if not (tol > 0):
        raise DomainError.invalid_argument("tol", "residual tolerance must be positive", tol)

    fn = _CountingPotential(point, settings.max_evaluations)
    seeds = _seeds(point, init, warm_starts)
    candidates: list[_Candidate] = []
    problems: list[dict[str, Any]] = []
    try:
        if point.B == 0:
            candidates.append(_run_isotropic(fn, [s[1] for s in seeds], tol))
        else:
            for seed in seeds:
                try:
                    candidate = _run_seed(fn, seed, tol)
                except NumericalError as e:
                    log.warning("Seed %s failed at %s: %s", seed, point, e)
                    problems.append({"seed": list(seed), "error": e.to_dict()})
                    continue
                log.debug("seed %s -> %s value=%.12g residual=%.3g", seed, candidate.status,
                          candidate.value, candidate.residual)
                candidates.append(candidate)
    except _BudgetExhausted:
        log.warning("Evaluation budget of %d exhausted at %s", settings.max_evaluations, point)
        problems.append({"error": "evaluation budget exhausted", "budget": settings.max_evaluations})

    if not candidates:
        raise NumericalError.not_converged(
            "frequency optimization",
            beta=point.beta, B=point.B, rho0=point.rho0, z0=point.z0,
            evaluations=fn.evaluations, problems=problems,
        )

    best = _select(candidates, tol)
    diagnostics = dict(best.diagnostics)
    diagnostics["seed"] = list(best.seed)
    diagnostics["candidates"] = [
        {"seed": list(c.seed), "status": c.status, "value": c.value, "residual": c.residual} for c in candidates
    ]
    if problems:
        diagnostics["problems"] = problems
    return build(
        OptimizationResult,
        frequencies=FrequencyTriple.of(*(float(v) for v in best.x)),
        value=best.value,
        stationarity_residual=best.residual,
        status=best.status,
        evaluations=fn.evaluations,
        tolerance=tol,
        diagnostics=diagnostics,
    )


@dataclass
class ProfileRow:
    direction: str
    distance: float
    value: float
    frequencies: FrequencyTriple | None
    residual: float
    status: str
    error: str | None = None


def _check_grid(name: str, grid: Sequence[float]) -> list[float]:
    values = [float(g) for g in grid]
    if not values:
        raise DomainError.invalid_argument(name, "grid is empty")
    if any(v < 0 or not math.isfinite(v) for v in values):
        raise DomainError.invalid_argument(name, "distances must be finite and non-negative")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise DomainError.invalid_argument(name, "grid must be strictly ascending")
    return values


def potential_profile(
    beta: float,
    B: float,
    direction: str,
    grid: Sequence[float],
    tol: float | None = None,
) -> list[ProfileRow]:
    """
    Optimized W1 along the transverse (rho0) or longitudinal (z0) axis.

    Each point is warm-started from the previous converged point. A failing
    point is recorded in its row and the scan continues.
    """
    if direction not in ("transverse", "longitudinal"):
        raise DomainError.unknown_kind(direction, ("transverse", "longitudinal"))
    distances = _check_grid("grid", grid)
    base = ThermoPoint.of(beta, B)

    rows: list[ProfileRow] = []
    warm: FrequencyTriple | None = None
    for distance in distances:
        point = base.moved_to(distance, 0.0) if direction == "transverse" else base.moved_to(0.0, distance)
        try:
            result = optimize_frequencies(point, init=warm, tol=tol)
        except NumericalError as e:
            log.error("Profile point %s=%g failed", direction, distance, exc_info=True)
            rows.append(ProfileRow(direction, distance, math.nan, None, math.nan, "failed", str(e)))
            continue
        rows.append(
            ProfileRow(direction, distance, result.value, result.frequencies,
                       result.stationarity_residual, result.status)
        )
        if result.converged:
            warm = result.frequencies
    log.info("Profile %s at beta=%g B=%g: %d points", direction, beta, B, len(rows))
    return rows


def optimized_potential_grid(
    beta: float,
    B: float,
    rho_grid: Sequence[float],
    z_grid: Sequence[float],
    tol: float | None = None,
) -> np.ndarray:
    """
    Optimized W1 on the (rho0, z0) grid; ``result[i, j]`` belongs to (rho_grid[i], z_grid[j]).

    The walk is row by row with warm starts from the neighbouring point.

    :raises NumericalError: if any grid point fails to converge.
    """
    rho = _check_grid("rho_grid", rho_grid)
    z = _check_grid("z_grid", z_grid)
    base = ThermoPoint.of(beta, B)

    values = np.empty((len(rho), len(z)))
    row_start: FrequencyTriple | None = None
    for i, r in enumerate(rho):
        warm = row_start
        for j, zz in enumerate(z):
            result = optimize_frequencies(base.moved_to(r, zz), init=warm, tol=tol)
            if not result.converged:
                raise NumericalError.not_converged(
                    "potential grid", rho0=r, z0=zz, residual=result.stationarity_residual,
                    diagnostics=result.diagnostics,
                )
            values[i, j] = result.value
            warm = result.frequencies
            if j == 0:
                row_start = result.frequencies
    return values
