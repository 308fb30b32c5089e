"""Parameter schedules, sup-norm convergence sweeps and Popoviciu bounds.

All sup-norms here are maxima over a uniform, endpoint-inclusive grid, so
they under-estimate the true norm on [0, 1].
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bernstein_stancu import OperatorConfig, StancuShift, apply_grid, central_moment_closed_grid
from .functions import TestFunction, monomial
from .pq_core import PQParams

DEFAULT_GRID = 257
DEFAULT_THRESHOLD = 0.02

__all__ = [
    "DEFAULT_GRID",
    "DEFAULT_THRESHOLD",
    "ParameterSchedule",
    "ConvergenceRow",
    "ConvergenceReport",
    "default_schedule",
    "power_schedule",
    "constant_schedule",
    "parse_schedule",
    "uniform_grid",
    "sup_error",
    "korovkin_sweep",
    "modulus_of_continuity",
    "modulus_profile",
    "popoviciu_bound",
    "popoviciu_bound_grid",
]


@dataclass(frozen=True)
class ParameterSchedule:
    name: str
    generator: Callable[[int], PQParams]

    def __call__(self, n: int) -> PQParams:
        if n < 1:
            raise ValueError("schedule index must be >= 1")
        return self.generator(n)


def power_schedule(p_exp: float, q_exp: float) -> ParameterSchedule:
    """``p_n = 1 - (n+1)**-p_exp``, ``q_n = 1 - (n+1)**-q_exp``.

    Needs ``1 < q_exp < p_exp``: exponents above one give ``p_n**n -> 1`` and
    ``q_n**n -> 1``, and ``q_exp < p_exp`` gives ``q_n < p_n``.
    """
    if not 1 < q_exp < p_exp:
        raise ValueError(f"power schedule needs 1 < q_exp < p_exp, got p_exp={p_exp}, q_exp={q_exp}")

    def gen(n: int) -> PQParams:
        return PQParams.floating(1.0 - (n + 1.0) ** -p_exp, 1.0 - (n + 1.0) ** -q_exp)

    return ParameterSchedule(f"power:{p_exp:g},{q_exp:g}", gen)


def default_schedule() -> ParameterSchedule:
    """``p_n = 1 - (n+1)**-2``, ``q_n = 1 - (n+1)**-1.5``."""
    return ParameterSchedule("default", power_schedule(2.0, 1.5).generator)


def constant_schedule(p: float, q: float) -> ParameterSchedule:
    """Fixed ``(p, q)`` for every n; does not converge unless ``p = q = 1``."""
    params = PQParams.floating(p, q)
    params.require_strict()
    return ParameterSchedule(f"constant:{p:g},{q:g}", lambda n: params)


def parse_schedule(spec: str) -> ParameterSchedule:
    """``default``, ``power:a,b`` or ``constant:p,q``."""
    name, _, args = spec.strip().partition(":")
    if name == "default" and not args:
        return default_schedule()
    if name in ("power", "constant"):
        try:
            a, b = (float(v) for v in args.split(","))
        except ValueError as exc:
            raise ValueError(f"schedule {spec!r} needs two numbers") from exc
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError(f"schedule {spec!r} has non-finite values")
        return power_schedule(a, b) if name == "power" else constant_schedule(a, b)
    raise ValueError(f"unknown schedule {spec!r}")


def uniform_grid(grid: int) -> np.ndarray:
    if grid < 2:
        raise ValueError(f"grid needs at least 2 points, got {grid}")
    return np.linspace(0.0, 1.0, grid)


def _values(f: Callable, xs: np.ndarray) -> np.ndarray:
    out = np.asarray(f(xs), dtype=float)
    if out.shape != xs.shape:
        out = np.array([float(f(float(x))) for x in xs])
    return out


def _config(n: int, schedule: ParameterSchedule, shift: StancuShift) -> OperatorConfig:
    params = schedule(n)
    return OperatorConfig(n, PQParams.floating(params.p, params.q), shift)


def _sup_error(config: OperatorConfig, f: Callable, xs: np.ndarray) -> float:
    return float(np.max(np.abs(apply_grid(config, f, xs) - _values(f, xs))))


def sup_error(
    f: Callable,
    n: int,
    schedule: ParameterSchedule,
    shift: StancuShift = StancuShift(),
    grid: int = DEFAULT_GRID,
) -> float:
    """Grid maximum of ``|S_n(f; x) - f(x)|`` using ``schedule(n)``."""
    return _sup_error(_config(n, schedule, shift), f, uniform_grid(grid))


# -- modulus of continuity ----------------------------------------------------


def modulus_profile(f: Callable, grid: int = DEFAULT_GRID) -> np.ndarray:
    """``omega[d]`` = max ``|f(u) - f(v)|`` over grid pairs at most ``d`` steps apart."""
    xs = uniform_grid(grid)
    fv = _values(f, xs)
    lag_max = np.zeros(grid)
    for d in range(1, grid):
        lag_max[d] = np.max(np.abs(fv[d:] - fv[:-d]))
    return np.maximum.accumulate(lag_max)


def _lags(delta, grid: int) -> np.ndarray:
    h = 1.0 / (grid - 1)
    # small relative slack so delta = d*h is not lost to rounding
    lags = np.floor(np.asarray(delta, dtype=float) / h * (1 + 1e-12))
    return np.clip(lags, 0, grid - 1).astype(int)


def modulus_of_continuity(f: Callable, delta: float, grid: int = DEFAULT_GRID) -> float:
    """Grid estimate of ``omega(f, delta)``; nondecreasing in ``delta``."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return float(modulus_profile(f, grid)[_lags(delta, grid)])


def popoviciu_bound_grid(config: OperatorConfig, f: Callable, xs, grid: int = DEFAULT_GRID) -> np.ndarray:
    """``2 omega(f, sqrt(c2(x)))`` at each ``x`` in ``xs``."""
    profile = modulus_profile(f, grid)
    c2 = central_moment_closed_grid(config, 2, xs)
    delta = np.sqrt(np.maximum(c2, 0.0))
    return 2.0 * profile[_lags(delta, grid)]


def popoviciu_bound(config: OperatorConfig, f: Callable, x: float, grid: int = DEFAULT_GRID) -> float:
    """Upper bound ``2 omega(f, sqrt(S_n((t-x)**2; x)))`` on ``|S_n(f; x) - f(x)|``.

    Holds for any positive linear operator reproducing constants. The
    modulus is itself a grid estimate, so the bound inherits that slack.
    """
    if not 0 <= x <= 1:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    return float(popoviciu_bound_grid(config, f, [x], grid)[0])


# -- sweeps ------------------------------------------------------------------


@dataclass
class ConvergenceRow:
    n: int
    p: float
    q: float
    errors: dict
    bounds: dict
    c2_sup: float
    korovkin_max: float


@dataclass
class ConvergenceReport:
    schedule: str
    shift: StancuShift
    grid: int
    threshold: float
    functions: list
    rows: list = field(default_factory=list)

    @property
    def converged(self) -> bool:
        """Monomials 1, t, t**2 all below threshold at the largest n."""
        return bool(self.rows) and self.rows[-1].korovkin_max < self.threshold

    def column(self, name: str) -> np.ndarray:
        return np.array([row.errors[name] for row in self.rows])


_KOROVKIN_TESTS = tuple(monomial(m) for m in range(3))


def _name(f) -> str:
    return f.name if isinstance(f, TestFunction) else getattr(f, "__name__", repr(f))


def korovkin_sweep(
    n_values: Sequence[int],
    schedule: ParameterSchedule,
    shift: StancuShift = StancuShift(),
    fs: Sequence[Callable] = _KOROVKIN_TESTS,
    grid: int = DEFAULT_GRID,
    threshold: float = DEFAULT_THRESHOLD,
) -> ConvergenceReport:
    """One row per n: sup errors, Popoviciu bound sups and the c2 sup.

    The monomials 1, t, t**2 are always evaluated for the convergence flag,
    whether or not they are among ``fs``.
    """
    n_values = list(n_values)
    if not n_values:
        raise ValueError("n_values must be nonempty")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError("n_values must be strictly increasing")
    if n_values[0] < 1:
        raise ValueError("n_values must be positive")
    fs = list(fs)
    names = [_name(f) for f in fs]
    if len(set(names)) != len(names):
        raise ValueError("test function names must be distinct")
    xs = uniform_grid(grid)
    profiles = {name: modulus_profile(f, grid) for name, f in zip(names, fs)}
    report = ConvergenceReport(schedule.name, shift, grid, threshold, names)
    for n in n_values:
        config = _config(n, schedule, shift)
        c2 = central_moment_closed_grid(config, 2, xs)
        lags = _lags(np.sqrt(np.maximum(c2, 0.0)), grid)
        errors, bounds = {}, {}
        for name, f in zip(names, fs):
            errors[name] = _sup_error(config, f, xs)
            bounds[name] = float(np.max(2.0 * profiles[name][lags]))
        korovkin = max(_sup_error(config, f, xs) for f in _KOROVKIN_TESTS)
        report.rows.append(
            ConvergenceRow(n, float(config.params.p), float(config.params.q), errors, bounds, float(c2.max()), korovkin)
        )
    return report
