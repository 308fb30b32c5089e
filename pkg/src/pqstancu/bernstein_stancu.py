"""The (p,q)-Bernstein-Stancu operator and its moments.

    S_n(f; x) = sum_k b_{n,k}(x) f(t_{n,k})

    b_{n,k}(x) = p**(-n(n-1)/2) [n,k]_{p,q} p**(k(k-1)/2) x**k prod_{s<n-k} (p**s - q**s x)
    t_{n,k}    = (p**(n-k) [k]_{p,q} + alpha) / ([n]_{p,q} + beta)

All p-power prefactors of the weight cancel, leaving the one-parameter
q-Bernstein basis in ``r = q/p``:

    b_{n,k}(x) = [n,k]_r x**k prod_{s<n-k} (1 - r**s x)

The float path evaluates only this reduced form. :func:`basis_literal` keeps
the unreduced expression so the exact backend can confirm the two agree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .pq_core import (
    PQParams,
    gaussian_binomial_row,
    pq_binomial,
    pq_integer,
    r_integer,
    triangular_power,
)
from .scalar import Scalar

__all__ = [
    "StancuShift",
    "OperatorConfig",
    "BasisVector",
    "NodeSet",
    "MomentSet",
    "DefectVanishesError",
    "basis_vector",
    "basis_matrix",
    "basis_literal",
    "nodes",
    "apply",
    "apply_grid",
    "moment_polynomial",
    "central_moment_polynomial",
    "moment_closed",
    "moment_closed_grid",
    "moment_direct",
    "central_moment_closed",
    "central_moment_closed_grid",
    "central_moment_direct",
    "moments",
    "original_operator_weights",
    "original_operator_defect",
]


class DefectVanishesError(ValueError):
    """Raised when the uncorrected operator is requested with ``p = 1``."""


@dataclass(frozen=True)
class StancuShift:
    """Node translation ``(alpha, beta)`` with ``0 <= alpha <= beta``."""

    alpha: Scalar = 0
    beta: Scalar = 0

    def __post_init__(self):
        if not (0 <= self.alpha <= self.beta) or not math.isfinite(self.beta):
            raise ValueError(f"StancuShift requires 0 <= alpha <= beta, got alpha={self.alpha}, beta={self.beta}")


@dataclass(frozen=True)
class OperatorConfig:
    n: int
    params: PQParams
    shift: StancuShift = field(default_factory=StancuShift)

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"degree n must be a positive integer, got {self.n!r}")
        backend = self.params.backend
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(
            self,
            "shift",
            StancuShift(backend.convert(self.shift.alpha), backend.convert(self.shift.beta)),
        )

    @property
    def alpha(self) -> Scalar:
        return self.shift.alpha

    @property
    def beta(self) -> Scalar:
        return self.shift.beta

    @property
    def is_exact(self) -> bool:
        return self.params.is_exact


@dataclass(frozen=True)
class BasisVector:
    n: int
    x: Scalar
    values: tuple

    def total(self) -> Scalar:
        if isinstance(self.x, Fraction):
            return sum(self.values, Fraction(0))
        return math.fsum(self.values)


@dataclass(frozen=True)
class NodeSet:
    n: int
    nodes: tuple


@dataclass(frozen=True)
class MomentSet:
    x: Scalar
    m0: Scalar
    m1: Scalar
    m2: Scalar
    c1: Scalar
    c2: Scalar


def _check_x(config: OperatorConfig, x) -> Scalar:
    x = config.params.backend.convert(x)
    if not (0 <= x <= 1):
        raise ValueError(f"x must lie in [0, 1], got {x}")
    return x


# -- basis -------------------------------------------------------------------


def _reduced_exact(n: int, r: Fraction, x: Fraction) -> list:
    coeffs = gaussian_binomial_row(n, r)
    # prod_{s<j} (1 - r**s x) for j = 0..n
    prefix = [Fraction(1)]
    r_pow = Fraction(1)
    for _ in range(n):
        prefix.append(prefix[-1] * (1 - r_pow * x))
        r_pow *= r
    return [coeffs[k] * x**k * prefix[n - k] for k in range(n + 1)]


def basis_matrix(config: OperatorConfig, xs) -> np.ndarray:
    """Float basis weights, shape ``(len(xs), n + 1)``.

    O(n**2) setup for the Gaussian binomial row, then O(n) per point. Near
    ``r = 1`` the row overflows once n passes about 1030. Each
    factor ``1 - r**s x`` is formed as ``(1 - x) + x (1 - r**s)``, a sum of
    nonnegative terms, so there is no cancellation near ``x = 1``.
    """
    n = config.n
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(~((xs >= 0) & (xs <= 1))):
        raise ValueError("x must lie in [0, 1]")
    r = float(config.params.r)
    coeffs = gaussian_binomial_row(n, r)
    if not np.all(np.isfinite(coeffs)):
        raise OverflowError(f"Gaussian binomial row overflows double precision at n={n}, r={r}")
    s = np.arange(n)
    one_minus_rs = -np.expm1(s * math.log(r)) if r != 1.0 else np.zeros(n)
    factors = (1.0 - xs)[:, None] + xs[:, None] * one_minus_rs[None, :]
    prefix = np.ones((xs.size, n + 1))
    prefix[:, 1:] = np.cumprod(factors, axis=1)
    k = np.arange(n + 1)
    with np.errstate(under="ignore"):
        x_pows = xs[:, None] ** k[None, :]
        return coeffs[None, :] * x_pows * prefix[:, ::-1]


def basis_vector(config: OperatorConfig, x) -> BasisVector:
    """All ``n + 1`` basis weights at ``x``."""
    x = _check_x(config, x)
    if config.is_exact:
        values = _reduced_exact(config.n, config.params.r, x)
    else:
        values = [float(v) for v in basis_matrix(config, [x])[0]]
    return BasisVector(config.n, x, tuple(values))


def basis_literal(config: OperatorConfig, x) -> list:
    """Weights from the unreduced p,q expression (meant for exact inputs)."""
    x = _check_x(config, x)
    n, p, q = config.n, config.params.p, config.params.q
    scale = triangular_power(p, n)
    out = []
    for k in range(n + 1):
        prod = config.params.backend.one
        for s in range(n - k):
            prod *= p**s - q**s * x
        out.append(pq_binomial(n, k, config.params) * triangular_power(p, k) * x**k * prod / scale)
    return out


# -- nodes and application ---------------------------------------------------


def nodes(config: OperatorConfig) -> NodeSet:
    """``t_k = (p**(n-k) [k] + alpha) / ([n] + beta)`` for ``k = 0..n``."""
    n, params = config.n, config.params
    alpha, beta = config.alpha, config.beta
    if params.is_exact:
        p = params.p
        denom = pq_integer(n, params) + beta
        values = [(p ** (n - k) * pq_integer(k, params) + alpha) / denom for k in range(n + 1)]
        return NodeSet(n, tuple(values))
    # p**(n-k) [k]_{p,q} = p**(n-1) [k]_r; scale by p**(n-1) only when a shift is present
    r = params.r
    ints = [r_integer(k, r) for k in range(n + 1)]
    if beta == 0:
        values = [v / ints[n] for v in ints]
    else:
        lead = params.p ** (n - 1)
        denom = lead * ints[n] + beta
        values = [(lead * v + alpha) / denom for v in ints]
    return NodeSet(n, tuple(values))


def _evaluate(f: Callable, values: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(f(values), dtype=float)
    except TypeError:
        out = None
    if out is None or out.shape != values.shape:
        out = np.array([float(f(float(v))) for v in values])
    return out


def apply(config: OperatorConfig, f: Callable, x) -> Scalar:
    """``S_n(f; x)``: basis weights against ``f`` sampled at the nodes."""
    weights = basis_vector(config, x).values
    ts = nodes(config).nodes
    if config.is_exact:
        return sum((w * f(t) for w, t in zip(weights, ts)), Fraction(0))
    return math.fsum(w * float(f(t)) for w, t in zip(weights, ts))


def apply_grid(config: OperatorConfig, f: Callable, xs) -> np.ndarray:
    """Float ``S_n(f; x)`` for every ``x`` in ``xs``."""
    if config.is_exact:
        return np.array([float(apply(config, f, x)) for x in xs])
    fv = _evaluate(f, np.array(nodes(config).nodes))
    return basis_matrix(config, xs) @ fv


# -- moments -----------------------------------------------------------------


def _moment_terms(config: OperatorConfig):
    n, params = config.n, config.params
    big_n = pq_integer(n, params)
    return big_n, pq_integer(n - 1, params), big_n + config.beta, params.p ** (n - 1)


def moment_polynomial(config: OperatorConfig, m: int) -> tuple:
    """Coefficients ``(a0, a1, a2)`` with ``S_n(t**m; x) = a0 + a1 x + a2 x**2``."""
    if m not in (0, 1, 2):
        raise ValueError(f"moment order must be 0, 1 or 2, got {m}")
    one, zero = config.params.backend.one, config.params.backend.zero
    if m == 0:
        return one, zero, zero
    alpha, q = config.alpha, config.params.q
    big_n, prev_n, denom, lead = _moment_terms(config)
    if m == 1:
        return alpha / denom, big_n / denom, zero
    d2 = denom * denom
    return alpha * alpha / d2, big_n * (2 * alpha + lead) / d2, q * big_n * prev_n / d2


def central_moment_polynomial(config: OperatorConfig, j: int) -> tuple:
    """Coefficients ``(a0, a1, a2)`` of ``S_n((t - x)**j; x)`` in powers of x."""
    if j not in (1, 2):
        raise ValueError(f"central moment order must be 1 or 2, got {j}")
    alpha, beta, q = config.alpha, config.beta, config.params.q
    big_n, prev_n, denom, lead = _moment_terms(config)
    if j == 1:
        return alpha / denom, -beta / denom, config.params.backend.zero
    d2 = denom * denom
    quad = q * big_n * prev_n - big_n * big_n + beta * beta
    return alpha * alpha / d2, (lead * big_n - 2 * alpha * beta) / d2, quad / d2


def _horner(coeffs: tuple, x):
    a0, a1, a2 = coeffs
    return (a2 * x + a1) * x + a0


def moment_closed(config: OperatorConfig, m: int, x) -> Scalar:
    """Closed-form ``S_n(t**m; x)`` for ``m`` in ``{0, 1, 2}``."""
    coeffs = moment_polynomial(config, m)
    return _horner(coeffs, _check_x(config, x))


def central_moment_closed(config: OperatorConfig, j: int, x) -> Scalar:
    """Closed-form ``S_n((t - x)**j; x)`` for ``j`` in ``{1, 2}``."""
    coeffs = central_moment_polynomial(config, j)
    return _horner(coeffs, _check_x(config, x))


def central_moment_closed_grid(config: OperatorConfig, j: int, xs) -> np.ndarray:
    """Float closed-form central moment on an array of points."""
    coeffs = tuple(float(c) for c in central_moment_polynomial(config, j))
    return _horner(coeffs, np.asarray(xs, dtype=float))


def moment_closed_grid(config: OperatorConfig, m: int, xs) -> np.ndarray:
    coeffs = tuple(float(c) for c in moment_polynomial(config, m))
    return _horner(coeffs, np.asarray(xs, dtype=float))


def moment_direct(config: OperatorConfig, m: int, x) -> Scalar:
    """``S_n(t**m; x)`` by direct summation over the basis."""
    return apply(config, lambda t: t**m, x)


def central_moment_direct(config: OperatorConfig, j: int, x) -> Scalar:
    x = _check_x(config, x)
    return apply(config, lambda t: (t - x) ** j, x)


def moments(config: OperatorConfig, x) -> MomentSet:
    x = _check_x(config, x)
    return MomentSet(
        x=x,
        m0=moment_closed(config, 0, x),
        m1=moment_closed(config, 1, x),
        m2=moment_closed(config, 2, x),
        c1=central_moment_closed(config, 1, x),
        c2=central_moment_closed(config, 2, x),
    )


# -- the uncorrected operator ------------------------------------------------


def _check_defect_params(config: OperatorConfig) -> None:
    params = config.params
    if params.p == 1:
        raise DefectVanishesError("the uncorrected operator coincides with the corrected one at p = 1")
    params.require_strict()


def original_operator_weights(config: OperatorConfig, x) -> list:
    """Weights of the uncorrected operator (no ``p**(k(k-1)/2 - n(n-1)/2)`` rescaling).

    Its nodes are ``([k] + alpha)/([n] + beta)``; only the weights matter on
    ``f = 1``. Exact inputs use the literal formula; floats use
    ``p**(n(n-1)/2 - k(k-1)/2) * b_{n,k}(x)`` with the reduced basis.
    """
    _check_defect_params(config)
    x = _check_x(config, x)
    n, p, q = config.n, config.params.p, config.params.q
    if config.is_exact:
        out = []
        for k in range(n + 1):
            prod = Fraction(1)
            for s in range(n - k):
                prod *= p**s - q**s * x
            out.append(pq_binomial(n, k, config.params) * x**k * prod)
        return out
    reduced = basis_matrix(config, [x])[0]
    k = np.arange(n + 1)
    exponents = (n * (n - 1) - k * (k - 1)) // 2
    with np.errstate(under="ignore"):
        return list(reduced * np.power(float(p), exponents))


def original_operator_defect(config: OperatorConfig, x) -> Scalar:
    """Uncorrected operator applied to ``f = 1``, minus one."""
    weights = original_operator_weights(config, x)
    if config.is_exact:
        return sum(weights, Fraction(0)) - 1
    return math.fsum(weights) - 1.0
