"""(p,q)-integers, factorials and binomial coefficients.

Exact inputs (``int``/``Fraction``) are evaluated literally from the defining
sums and products. Float inputs go through the ratio ``r = q/p``:

    [n]_{p,q} = p**(n-1) * [n]_r
    [n, k]_{p,q} = p**(k*(n-k)) * [n, k]_r

which keeps the huge and tiny power prefactors from being formed separately.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .scalar import EXACT, FLOAT, Backend, Scalar, backend_of

__all__ = [
    "PQParams",
    "pq_integer",
    "pq_integer_by_cases",
    "pq_factorial",
    "pq_binomial",
    "r_integer",
    "gaussian_binomial",
    "gaussian_binomial_row",
    "triangular_power",
]


@dataclass(frozen=True)
class PQParams:
    """Deformation parameters with ``0 < q <= p <= 1``.

    Both fields share one backend: if either is a float, both become floats.
    """

    p: Scalar
    q: Scalar

    def __post_init__(self):
        backend = backend_of(self.p, self.q)
        p, q = backend.convert(self.p), backend.convert(self.q)
        if not (0 < q <= p <= 1):
            raise ValueError(f"PQParams requires 0 < q <= p <= 1, got p={self.p}, q={self.q}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def exact(cls, p, q) -> "PQParams":
        return cls(EXACT.convert(p), EXACT.convert(q))

    @classmethod
    def floating(cls, p, q) -> "PQParams":
        return cls(FLOAT.convert(p), FLOAT.convert(q))

    @property
    def backend(self) -> Backend:
        return EXACT if isinstance(self.p, Fraction) else FLOAT

    @property
    def is_exact(self) -> bool:
        return self.backend.exact

    @property
    def r(self) -> Scalar:
        return self.q / self.p

    def require_strict(self) -> None:
        """Reject ``q == p`` for callers that need the ``q < p`` regime."""
        if not self.q < self.p:
            raise ValueError(f"q < p required, got p={self.p}, q={self.q}")


def _power(base: Scalar, m: int) -> Scalar:
    # int exponents: Fraction.__pow__ is exact, float uses libm pow
    return base**m


def r_integer(n: int, r: Scalar) -> Scalar:
    """One-parameter integer ``[n]_r = 1 + r + ... + r**(n-1)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if isinstance(r, Fraction):
        total, term = Fraction(0), Fraction(1)
        for _ in range(n):
            total += term
            term *= r
        return total
    r = float(r)
    if r == 1.0:
        return float(n)
    # expm1/log keep full relative accuracy when r is close to 1
    log_r = math.log(r)
    return math.expm1(n * log_r) / math.expm1(log_r)


def pq_integer(n: int, params: PQParams) -> Scalar:
    """``[n]_{p,q} = sum_{j<n} p**(n-1-j) q**j``; zero for ``n = 0``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return params.backend.zero
    p, q = params.p, params.q
    if params.is_exact:
        total, q_pow = Fraction(0), Fraction(1)
        for _ in range(n):
            total = total * p + q_pow
            q_pow *= q
        return total
    return _power(p, n - 1) * r_integer(n, params.r)


def pq_integer_by_cases(n: int, params: PQParams) -> Scalar:
    """The piecewise closed form: quotient, ``n p**(n-1)``, q-integer or ``n``."""
    p, q = params.p, params.q
    if p == 1 and q == 1:
        return params.backend.convert(n)
    if p == 1:
        return r_integer(n, q)
    if p == q:
        return n * _power(p, n - 1) if n else params.backend.zero
    return (_power(p, n) - _power(q, n)) / (p - q)


def pq_factorial(n: int, params: PQParams) -> Scalar:
    """``[1][2]...[n]`` with the empty product equal to one."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    result = params.backend.one
    for j in range(1, n + 1):
        result *= pq_integer(j, params)
    return result


def gaussian_binomial(n: int, k: int, r: Scalar) -> Scalar:
    """One-parameter Gaussian binomial ``[n, k]_r``."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    k = min(k, n - k)
    result = Fraction(1) if isinstance(r, Fraction) else 1.0
    for j in range(k):
        result = result * r_integer(n - j, r) / r_integer(j + 1, r)
    return result


def gaussian_binomial_row(n: int, r: Scalar):
    """All of ``[n, 0]_r ... [n, n]_r`` via ``[m,k] = [m-1,k-1] + r**k [m-1,k]``.

    Every step adds nonnegative terms, so the float row is accurate to a few
    ulps per entry. Returns a list of Fractions or a float ndarray.
    """
    if isinstance(r, Fraction):
        row = [Fraction(1)]
        r_pows = [Fraction(1)]
        for m in range(1, n + 1):
            r_pows.append(r_pows[-1] * r)
            row = [Fraction(1)] + [row[k - 1] + r_pows[k] * row[k] for k in range(1, m)] + [Fraction(1)]
        return row
    r_pows = float(r) ** np.arange(n + 1)
    row = np.ones(n + 1)
    with np.errstate(over="ignore"):
        for m in range(2, n + 1):
            row[1:m] = row[0 : m - 1] + r_pows[1:m] * row[1:m]
    return row


def pq_binomial(n: int, k: int, params: PQParams) -> Scalar:
    """``[n]! / ([k]! [n-k]!)`` in the (p,q) sense."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    if params.is_exact:
        return pq_factorial(n, params) / (pq_factorial(k, params) * pq_factorial(n - k, params))
    return _power(params.p, k * (n - k)) * gaussian_binomial(n, k, params.r)


def triangular_power(base: Scalar, m: int) -> Scalar:
    """``base**(m(m-1)/2)``.

    Underflows in floating point for ``base < 1`` and moderate ``m``; the
    float basis code never forms it on its own.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    return _power(base, m * (m - 1) // 2)
