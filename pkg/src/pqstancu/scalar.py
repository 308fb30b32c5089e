"""Scalar backends.

Every routine in the package is written against plain arithmetic operators,
so the same code runs on two number types:

* ``FLOAT``: IEEE double precision, machine epsilon ``2**-52``.
* ``EXACT``: :class:`fractions.Fraction`, no rounding anywhere.

The exact backend is the ground truth in all cross-backend tests.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

Scalar = Union[float, Fraction]


@dataclass(frozen=True)
class Backend:
    name: str
    exact: bool
    eps: float

    def convert(self, value) -> Scalar:
        """Coerce ``value`` (int, float, Fraction or a decimal/ratio string)."""
        if self.exact:
            if isinstance(value, float):
                # Fraction(0.1) would keep the binary expansion; go via repr
                return Fraction(repr(value))
            return Fraction(value)
        if isinstance(value, str):
            return float(Fraction(value))
        return float(value)

    def ratio(self, num: int, den: int) -> Scalar:
        if self.exact:
            return Fraction(num, den)
        return num / den

    @property
    def zero(self) -> Scalar:
        return self.convert(0)

    @property
    def one(self) -> Scalar:
        return self.convert(1)


FLOAT = Backend("float", exact=False, eps=sys.float_info.epsilon)
EXACT = Backend("exact", exact=True, eps=0.0)


def backend_of(*values) -> Backend:
    """Exact if every value is rational (int/Fraction), float otherwise."""
    if all(isinstance(v, Rational) for v in values):
        return EXACT
    return FLOAT


def parse_scalar(text: str, exact: bool = False) -> Scalar:
    """Parse ``"0.9"``, ``"9/10"`` or ``"1e-3"`` into the requested backend."""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a number: {text!r}") from exc
    return value if exact else float(value)
