"""Named test functions on [0, 1].

Each catalog entry evaluates on Python scalars (float or Fraction, staying
exact for rational input) and elementwise on numpy arrays. Spec strings:

    const:c            f(t) = c
    monomial:m         f(t) = t**m          (aliases: 1, t, t^2, t^m)
    abs:c              f(t) = |t - c|
    poly:a0,a1,...     f(t) = a0 + a1 t + ...
    pwl:x0:y0,x1:y1..  piecewise-linear interpolant through (xi, yi)
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .scalar import parse_scalar

__all__ = ["TestFunction", "constant", "monomial", "kink", "polynomial", "piecewise_linear", "parse_function"]


@dataclass(frozen=True)
class TestFunction:
    name: str
    func: Callable
    smooth: bool = True
    monomial_degree: int | None = None

    def __call__(self, t):
        return self.func(t)


def _coerce(c, t):
    # keep numpy arrays in float64 rather than object dtype
    return float(c) if isinstance(t, np.ndarray) else c


def constant(c=1) -> TestFunction:
    def f(t):
        if isinstance(t, np.ndarray):
            return np.full(t.shape, float(c))
        return t * 0 + c

    return TestFunction(f"const:{c}", f, monomial_degree=0 if c == 1 else None)


def monomial(m: int) -> TestFunction:
    if m < 0:
        raise ValueError("monomial degree must be nonnegative")

    def f(t):
        return t**m if m else t * 0 + 1

    return TestFunction(f"monomial:{m}", f, monomial_degree=m)


def kink(c=Fraction(1, 2)) -> TestFunction:
    """``|t - c|``, Lipschitz-1 with a corner at ``c``."""

    def f(t):
        return abs(t - _coerce(c, t))

    return TestFunction(f"abs:{c}", f, smooth=False)


def polynomial(coeffs: Sequence) -> TestFunction:
    coeffs = list(coeffs)
    if not coeffs:
        raise ValueError("polynomial needs at least one coefficient")

    def f(t):
        acc = t * 0 + _coerce(coeffs[-1], t)
        for a in reversed(coeffs[:-1]):
            acc = acc * t + _coerce(a, t)
        return acc

    return TestFunction("poly:" + ",".join(str(a) for a in coeffs), f)


def piecewise_linear(points: Sequence[tuple]) -> TestFunction:
    pts = sorted(points)
    if len(pts) < 2:
        raise ValueError("piecewise-linear function needs at least two points")
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("piecewise-linear knots must be distinct")
    if xs[0] > 0 or xs[-1] < 1:
        raise ValueError("piecewise-linear knots must cover [0, 1]")
    ys = [y for _, y in pts]
    fx, fy = np.array(xs, dtype=float), np.array(ys, dtype=float)

    def f(t):
        if isinstance(t, np.ndarray):
            return np.interp(t, fx, fy)
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if t <= x1:
                return y0 + (y1 - y0) * (t - x0) / (x1 - x0)
        return ys[-1]

    name = "pwl:" + ",".join(f"{x}:{y}" for x, y in pts)
    return TestFunction(name, f, smooth=False)


_ALIASES = {"1": "monomial:0", "t": "monomial:1"}


def parse_function(spec: str, exact: bool = False) -> TestFunction:
    """Build a catalog function from a spec string such as ``abs:1/2``."""
    spec = spec.strip()
    spec = _ALIASES.get(spec, spec)
    if spec.startswith("t^"):
        spec = "monomial:" + spec[2:]
    name, _, args = spec.partition(":")
    num = lambda s: parse_scalar(s, exact=exact)  # noqa: E731
    try:
        if name == "const":
            return constant(num(args) if args else 1)
        if name == "monomial":
            return monomial(int(args))
        if name == "abs":
            return kink(num(args) if args else num("1/2"))
        if name == "poly":
            return polynomial([num(a) for a in args.split(",")])
        if name == "pwl":
            points = []
            for pair in args.split(","):
                x, y = pair.split(":")
                points.append((num(x), num(y)))
            return piecewise_linear(points)
    except ValueError as exc:
        raise ValueError(f"bad function spec {spec!r}: {exc}") from exc
    raise ValueError(f"unknown function spec {spec!r}")
