from fractions import Fraction as F

import numpy as np
import pytest

from pqstancu.functions import constant, kink, monomial, parse_function, piecewise_linear, polynomial


@pytest.mark.parametrize(
    "spec,name",
    [
        ("1", "monomial:0"),
        ("t", "monomial:1"),
        ("t^2", "monomial:2"),
        ("monomial:3", "monomial:3"),
        ("abs:1/2", "abs:1/2"),
        ("const:2", "const:2"),
        ("poly:1,0,-2", "poly:1,0,-2"),
    ],
)
def test_parse_names(spec, name):
    assert parse_function(spec, exact=True).name == name


@pytest.mark.parametrize("spec", ["sin", "monomial:x", "monomial:-1", "abs:foo", "pwl:0:0", "pwl:0.2:0,1:1", "poly:", ""])
def test_parse_rejects(spec):
    with pytest.raises(ValueError):
        parse_function(spec)


def test_exact_values_stay_rational():
    assert kink(F(1, 2))(F(1, 8)) == F(3, 8)
    assert polynomial([F(1), F(0), F(-2)])(F(1, 2)) == F(1, 2)
    assert monomial(0)(F(1, 3)) == 1
    assert isinstance(monomial(2)(F(1, 3)), F)
    assert constant(F(3))(F(1, 7)) == 3


def test_arrays_are_float():
    xs = np.linspace(0, 1, 5)
    for f in (kink(F(1, 2)), polynomial([F(1), F(2)]), monomial(0), constant(F(1, 3))):
        out = f(xs)
        assert out.dtype == np.float64 and out.shape == xs.shape


def test_piecewise_linear():
    f = piecewise_linear([(F(0), F(0)), (F(1, 2), F(1)), (F(1), F(0))])
    assert f(F(1, 4)) == F(1, 2)
    assert f(np.array([0.25, 0.75])) == pytest.approx([0.5, 0.5])
    assert not f.smooth


def test_flags():
    assert monomial(2).monomial_degree == 2
    assert constant(1).monomial_degree == 0
    assert not kink().smooth
