import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quarterplane.expr import Expression, ExpressionError, Jet, from_expressions, parse


def test_evaluation():
    e = parse("2*x^2 - exp(-x) + sin(pi*x)/3")
    x = np.array([0.0, 0.5, 2.0])
    want = 2 * x ** 2 - np.exp(-x) + np.sin(math.pi * x) / 3
    assert np.allclose(e(x), want, rtol=1e-15, atol=1e-15)
    assert parse("x**3")(2.0) == 8.0
    assert parse("e")(1.0) == math.e


def test_two_variables():
    f = Expression("x*t + cos(t)", ("x", "t"))
    assert f(2.0, 3.0) == pytest.approx(6 + math.cos(3), abs=1e-15)
    assert f(x=np.ones(3), t=0.0).shape == (3,)


def test_exact_derivatives():
    e = parse("exp(-x)*sin(2*x)")
    # d/dx at 0: -sin(0) + 2 cos(0) = 2
    assert e.derivative("x", 1, 0.0) == pytest.approx(2.0, abs=1e-15)
    assert parse("exp(-x)").derivative("x", 3, 0.0) == -1.0
    assert parse("x^5").derivative("x", 3, 2.0) == 60 * 4
    assert parse("1/(1+x)").derivative("x", 2, 0.0) == pytest.approx(2.0, abs=1e-14)
    assert parse("(1+x)^0.5").derivative("x", 1, 0.0) == pytest.approx(0.5, abs=1e-15)
    assert parse("7").derivative("x", 2, 1.0) == 0


def test_constancy():
    assert parse("2*pi").is_constant
    assert parse("0*1").is_zero()
    assert not parse("x-x").is_constant


@pytest.mark.parametrize("text, column", [
    ("x +* 2", None),
    ("foo(x)", 0),
    ("x^x", 2),
    ("y + 1", 0),
    ("exp(x, x)", 0),
    ("x < 1", 0),
    ("", 0),
    ("'a'", 0),
])
def test_errors_point_at_the_problem(text, column):
    with pytest.raises(ExpressionError) as info:
        parse(text)
    if column is not None:
        assert info.value.column == column
        assert "^" in str(info.value)


def test_from_expressions_fields():
    d = from_expressions("exp(-x)", "1", "0")
    assert d.g0_constant == 1.0 and d.f is None and d.u0 is not None
    assert d.u0_derivatives[2](np.array([0.0]))[0] == -1.0
    z = from_expressions("0", "0", "0")
    assert z.u0 is None and z.g0 is None and z.f is None
    assert d.meta == {"u0": "exp(-x)", "g0": "1", "f": "0"}


def test_jet_algebra():
    x = Jet.variable(0.3, 4)
    y = (x * x).exp() / (1 + x) - x.sin() * x.cos()
    h = 1e-3
    f = lambda s: np.exp(s * s) / (1 + s) - np.sin(s) * np.cos(s)
    fd2 = (f(0.3 + h) - 2 * f(0.3) + f(0.3 - h)) / h ** 2
    assert abs(y.derivative(2) - fd2) < 1e-5
    assert np.isclose(y.derivative(0), f(0.3))


@settings(max_examples=40, deadline=None)
@given(a=st.floats(-2, 2), b=st.floats(-2, 2), x=st.floats(-1, 1))
def test_derivative_matches_closed_form(a, b, x):
    e = parse(f"exp({a}*x)*cos({b}*x)")
    # d/dx e^{ax} cos(bx) = e^{ax} (a cos bx - b sin bx)
    want = math.exp(a * x) * (a * math.cos(b * x) - b * math.sin(b * x))
    assert abs(e.derivative("x", 1, x) - want) <= 1e-12 * (1 + abs(want))


@settings(max_examples=40, deadline=None)
@given(p=st.integers(0, 8), x=st.floats(0.1, 3))
def test_power_derivatives(p, x):
    e = parse(f"x^{p}")
    for k in range(4):
        want = math.perm(p, k) * x ** (p - k) if k <= p else 0.0
        assert abs(e.derivative("x", k, x) - want) <= 1e-12 * (1 + abs(want))
