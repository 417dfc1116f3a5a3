import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from darboux_osc.funcs import (SampledField, TimeGrid, central_derivative,
                               cumulative_integral, make_grid, sample)


def test_grid_samples_end_exactly():
    g = make_grid(0.0, 0.4, 4001)
    assert g.samples[0] == 0.0
    assert g.samples[-1] == 0.4
    assert g.step == pytest.approx(1e-4)
    assert g.index_of(0.2) == 2000


@pytest.mark.parametrize("t0,t1,n", [(1.0, 1.0, 10), (2.0, 1.0, 10), (0.0, 1.0, 2)])
def test_grid_rejects_bad_windows(t0, t1, n):
    with pytest.raises(ValueError):
        TimeGrid(t0, t1, n)


def test_off_grid_lookup_raises():
    f = sample(np.sin, make_grid(0, 1, 11))
    assert f(0.3) == pytest.approx(math.sin(0.3))
    with pytest.raises(ValueError):
        f(0.35)


@pytest.mark.parametrize("n", [2001, 2000])
def test_integral_of_sin7t(n):
    g = make_grid(0.0, 2.0, n)
    out = cumulative_integral(sample(lambda t: np.sin(7 * t), g))
    exact = (1 - np.cos(7 * g.samples)) / 7
    assert np.max(np.abs(out.values - exact)) < 1e-10


def test_integral_starts_at_zero():
    g = make_grid(1.0, 3.0, 9)
    assert cumulative_integral(sample(np.exp, g)).values[0] == 0


def test_seed_integral_identity():
    # int_0^t 2 w tan(wt) cos^2(wt) = sin^2(wt)
    w = 3.5
    g = make_grid(0.0, 0.4, 4001)
    f = sample(lambda t: 2 * w * np.tan(w * t) * np.cos(w * t) ** 2, g)
    err = cumulative_integral(f).values - np.sin(w * g.samples) ** 2
    assert np.max(np.abs(err)) < 1e-9


def test_integral_fourth_order():
    errs = []
    for n in (21, 41, 81):
        g = make_grid(0.0, 1.0, n)
        out = cumulative_integral(sample(np.exp, g))
        errs.append(np.max(np.abs(out.values - (np.exp(g.samples) - 1))))
    assert errs[0] / errs[1] > 14
    assert errs[1] / errs[2] > 14


def test_integral_rejects_nan():
    g = make_grid(0.0, 1.0, 5)
    with pytest.raises(ValueError):
        cumulative_integral(SampledField(g, [0, 1, np.nan, 1, 0]))


def _tan_error(n, order):
    g = make_grid(0.0, 0.4, n)
    d = central_derivative(sample(lambda t: np.tan(3.5 * t), g), order)
    return np.max(np.abs(d.values - 3.5 / np.cos(3.5 * g.samples) ** 2))


def test_derivative_of_tan_fourth_order():
    assert _tan_error(4001, 4) < 1e-5


def test_derivative_of_tan_second_order_rate():
    # the h**2 truncation term near t = 0.4 puts the default stencil near 5e-4
    e1, e2 = _tan_error(4001, 2), _tan_error(8001, 2)
    assert e1 < 2e-3
    assert 3.5 < e1 / e2 < 4.5


@pytest.mark.parametrize("order", [2, 4])
def test_derivative_exact_on_quadratics(order):
    g = make_grid(-1.0, 2.0, 31)
    d = central_derivative(sample(lambda t: t ** 2 - 3 * t + 1, g), order)
    assert np.max(np.abs(d.values - (2 * g.samples - 3))) < 1e-12


def test_derivative_of_constant_is_zero():
    d = central_derivative(sample(lambda t: 0 * t + 2.5, make_grid(0, 1, 11)))
    assert np.all(d.values == 0)


def test_derivative_rejects_bad_order():
    with pytest.raises(ValueError):
        central_derivative(sample(np.sin, make_grid(0, 1, 11)), 3)


def test_field_arithmetic():
    g = make_grid(0, 1, 5)
    a = SampledField(g, np.arange(1, 6))
    b = 2 * a - 1 + a / a
    assert np.allclose(b.values, 2 * np.arange(1, 6))
    assert np.allclose((1 / a).values, 1 / np.arange(1, 6))
    assert np.allclose((-a).values, -np.arange(1, 6))


def test_fields_on_different_grids_do_not_mix():
    a = sample(np.sin, make_grid(0, 1, 5))
    b = sample(np.sin, make_grid(0, 2, 5))
    with pytest.raises(ValueError):
        a + b


def test_values_are_read_only():
    a = sample(np.sin, make_grid(0, 1, 5))
    with pytest.raises(ValueError):
        a.values[0] = 1


coef = st.floats(-5, 5, allow_nan=False)


@settings(max_examples=40, deadline=None)
@given(a=coef, b=coef, n=st.integers(5, 200))
def test_integral_is_linear(a, b, n):
    g = make_grid(0.0, 1.0, n)
    f1, f2 = sample(np.cos, g), sample(lambda t: t ** 3, g)
    lhs = cumulative_integral(a * f1 + b * f2).values
    rhs = a * cumulative_integral(f1).values + b * cumulative_integral(f2).values
    assert np.allclose(lhs, rhs, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(p=st.integers(0, 3), n=st.integers(3, 60))
def test_integral_exact_for_low_degree(p, n):
    g = make_grid(-1.0, 2.0, n)
    out = cumulative_integral(sample(lambda t: t ** p, g)).values
    exact = (g.samples ** (p + 1) - (-1.0) ** (p + 1)) / (p + 1)
    # every node is exact for quadratics; only composite Simpson nodes for cubics
    nodes = slice(None) if p < 3 else slice(0, None, 2)
    assert np.max(np.abs(out[nodes] - exact[nodes])) < 1e-11


@settings(max_examples=30, deadline=None)
@given(w=st.floats(0.5, 3.0))
def test_derivative_undoes_integral(w):
    g = make_grid(0.0, 1.0, 2001)
    f = sample(lambda t: np.cos(w * t), g)
    back = central_derivative(cumulative_integral(f))
    assert np.max(np.abs(back.values - f.values)) < 1e-5
