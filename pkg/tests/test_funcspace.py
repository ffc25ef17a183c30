import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dampwave.expr import DomainError, differentiate, parse
from dampwave.funcspace import ChebGrid, GridFn, derivative, endpoint_values, mean, sample


def test_grid_nodes():
    g = ChebGrid(17)
    x = g.nodes
    assert x[0] == 0.0 and x[-1] == 1.0
    assert np.all(np.diff(x) > 0)
    k = np.arange(17)
    assert np.allclose(x, (1 - np.cos(k * np.pi / 16)) / 2, atol=1e-15)
    assert np.allclose(x + x[::-1], 1.0, atol=0)


def test_grid_rejects_small_M():
    with pytest.raises(ValueError):
        ChebGrid(7)


def test_sample_examples():
    g = ChebGrid(8)
    assert np.array_equal(sample(parse("1"), g).values, np.ones(8))
    assert np.array_equal(sample(parse("x"), g).values, g.nodes)


def test_sample_domain_error_names_node():
    with pytest.raises(DomainError) as info:
        sample(parse("1/x"), ChebGrid(16))
    assert "node 0" in str(info.value) or "k=0" in str(info.value)


def test_mean_examples():
    assert abs(mean(sample(parse("x^2"), ChebGrid(16))) - 1 / 3) <= 1e-14
    assert abs(mean(sample(parse("sin(pi*x)"), ChebGrid(32))) - 2 / math.pi) <= 1e-12
    assert mean(sample(parse("1"), ChebGrid(32))) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("M", [8, 9, 16, 33, 64])
def test_quadrature_exact_for_polynomials(M):
    g = ChebGrid(M)
    for p in range(M):
        assert abs(mean(GridFn(g, g.nodes**p)) - 1.0 / (p + 1)) <= 1e-13


def test_derivative_examples():
    g16, g32 = ChebGrid(16), ChebGrid(32)
    x = g16.nodes
    assert np.max(np.abs(derivative(GridFn(g16, x**3)).values - 3 * x**2)) <= 1e-11
    y = g32.nodes
    d = derivative(GridFn(g32, np.exp(y))).values
    assert np.max(np.abs(d / np.exp(y) - 1)) <= 1e-11
    assert np.max(np.abs(derivative(GridFn(g32, np.full(32, 7.0))).values)) <= 1e-12


@pytest.mark.parametrize("src", ["x^4", "sin(pi*x)", "exp(x)"])
def test_derivative_consistent_with_symbolic(src):
    g = ChebGrid(32)
    e = parse(src)
    spectral = derivative(sample(e, g)).values
    symbolic = sample(differentiate(e, 1), g).values
    assert np.max(np.abs(spectral - symbolic)) <= 1e-9


def test_endpoint_values():
    g = ChebGrid(16)
    assert endpoint_values(sample(parse("x"), g)) == (0.0, 1.0)
    assert endpoint_values(sample(differentiate(parse("x^2"), 1), g)) == (0.0, 2.0)
    assert endpoint_values(GridFn(g, np.full(16, 5.0))) == (5.0, 5.0)


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=15))
def test_fundamental_theorem(coeffs):
    g = ChebGrid(16)
    f = GridFn(g, np.polynomial.polynomial.polyval(g.nodes, coeffs))
    f0, f1 = endpoint_values(f)
    assert abs(mean(derivative(f)) - (f1 - f0)) <= 1e-10


def test_gridfn_rejects_bad_values():
    g = ChebGrid(8)
    with pytest.raises(ValueError):
        GridFn(g, np.ones(7))
    with pytest.raises(ValueError):
        GridFn(g, np.array([np.nan] * 8))


def test_gridfn_interpolates():
    g = ChebGrid(32)
    f = sample(parse("exp(x)*sin(3*x)"), g)
    t = np.linspace(0, 1, 41)
    assert np.max(np.abs(f(t) - np.exp(t) * np.sin(3 * t))) <= 1e-13
