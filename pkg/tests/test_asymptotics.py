import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import binom

from dampwave import Problem
from dampwave.asymptotics import (TruncatedSeries, asymptotic_coeffs, closed_form_c012, guess,
                                  invert_eigenvalue_relation, phi_recurrence, series_mul,
                                  series_recip)
from dampwave.expr import parse
from dampwave.funcspace import ChebGrid, mean, sample

PI = math.pi


def test_phi_examples_linear_damping():
    g = ChebGrid(32)
    phi = phi_recurrence(parse("x"), parse("0"), 4, g)
    x = g.nodes
    assert np.allclose(phi.phi_plus[1].values, -(1 + x**2) / 2, atol=1e-14)
    assert phi.phi_plus[1].values[-1] == pytest.approx(-1.0, abs=1e-14)
    assert np.allclose(phi.phi_plus[2].values, x + x**3 / 2, atol=1e-14)
    assert phi.phi_plus[2].values[-1] == pytest.approx(1.5, abs=1e-14)


@pytest.mark.parametrize("alpha", [0.3, 1.0, 2.5])
def test_phi_examples_constant_damping(alpha):
    phi = phi_recurrence(parse(repr(alpha)), parse("0"), 3)
    for table in (phi.phi_plus, phi.phi_minus):
        assert np.allclose(table[1].values, -alpha**2 / 2, atol=1e-14)
        assert np.allclose(table[2].values, alpha**3 / 2, atol=1e-14)


@pytest.mark.parametrize("a, b", [("x", "0"), ("x^2", "x"), ("1 + sin(pi*x)/2", "cos(x)"),
                                  ("exp(x)", "1")])
def test_phi_table_invariants(a, b):
    g = ChebGrid(64)
    ae, be = parse(a), parse(b)
    phi = phi_recurrence(ae, be, 4, g)
    av, bv = sample(ae, g).values, sample(be, g).values
    assert np.array_equal(phi.phi_plus[0].values, av)
    assert np.array_equal(phi.phi_minus[0].values, av)
    assert np.max(np.abs(phi.phi_plus[1].values + phi.phi_minus[1].values + av**2 + bv)) <= 1e-10
    assert np.all(np.isfinite(phi.d))
    assert phi.d[0] == pytest.approx(2 * mean(sample(ae, g)), abs=1e-14)
    assert abs(phi.d[1] + mean(sample(ae, g) * sample(ae, g) + sample(be, g))) <= 1e-12


def test_phi_from_samples_agrees_with_expression_input():
    g = ChebGrid(48)
    a, b = parse("1 + sin(pi*x)/2"), parse("x")
    exact = phi_recurrence(a, b, 3, g)
    sampled = phi_recurrence(sample(a, g), sample(b, g), 3)
    assert np.max(np.abs(exact.d - sampled.d)) <= 1e-8


def test_series_examples():
    r = series_recip(TruncatedSeries.of([1, 1], 5))
    assert np.allclose(r.coeffs, [1, -1, 1, -1, 1, -1])
    p = series_mul(TruncatedSeries.of([1, 1], 3), TruncatedSeries.of([1, -1], 3))
    assert np.allclose(p.coeffs, [1, 0, -1, 0])
    with pytest.raises(ZeroDivisionError):
        series_recip(TruncatedSeries.of([0, 1], 3))


def test_series_rejects_non_finite():
    with pytest.raises(ValueError):
        TruncatedSeries(np.array([1.0, np.inf]))


_coef = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)


@given(st.lists(_coef, min_size=1, max_size=10).filter(lambda c: abs(c[0]) > 0.1))
def test_reciprocal_property(c):
    p = TruncatedSeries(np.array(c))
    one = series_mul(p, series_recip(p)).coeffs
    expected = np.zeros(len(c), complex)
    expected[0] = 1
    scale = max(1.0, max(abs(z) for z in c) / abs(c[0])) ** len(c)
    assert np.max(np.abs(one - expected)) <= 1e-12 * scale
    assert series_recip(p).order == p.order


def test_inversion_linear_damping():
    c = asymptotic_coeffs(Problem.from_text("x"), 3).c
    assert c[0] == pytest.approx(-0.5, abs=1e-14)
    assert c[1] == pytest.approx(-1j / (6 * PI), abs=1e-14)
    # exact value of the analytic expression 1/(24 pi^2)
    assert c[2] == pytest.approx(1 / (24 * PI**2), abs=1e-14)


def _exact_sqrt_expansion(m, shift):
    """Coefficients of shift + i sqrt(pi^2 n^2 - 1) in powers of 1/n."""
    c = np.zeros(m, complex)
    c[0] = shift
    for k in range(1, (m + 1) // 2 + 1):
        j = 2 * k - 1
        if j < m:
            c[j] = 1j * binom(0.5, k) * (-1) ** k * PI ** (1 - 2 * k)
    return c


@pytest.mark.parametrize("a, b, shift", [("1", "0", -1.0), ("0", "1", 0.0)])
def test_inversion_against_exact_expansion(a, b, shift):
    m = 7
    c = asymptotic_coeffs(Problem.from_text(a, b), m).c
    assert np.max(np.abs(c - _exact_sqrt_expansion(m, shift))) <= 1e-12


def test_inversion_undamped_is_zero():
    c = asymptotic_coeffs(Problem.from_text("0"), 5).c
    assert np.all(c == 0)


def test_inversion_rejects_excess_order():
    phi = phi_recurrence(parse("x"), parse("0"), 3)
    with pytest.raises(ValueError):
        invert_eigenvalue_relation(phi, 4)


def test_closed_form_examples():
    c0, c1, c2 = closed_form_c012(parse("x"), parse("0"))
    assert (c0, c1) == (pytest.approx(-0.5, abs=1e-15), pytest.approx(-1j / (6 * PI), abs=1e-15))
    assert c1.imag == pytest.approx(-0.053051648, abs=1e-9)
    assert c2 == pytest.approx(1 / (24 * PI**2), abs=1e-15)
    assert closed_form_c012(parse("x^2"), parse("0"))[2] == pytest.approx(
        (1 / 7 - 1 / 15 + 1) / (2 * PI**2), abs=1e-14)
    assert closed_form_c012(parse("x^2"), parse("0"))[2] == pytest.approx(0.054521, abs=1e-6)
    c = closed_form_c012(parse("0"), parse("1"))
    assert c[0] == 0 and c[2] == 0
    assert c[1] == pytest.approx(1 / (2j * PI), abs=1e-15)


FAMILY_A = ["x", "x^2", "1 + sin(pi*x)/2", "0.7"]


@pytest.mark.parametrize("a", FAMILY_A)
@pytest.mark.parametrize("b", ["0", "x"])
def test_inversion_matches_closed_form(a, b):
    p = Problem.from_text(a, b)
    c = asymptotic_coeffs(p, 4).c
    closed = closed_form_c012(p.a, p.b, p.grid)
    for j in range(3):
        assert abs(c[j] - closed[j]) <= 1e-10
    assert abs(c[0].imag) <= 1e-12 and abs(c[1].real) <= 1e-12 and abs(c[2].imag) <= 1e-12


@given(st.lists(st.floats(-2, 2), min_size=1, max_size=5),
       st.lists(st.floats(-2, 2), min_size=1, max_size=4))
def test_realness_pattern_polynomial_profiles(ca, cb):
    a = " + ".join(f"({c!r})*x^{k}" for k, c in enumerate(ca))
    b = " + ".join(f"({c!r})*x^{k}" for k, c in enumerate(cb))
    c = asymptotic_coeffs(Problem.from_text(a, b, grid_M=32), 3).c
    assert abs(c[0].imag) <= 1e-12 and abs(c[1].real) <= 1e-12 and abs(c[2].imag) <= 1e-12


def test_guess_examples():
    c0 = asymptotic_coeffs(Problem.from_text("0"))
    assert guess(c0, 3) == pytest.approx(3j * PI, abs=1e-15)
    c1 = asymptotic_coeffs(Problem.from_text("1"), 2)
    g = guess(c1, 1)
    assert g == pytest.approx(-1 + 2.98243771j, abs=1e-8)
    assert abs(g - (-1 + 1j * math.sqrt(PI**2 - 1))) < 5e-3
    cx = asymptotic_coeffs(Problem.from_text("x"))
    assert guess(cx, -2) == guess(cx, 2).conjugate()
    with pytest.raises(ValueError):
        guess(cx, 0)


def test_residual_order(spectrum):
    """|lam_n - guess_3(n)| n^3 is bounded over n = 8..64."""
    spec = spectrum("x", n_max=64)
    coeffs = asymptotic_coeffs(Problem.from_text("x"), 3)
    n = np.arange(8, 65)
    scaled = np.array([abs(spec[k] - guess(coeffs, k)) * k**3 for k in n])
    bound = scaled.max()
    assert bound < 1.0
    # running maximum never grows by more than 3x past the early range
    assert np.max(scaled[n >= 16]) <= 3 * np.max(scaled[n < 16])
