import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dampwave.expr import (Binary, Const, DomainError, ExprSyntaxError, Named, Unary, Var,
                           differentiate, evaluate, parse, reflect)
from dampwave.expr import add, div, func, mul, neg, power, sub


def test_parse_structure():
    assert parse("x^2 + 1") == Binary("+", Binary("^", Var(), Const(2.0)), Const(1.0))


@pytest.mark.parametrize("src, x, expected", [
    ("2*sin(pi*x)", 0.5, 2.0),
    ("1/(x-2)", 0.5, -2.0 / 3.0),
    ("x^2", 0.5, 0.25),
    ("-x^2", 0.5, -0.25),
    ("2^3^2", 0.0, 512.0),
    ("8/4/2", 0.0, 1.0),
    ("1 - 2 - 3", 0.0, -4.0),
    ("e^2", 0.0, math.e**2),
    ("x**3", 0.5, 0.125),
    ("sqrt(x) + log(1 + x) + cos(0)", 0.25, 0.5 + math.log(1.25) + 1.0),
])
def test_evaluate(src, x, expected):
    assert evaluate(parse(src), x) == pytest.approx(expected, rel=1e-15, abs=1e-15)


@pytest.mark.parametrize("src, offset", [
    ("x +", 3),
    ("(x + 1", 6),
    ("x + 1)", 5),
    ("2 * foo(x)", 4),
    ("sin x", 4),
    ("x ^ x", 4),
    ("e^x", 2),
    ("x $ 1", 2),
    ("", 0),
])
def test_syntax_errors_report_offset(src, offset):
    with pytest.raises(ExprSyntaxError) as info:
        parse(src)
    assert info.value.offset == offset
    assert f"offset {offset}" in str(info.value)


@pytest.mark.parametrize("src, x", [
    ("1/x", 0.0),
    ("log(x)", 0.0),
    ("sqrt(x - 1)", 0.5),
    ("(x - 1)^0.5", 0.5),
    ("x^-1", 0.0),
])
def test_domain_errors(src, x):
    with pytest.raises(DomainError) as info:
        evaluate(parse(src), x)
    assert info.value.x == x


def test_domain_error_on_arrays_names_point():
    with pytest.raises(DomainError) as info:
        evaluate(parse("1/(x - 0.5)"), np.linspace(0, 1, 5))
    assert info.value.x == 0.5


@pytest.mark.parametrize("src, order, x, expected", [
    ("x^2", 1, 0.5, 1.0),
    ("sin(pi*x)", 1, 0.0, math.pi),
    ("x^2", 3, 0.3, 0.0),
    ("exp(2*x)", 2, 0.0, 4.0),
    ("log(1 + x)", 1, 1.0, 0.5),
    ("sqrt(1 + x)", 1, 0.0, 0.5),
    ("1/(1 + x)", 1, 0.0, -1.0),
    ("cos(x)^2", 1, 0.0, 0.0),
])
def test_differentiate(src, order, x, expected):
    assert evaluate(differentiate(parse(src), order), x) == pytest.approx(expected, abs=1e-14)


def test_third_derivative_of_quadratic_is_literal_zero():
    assert differentiate(parse("x^2"), 3) == Const(0.0)


def test_differentiate_rejects_bad_order():
    with pytest.raises(ValueError):
        differentiate(parse("x"), 0)


def test_reflect():
    e = reflect(parse("x^2 + sin(pi*x)"))
    assert evaluate(e, 0.25) == pytest.approx(0.75**2 + math.sin(0.75 * math.pi), rel=1e-15)


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=8),
       st.lists(st.floats(0, 1), min_size=20, max_size=20))
def test_polynomial_derivative_vanishes_past_degree(coeffs, xs):
    src = " + ".join(f"{c}*x^{k}" for k, c in enumerate(coeffs))
    d = differentiate(parse(src), len(coeffs))
    assert all(evaluate(d, x) == 0.0 for x in xs)


@pytest.mark.parametrize("src", ["sin(pi*x)", "exp(x)", "x^3 - x"])
def test_derivative_matches_central_differences(src):
    e = parse(src)
    de = differentiate(e, 1)
    h = 1e-5
    for x in np.linspace(0, 1, 50):
        fd = (evaluate(e, x + h) - evaluate(e, x - h)) / (2 * h)
        exact = evaluate(de, x)
        assert abs(fd - exact) <= 1e-7 * abs(exact)


_leaves = st.one_of(
    st.just(Var()),
    st.sampled_from([Named("pi"), Named("e")]),
    st.floats(-10, 10, allow_nan=False).map(Const),
)


def _extend(children):
    return st.one_of(
        st.tuples(children, children).map(lambda t: add(*t)),
        st.tuples(children, children).map(lambda t: sub(*t)),
        st.tuples(children, children).map(lambda t: mul(*t)),
        st.tuples(children, children).map(lambda t: div(*t)),
        children.map(neg),
        st.tuples(children, st.sampled_from(["sin", "cos"])).map(lambda t: func(t[1], t[0])),
        st.tuples(children, st.integers(0, 3)).map(lambda t: power(t[0], float(t[1]))),
    )


exprs = st.recursive(_leaves, _extend, max_leaves=12)


@given(exprs, st.lists(st.floats(0, 1), min_size=20, max_size=20))
def test_print_parse_roundtrip(e, xs):
    again = parse(str(e))
    for x in xs:
        try:
            v = evaluate(e, x)
        except DomainError:
            with pytest.raises(DomainError):
                evaluate(again, x)
            continue
        assert evaluate(again, x) == pytest.approx(v, rel=1e-15, abs=1e-15)


def test_unary_function_node_kinds():
    e = parse("exp(sin(x))")
    assert isinstance(e, Unary) and e.op == "exp"
    assert isinstance(e.arg, Unary) and e.arg.op == "sin"
