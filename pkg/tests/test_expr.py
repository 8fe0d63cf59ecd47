from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loxoforge.expr import (EvalError, ExprSyntaxError, UnknownIdentifier, derivative, evaluate,
                            parse, parse_angle, to_source)


@pytest.mark.parametrize(
    "src, u, expected",
    [
        ("sin(u)", math.pi / 2, 1.0),
        ("e^(-u)", 0.0, 1.0),
        ("2*arccot(e^(-u))", 0.0, math.pi / 2),
        ("u^2+1", 3.0, 10.0),
        ("sqrt(u^2+1)", 1.0, math.sqrt(2.0)),
        ("2+3*4^2", 0.0, 50.0),
        ("-u^2", 3.0, -9.0),
        ("2^3^2", 0.0, 512.0),
        ("2^-1", 0.0, 0.5),
        ("sech(0) + tanh(0) + cosh(0)", 0.0, 2.0),
        ("abs(-u) - ln(e)", 4.0, 3.0),
        ("1.5e2 + .5", 0.0, 150.5),
    ],
)
def test_examples(src, u, expected):
    assert evaluate(parse(src), u) == pytest.approx(expected, rel=1e-15, abs=1e-15)


def test_div_by_zero_reports_operator_position():
    with pytest.raises(EvalError) as exc:
        evaluate(parse("1/u"), 0.0)
    assert exc.value.kind == "DivByZero"
    assert exc.value.position == 1


@pytest.mark.parametrize("src, kind", [("ln(u)", "LogDomain"), ("sqrt(u-1)", "SqrtDomain"),
                                        ("exp(u)^100", "NonFinite")])
def test_domain_errors(src, kind):
    with pytest.raises(EvalError) as exc:
        evaluate(parse(src), 0.0 if kind != "NonFinite" else 100.0)
    assert exc.value.kind == kind


def test_syntax_error_carries_byte_offset_and_expected():
    with pytest.raises(ExprSyntaxError) as exc:
        parse("1 + * 2")
    assert exc.value.position == 4
    assert "(" in exc.value.expected
    # offsets count bytes, not characters
    with pytest.raises(ExprSyntaxError) as exc:
        parse("π + ?")
    assert exc.value.position == 0
    with pytest.raises(ExprSyntaxError) as exc:
        parse("(u + 1")
    assert exc.value.expected == (")",)


def test_unknown_identifiers():
    with pytest.raises(UnknownIdentifier) as exc:
        parse("2 * foo")
    assert exc.value.position == 4
    with pytest.raises(UnknownIdentifier):
        parse("log(u)")
    with pytest.raises(ExprSyntaxError):
        parse("")


def test_arccot_is_continuous_through_zero():
    u = np.linspace(-3, 3, 61)
    vals = evaluate(parse("arccot(u)"), u)
    assert np.all(np.diff(vals) < 0)
    assert evaluate(parse("arccot(0)")) == pytest.approx(math.pi / 2)


def test_funnel_profile_matches_high_precision():
    expr = parse("2*arccot(e^(-u))")
    for u in np.linspace(-3, 3, 20):
        ref = 2 * mpmath.acot(mpmath.e ** (-mpmath.mpf(u)))
        assert abs(evaluate(expr, u) - float(ref)) <= 1e-12


@pytest.mark.parametrize("src, u, expected, tol", [("sin(u)", 0.0, 1.0, 1e-9), ("u^3", 2.0, 12.0, 1e-6),
                                                   ("e^(-u)", 0.0, -1.0, 1e-9)])
def test_derivative(src, u, expected, tol):
    assert abs(derivative(parse(src), u) - expected) <= tol


def test_vectorized_evaluation_matches_scalar():
    expr = parse("sin(u)*exp(-u/3) + u^2")
    u = np.linspace(-2, 2, 9)
    vec = evaluate(expr, u)
    assert np.array_equal(vec, [evaluate(expr, x) for x in u])


def test_parse_angle():
    assert parse_angle("pi/6") == pytest.approx(math.pi / 6)
    assert parse_angle("0.5") == 0.5
    assert parse_angle(1.25) == 1.25


# -- fuzz ----------------------------------------------------------------------------
_leaf = st.one_of(
    st.just("u"),
    st.just("pi"),
    st.just("e"),
    st.floats(0.1, 9.0, allow_nan=False).map(lambda x: f"{x:.3f}"),
)
_safe = ("sin", "cos", "tanh", "arccot", "sech", "abs")


def _combine(children):
    return st.one_of(
        st.tuples(children, st.sampled_from("+-*"), children).map(lambda t: f"({t[0]} {t[1]} {t[2]})"),
        st.tuples(children, children).map(lambda t: f"{t[0]} / (1 + abs({t[1]}))"),
        st.tuples(st.sampled_from(_safe), children).map(lambda t: f"{t[0]}({t[1]})"),
        children.map(lambda c: f"-{c}"),
        children.map(lambda c: f"abs({c})^1.5"),
    )


expressions = st.recursive(_leaf, _combine, max_leaves=12)


@settings(max_examples=200, deadline=None)
@given(expressions, st.lists(st.floats(-2.0, 2.0), min_size=10, max_size=10))
def test_round_trip_fuzz(src, us):
    first = parse(src)
    again = parse(to_source(first.ast))
    assert again.ast == first.ast
    u = np.array(us)
    a, b = evaluate(first, u), evaluate(again, u)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)
