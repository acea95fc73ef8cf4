import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from jacobigeo import expr as E
from jacobigeo.expr import (EvaluationSingularity, ExprSyntaxError, UnknownIdentifier, diff,
                            evaluate, expand, parse, simplify, to_string)

from strategies import NAMES, SYMS, expr_pairs, points

XYZ = NAMES


def P(text):
    return parse(text, XYZ)


# -- construction and normal form -------------------------------------------------------

def test_interning_gives_identity():
    assert P("x*y + 1") is P("1 + y*x")
    assert E.const(Fraction(1, 2)) is E.const(Fraction(2, 4))


def test_constants_stay_exact():
    e = P("1/3 + 1/6")
    assert e.is_const(Fraction(1, 2))


def test_like_terms_collect():
    assert P("x + x - 2*x").is_const(0)
    assert P("x*x*x") is P("x^3")


def test_exp_products_merge():
    assert P("exp(x)*exp(-x)").is_const(1)
    assert P("exp(x)^2*exp(y)") is P("exp(2*x + y)")
    assert P("1/exp(-x)") is P("exp(x)")


def test_zero_annihilates():
    assert P("0*sin(x)").is_const(0)


def test_expand_distributes():
    assert expand(P("(x+y)^2 - x^2 - 2*x*y - y^2")).is_const(0)


# -- parsing and printing ---------------------------------------------------------------

@pytest.mark.parametrize("text", ["x", "-y", "x*y + 1", "exp(-x)", "sin(x)^2 + cos(x)^2",
                                  "1/2*x - 3/4", "ln(1 + x^2)", "x/(1 + y^2)", "(x - y)^(-2)"])
def test_print_parse_roundtrip(text):
    e = P(text)
    assert P(to_string(e, XYZ)) is e


@given(expr_pairs)
def test_print_parse_roundtrip_random(pair):
    e, _ = pair
    # raw constructors keep structure; parsing always returns the normal form
    assert P(to_string(e, XYZ)) is simplify(e)


@pytest.mark.parametrize("text, err", [
    ("x +", ExprSyntaxError), ("q + 1", UnknownIdentifier), ("x^y", ExprSyntaxError),
    ("1/0", ExprSyntaxError), ("", ExprSyntaxError), ("sin x", ExprSyntaxError),
    ("ln(-2)", ExprSyntaxError), ("x)(", ExprSyntaxError),
])
def test_parse_errors(text, err):
    with pytest.raises(err):
        P(text)


def test_syntax_error_reports_position():
    with pytest.raises(ExprSyntaxError) as info:
        P("x + * y")
    assert "4" in str(info.value) or "^" in str(info.value)


def test_unknown_identifier_is_named():
    with pytest.raises(UnknownIdentifier, match="w"):
        P("x + w")


# -- differentiation --------------------------------------------------------------------

def test_diff_frozen_values():
    # frozen with sympy: d/dx [x^3 sin(y)] at (0.5, 0.3, 0) and d/dy [exp(-x) y^2] at (0.2, 0.7, 0)
    assert evaluate(diff(P("x^3*sin(y)"), 0), [0.5, 0.3, 0]) == pytest.approx(
        0.22164015499600465, abs=1e-15)
    assert evaluate(diff(P("exp(-x)*y^2"), 1), [0.2, 0.7, 0]) == pytest.approx(
        1.1462230543091745, abs=1e-15)


def test_diff_of_quotient_and_log():
    d = diff(P("ln(1 + x^2)"), 0)
    assert simplify(d - P("2*x/(1 + x^2)")).is_const(0)


def test_diff_of_constant_in_other_variable_is_zero():
    assert diff(P("exp(y)*z"), 0).is_const(0)


@given(expr_pairs, points, st.integers(0, 2))
def test_diff_matches_sympy(pair, pt, i):
    e, s = pair
    ours = evaluate(diff(e, i), pt)
    theirs = float(sp.diff(s, SYMS[i]).subs(dict(zip(SYMS, pt))))
    assert ours == pytest.approx(theirs, rel=1e-9, abs=1e-9)


@given(expr_pairs, expr_pairs, points)
def test_diff_is_a_derivation(a, b, pt):
    (ea, _), (eb, _) = a, b
    lhs = evaluate(diff(ea * eb, 0), pt)
    rhs = evaluate(diff(ea, 0) * eb + ea * diff(eb, 0), pt)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


@given(expr_pairs, points)
def test_mixed_partials_commute(pair, pt):
    e, _ = pair
    assert evaluate(diff(diff(e, 0), 1), pt) == pytest.approx(
        evaluate(diff(diff(e, 1), 0), pt), rel=1e-9, abs=1e-9)


@given(expr_pairs, points)
def test_diff_agrees_with_finite_differences(pair, pt):
    e, _ = pair
    h = 1e-4
    for i in range(3):
        up, dn = list(pt), list(pt)
        up[i] += h
        dn[i] -= h
        fd = (evaluate(e, up) - evaluate(e, dn)) / (2 * h)
        exact = evaluate(diff(e, i), pt)
        assert abs(fd - exact) <= 1e-5 * max(1.0, abs(exact))


def test_record_derivatives_logs_top_level_requests():
    e = P("x*y")
    with E.record_derivatives() as rec:
        diff(e, 0)
        diff(e, 1)
        diff(e, 0)
    assert len(rec.calls) == 3
    assert len(rec.unique()) == 2


# -- evaluation -------------------------------------------------------------------------

@given(expr_pairs, points)
def test_evaluate_matches_sympy(pair, pt):
    e, s = pair
    theirs = float(s.subs(dict(zip(SYMS, pt))))
    assert evaluate(e, pt) == pytest.approx(theirs, rel=1e-12, abs=1e-12)


def test_singularities_are_reported():
    with pytest.raises(EvaluationSingularity, match="division"):
        evaluate(P("1/x"), [0.0, 1, 1])
    with pytest.raises(EvaluationSingularity, match="logarithm"):
        evaluate(P("ln(x)"), [-1.0, 1, 1])
    with pytest.raises(EvaluationSingularity):
        E.evaluate_many([P("1/(x - y)")], np.array([[0.5, 0.5, 0.0]]))


def test_evaluate_many_shape_and_values():
    pts = np.array([[0.1, 0.2, 0.3], [-0.4, 0.5, 0.6]])
    vals = E.evaluate_many([P("x + y"), P("exp(z)")], pts)
    assert vals.shape == (2, 2)
    assert vals[1, 1] == pytest.approx(math.exp(0.6))


def test_free_coords():
    assert E.free_coords(P("x*z + 1")) == [0, 2]
