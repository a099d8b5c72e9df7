from fractions import Fraction

import pytest
from hypothesis import given

from hecke_tqft.errors import OddExponent
from hecke_tqft.laurent import LaurentPoly, Q, QView, RationalFunction, analyze, parse_poly, to_q_view

from strategies import even_laurent, laurent, nonzero_points, qviews

v = LaurentPoly({1: 1})


def P(text):
    return parse_poly(text, LaurentPoly)


def test_cancellation_leaves_no_zero_terms():
    s = (v + 1) + (-v)
    assert s == LaurentPoly(1)
    assert list(s.terms()) == [(0, 1)]


def test_small_sums_and_products():
    assert Q + Q == P("2*v^-1 - 2*v")
    assert Q * Q == P("v^-2 - 2 + v^2")
    assert P("v^-2 + 1") * P("v^-2 + 1") == P("v^-4 + 2*v^-2 + 1")
    assert LaurentPoly() + Q == Q
    assert Q * 1 == Q


def test_bar():
    assert P("v^2 + 2").bar() == P("v^-2 + 2")
    assert LaurentPoly(5).bar() == LaurentPoly(5)


def test_q_view():
    assert to_q_view(P("v^-2 + 2 + v^2")) == parse_poly("q + 2 + q^-1", QView)
    assert to_q_view(LaurentPoly(1)) == QView(1)
    with pytest.raises(OddExponent):
        to_q_view(P("v^-1"))


def test_evaluate_at_one():
    assert parse_poly("q + 2 + q^-1", QView).evaluate(1) == 4
    assert parse_poly("q^3 + 2*q^2 + 4*q + 4 + 4*q^-1 + 2*q^-2 + q^-3", QView).evaluate(1) == 18


def test_canonical_printing():
    text = "q^3 + 2*q^2 + 10*q + 10 + 10*q^-1 + 2*q^-2 + q^-3"
    assert parse_poly(text, QView).to_text() == text
    assert LaurentPoly().to_text() == "0"
    assert Q.to_text() == "-v + v^-1"


def test_analyze_examples():
    a = analyze(parse_poly("q + 2 + q^-1", QView))
    assert (a.is_positive, a.is_bar_symmetric, a.is_log_concave) == (True, True, True)
    g2 = parse_poly("q^6 + 2*q^5 + 2*q^4 + 2*q^3 + 2*q^2 + 72*q - 18", QView)
    assert not analyze(g2).is_positive
    one = analyze(QView(1))
    assert one.is_positive and one.is_bar_symmetric and one.is_log_concave


def test_internal_zero_breaks_log_concavity():
    assert not analyze(parse_poly("q^2 + 1", QView)).is_log_concave
    assert analyze(parse_poly("q^2 + 2*q + 1", QView)).is_log_concave


def test_rational_function_division():
    num = P("v^2 - 1")
    den = P("v - 1")
    assert RationalFunction(num, den).to_laurent() == P("v + 1")
    assert not RationalFunction(LaurentPoly(1), P("v + 1")).is_laurent()


@given(laurent, laurent)
def test_bar_is_ring_involution(a, b):
    assert (a * b).bar() == a.bar() * b.bar()
    assert (a + b).bar() == a.bar() + b.bar()
    assert a.bar().bar() == a


@given(laurent, laurent, nonzero_points)
def test_evaluation_is_multiplicative(a, b, x):
    assert (a * b).evaluate(x) == a.evaluate(x) * b.evaluate(x)


@given(even_laurent)
def test_q_view_round_trip(a):
    assert to_q_view(a).to_v() == a


@given(qviews)
def test_text_and_json_round_trip(p):
    assert parse_poly(p.to_text(), QView) == p
    assert QView.from_json(p.to_json()) == p


@given(laurent, laurent, laurent)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == LaurentPoly()


@given(laurent)
def test_symmetric_exactly_when_palindromic(p):
    a = analyze(p)
    if p and a.is_bar_symmetric:
        lo, hi = p.low_degree(), p.degree()
        assert all(p.coeff(lo + i) == p.coeff(hi - i) for i in range(hi - lo + 1))


def test_fractional_coefficients_are_exact():
    p = LaurentPoly({0: Fraction(1, 3)}) * 3
    assert p == LaurentPoly(1)
