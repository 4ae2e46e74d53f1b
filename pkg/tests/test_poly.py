from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glsm_lab.poly import ZERO_POLYNOMIAL, Polynomial, PolynomialSyntaxError, parse, weighted_degree

VARS = ("x1", "x2", "x3", "x4", "x5", "p")
W = "p*(x1^5+x2^5+x3^5+x4^5+x5^5)"


def test_parse_expands_product():
    P = parse("p*(x1^5+x2^5)", ("x1", "x2", "p"))
    assert P.terms == {(5, 0, 1): 1, (0, 5, 1): 1}


@pytest.mark.parametrize("text", ["0", "x1^5 - x1^5", "  0 * x1 "])
def test_parse_zero(text):
    assert parse(text, VARS).is_zero()


def test_parse_rational_and_power_forms():
    P = parse("3/5*x1**2*p - x2 + 2", VARS)
    assert P.terms[(2, 0, 0, 0, 0, 1)] == Fraction(3, 5)
    assert P.terms[(0, 1, 0, 0, 0, 0)] == -1
    assert P.terms[(0,) * 6] == 2


@pytest.mark.parametrize("text", ["y^2", "x1^", "x1 +", "(x1", "x1^-2", "x1 $ x2", "1/0"])
def test_parse_errors(text):
    with pytest.raises(PolynomialSyntaxError):
        parse(text, VARS)


def test_parse_error_reports_column():
    with pytest.raises(PolynomialSyntaxError) as exc:
        parse("x1 + y", VARS)
    assert exc.value.column == 6


def test_partial_derivatives():
    P = parse(W, VARS)
    F = parse("x1^5+x2^5+x3^5+x4^5+x5^5", VARS)
    assert P.partial("p") == F
    assert P.partial(0) == parse("p", VARS) * F.partial(0)
    assert parse("7", VARS).partial("x1").is_zero()


def test_weighted_degrees():
    P = parse(W, VARS)
    assert weighted_degree(P, (0, 0, 0, 0, 0, 1)) == 1
    assert weighted_degree(P, (1, 1, 1, 1, 1, 0)) == 5
    assert weighted_degree(P, (1, 1, 1, 1, 1, -5)) == 0
    assert weighted_degree(parse("x1 + x1^2", VARS), (1,) * 6) is None
    assert weighted_degree(parse("0", VARS), (1,) * 6) is ZERO_POLYNOMIAL


def test_restrict():
    P = parse(W, VARS)
    assert P.restrict({0, 5}) == parse("p*x1^5", VARS)
    assert P.restrict({0, 1}).is_zero()


names = st.sampled_from(VARS)
monomial = st.tuples(
    st.fractions(min_value=-5, max_value=5, max_denominator=7),
    st.lists(st.integers(0, 4), min_size=6, max_size=6).map(tuple),
)
polys = st.lists(monomial, max_size=6).map(
    lambda ms: Polynomial(VARS, {e: c for c, e in ms})
)


@given(polys)
@settings(max_examples=200, deadline=None)
def test_print_parse_round_trip(P):
    assert parse(str(P), VARS) == P


@given(polys, polys, polys)
@settings(max_examples=80, deadline=None)
def test_ring_laws(A, B, C):
    assert A * (B + C) == A * B + A * C
    assert (A + B) - B == A
    assert A * B == B * A


@given(polys, polys, st.integers(0, 5))
@settings(max_examples=80, deadline=None)
def test_leibniz_rule(A, B, i):
    assert (A * B).partial(i) == A.partial(i) * B + A * B.partial(i)


@given(st.lists(st.integers(0, 3), min_size=6, max_size=6), st.lists(monomial, min_size=1, max_size=5))
@settings(max_examples=100, deadline=None)
def test_euler_identity(w, ms):
    """For w-quasihomogeneous P of degree D: sum_i w_i x_i dP/dx_i = D P."""
    P = Polynomial(VARS, {e: c for c, e in ms})
    D = weighted_degree(P, w)
    if D is None or D is ZERO_POLYNOMIAL:
        return
    lhs = Polynomial(VARS)
    for i, wi in enumerate(w):
        x = Polynomial.variable(VARS, VARS[i])
        lhs = lhs + Polynomial.constant(VARS, wi) * x * P.partial(i)
    assert lhs == Polynomial.constant(VARS, D) * P
