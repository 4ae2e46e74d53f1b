from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, product

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from glsm_lab.linalg import (
    DimensionError,
    InfiniteGroupError,
    as_fraction,
    cone_coefficients,
    cone_member,
    elementary_divisors,
    farkas_certificate,
    finite_group_elements,
    in_row_span,
    kernel_basis,
    linprog,
    lp_range,
    mat_vec,
    nonneg_kernel_exists,
    nonneg_kernel_vector,
    primitive_vector,
    rank,
    smith_normal_form,
    solve_unique,
)

small = st.integers(min_value=-5, max_value=5)


def matrices(max_rows=3, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


# --- conversions -----------------------------------------------------------


def test_as_fraction_accepts_exact_forms():
    assert as_fraction("3/5") == Fraction(3, 5)
    assert as_fraction(-2) == -2
    assert as_fraction(Fraction(1, 3)) == Fraction(1, 3)


@pytest.mark.parametrize("bad", [0.5, "0.5", "1e3", True])
def test_as_fraction_rejects_inexact(bad):
    with pytest.raises((ValueError, TypeError)):
        as_fraction(bad)


def test_primitive_vector():
    assert primitive_vector((Fraction(3, 2), 3)) == (1, 2)
    assert primitive_vector((-4, 6)) == (-2, 3)
    with pytest.raises(ValueError):
        primitive_vector((0, 0))


# --- cones -----------------------------------------------------------------


def test_cone_member_examples():
    assert cone_member([(1, 0), (0, 1)], (2, 3))
    assert not cone_member([(-5, 0), (0, 1)], (1, 1))
    assert not cone_member([(1, 0), (3, 1)], (1, 1))


def test_cone_dimension_mismatch():
    with pytest.raises(DimensionError):
        cone_member([(1, 0, 0)], (1, 1))


def test_empty_cone_contains_only_origin():
    assert cone_member([], (0, 0))
    assert not cone_member([], (0, 1))


@given(st.lists(st.tuples(small, small), max_size=5), st.tuples(small, small))
@settings(max_examples=150, deadline=None)
def test_cone_member_xor_farkas(gens, v):
    coeffs = cone_coefficients(gens, v)
    y = farkas_certificate(gens, v)
    assert (coeffs is None) != (y is None)
    if coeffs is not None:
        assert all(c >= 0 for c in coeffs)
        assert tuple(sum(c * g[i] for c, g in zip(coeffs, gens)) for i in range(2)) == tuple(map(Fraction, v))
    else:
        assert all(sum(a * b for a, b in zip(y, g)) >= 0 for g in gens)
        assert sum(a * b for a, b in zip(y, v)) == -1


# --- kernels and SNF -------------------------------------------------------


def test_kernel_basis_quintic():
    M = [[1, 1, 1, 1, 1, -5]]
    basis = kernel_basis(M)
    assert len(basis) == 5
    assert all(mat_vec(M, v) == (0,) for v in basis)
    # lattice basis: the 5x6 matrix has coprime maximal minors
    minors = sympy.Matrix(basis).T
    gcd = 0
    for rows in combinations(range(6), 5):
        gcd = math.gcd(gcd, int(minors.extract(list(rows), list(range(5))).det()))
    assert gcd == 1


def test_kernel_basis_trivial_cases():
    assert kernel_basis([[1, 0], [0, 1]]) == []
    assert len(kernel_basis([[0, 0, 0]])) == 3


@given(matrices())
@settings(max_examples=120, deadline=None)
def test_smith_normal_form_properties(M):
    D, U, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == [list(r) for r in D]
    assert abs(sympy.Matrix(U).det()) == 1
    assert abs(sympy.Matrix(V).det()) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    nonzero = [d for d in diag if d]
    assert all(d > 0 for d in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)


@given(matrices())
@settings(max_examples=80, deadline=None)
def test_elementary_divisors_match_sympy(M):
    from sympy.matrices.normalforms import invariant_factors

    expected = [abs(int(x)) for x in invariant_factors(sympy.Matrix(M), domain=sympy.ZZ) if x != 0]
    assert elementary_divisors(M) == expected
    assert rank(M) == sympy.Matrix(M).rank()


def test_finite_group_examples():
    assert finite_group_elements([[5]]) == [(Fraction(k, 5),) for k in range(5)]
    assert finite_group_elements([[1]]) == [(Fraction(0),)]
    assert finite_group_elements([[2, 3]]) == [(Fraction(0),)]
    with pytest.raises(InfiniteGroupError):
        finite_group_elements([[1, 1], [2, 2]])


@given(matrices(max_rows=2, max_cols=4))
@settings(max_examples=100, deadline=None)
def test_finite_group_brute_force(M):
    m = len(M)
    if rank(M) < m:
        with pytest.raises(InfiniteGroupError):
            finite_group_elements(M)
        return
    elems = finite_group_elements(M)
    divs = elementary_divisors([list(r) for r in zip(*M)])
    assert len(elems) == math.prod(divs)
    N = math.prod(divs)
    brute = set()
    for ks in product(range(N), repeat=m):
        t = [Fraction(k, N) for k in ks]
        if all(sum(a * b for a, b in zip(col, t)).denominator == 1 for col in zip(*M)):
            brute.add(tuple(t))
    assert set(elems) == brute


# --- LP --------------------------------------------------------------------


def test_linprog_simple():
    res = linprog([1, 2], [[1, 1]], [4])
    assert res.status == "optimal" and res.value == 4 and res.x == (4, 0)
    assert linprog([1], [[1]], [-1]).status == "infeasible"
    assert linprog([-1, 0], [[1, -1]], [0]).status == "unbounded"


def test_lp_range_unbounded_side():
    assert lp_range([[1, -1]], [1], [1, 0]) == (1, None)
    assert lp_range([[1]], [-2], [1]) is None


@given(st.lists(st.lists(st.integers(0, 4), min_size=3, max_size=3), min_size=1, max_size=2),
       st.lists(st.integers(-3, 3), min_size=3, max_size=3))
@settings(max_examples=80, deadline=None)
def test_lp_range_against_vertices(A, obj):
    """Compare with enumeration of basic feasible solutions of {x>=0, Ax=b}."""
    b = [sum(row) for row in A]  # x = 1 is feasible
    rng = lp_range(A, b, obj)
    assert rng is not None
    values = []
    for k in range(1, len(A) + 1):
        for cols in combinations(range(3), k):
            sub = [[row[j] for j in cols] for row in A]
            for rows in combinations(range(len(A)), k):
                sq = [sub[i] for i in rows]
                x = solve_unique(sq, [b[i] for i in rows])
                if x is None or any(v < 0 for v in x):
                    continue
                full = [Fraction(0)] * 3
                for j, v in zip(cols, x):
                    full[j] = v
                if all(sum(a * v for a, v in zip(row, full)) == bi for row, bi in zip(A, b)):
                    values.append(sum(c * v for c, v in zip(obj, full)))
    if all(b_ == 0 for b_ in b):
        values.append(Fraction(0))
    lo, hi = rng
    if lo is not None:
        assert lo == min(values)
    if hi is not None:
        assert hi == max(values)


# --- nonnegative kernel ------------------------------------------------------


def test_nonneg_kernel_examples():
    M = [[1, 1, 1, 1, 1, -5]]
    assert nonneg_kernel_exists(M, {0, 5})
    assert nonneg_kernel_vector(M, {0, 5}) == (5, 0, 0, 0, 0, 1)
    assert not nonneg_kernel_exists(M, {0, 1, 2, 3, 4})
    assert nonneg_kernel_exists([[1, -5], [0, 0]], {0, 1})
    assert not nonneg_kernel_exists(M, set())


def test_in_row_span():
    assert in_row_span([[1, 1, 0]], [2, 2, 0])
    assert not in_row_span([[1, 1, 0]], [1, 0, 0])
    assert in_row_span([], [0, 0])
