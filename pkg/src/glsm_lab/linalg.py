"""Exact integer/rational linear algebra and polyhedral primitives.

Everything here works on plain tuples of ``int`` / ``Fraction``; there is
no floating point anywhere.  Matrices are tuples of rows.

The two workhorses are :func:`smith_normal_form` (lattice questions:
integer kernels, finite stabilizer groups) and a small two-phase simplex
with Bland's rule (:func:`linprog`) for cone membership and related
feasibility questions.  Instances are tiny, so nothing is tuned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

IntMatrix = tuple[tuple[int, ...], ...]
RatVector = tuple[Fraction, ...]
PhaseVector = tuple[Fraction, ...]


class DimensionError(ValueError):
    pass


class InfiniteGroupError(ValueError):
    """The requested stabilizer group has positive dimension."""


def as_fraction(value) -> Fraction:
    """Convert an int, Fraction or ``"a/b"`` string to a Fraction.

    Floats are refused outright: a float literal in a model almost always
    means an inexact wall position.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"not an exact rational literal: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot use {type(value).__name__} {value!r} as an exact rational")


def rat_vector(values: Iterable) -> RatVector:
    return tuple(as_fraction(v) for v in values)


def int_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    out = []
    for row in rows:
        r = []
        for x in row:
            if isinstance(x, bool) or not isinstance(x, int):
                if isinstance(x, Fraction) and x.denominator == 1:
                    x = int(x)
                else:
                    raise TypeError(f"matrix entry {x!r} is not an integer")
            r.append(x)
        out.append(tuple(r))
    if not out or not out[0]:
        raise DimensionError("matrix must have positive dimensions")
    if any(len(r) != len(out[0]) for r in out):
        raise DimensionError("ragged matrix rows")
    return tuple(out)


def phase_vector(values: Iterable) -> PhaseVector:
    """Reduce rationals modulo 1 into [0, 1)."""
    return tuple(as_fraction(v) % 1 for v in values)


def columns(M: Sequence[Sequence]) -> list[tuple]:
    return [tuple(col) for col in zip(*M)]


def transpose(M: Sequence[Sequence]) -> tuple[tuple, ...]:
    return tuple(zip(*M))


def submatrix_columns(M: Sequence[Sequence], idx: Iterable[int]) -> tuple[tuple, ...]:
    idx = list(idx)
    return tuple(tuple(row[j] for j in idx) for row in M)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


def mat_vec(M: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in M)


def primitive_vector(v: Sequence) -> tuple[int, ...]:
    """Smallest integer vector on the ray through a nonzero rational vector."""
    v = [Fraction(x) for x in v]
    if all(x == 0 for x in v):
        raise ValueError("zero vector has no primitive ray generator")
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints)
    return tuple(x // g for x in ints)


# --------------------------------------------------------------------------
# Rational Gaussian elimination


def rref(M: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = [[Fraction(x) for x in row] for row in M]
    if not A:
        return A, []
    nrows, ncols = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        p = A[r][c]
        A[r] = [x / p for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return A, pivots


def rank(M: Sequence[Sequence]) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(M)[1])


def columns_rank(M: Sequence[Sequence], idx: Iterable[int]) -> int:
    idx = list(idx)
    if not idx:
        return 0
    return rank(submatrix_columns(M, idx))


def in_row_span(rows: Sequence[Sequence], v: Sequence) -> bool:
    """Is ``v`` a rational combination of ``rows``?"""
    if all(x == 0 for x in v):
        return True
    rows = [r for r in rows if any(x != 0 for x in r)]
    if not rows:
        return False
    return rank(list(rows) + [list(v)]) == rank(rows)


def solve_unique(A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """Solve a square nonsingular system exactly; None if singular."""
    n = len(A)
    aug = [list(row) + [b[i]] for i, row in enumerate(A)]
    R, piv = rref(aug)
    if piv != list(range(n)):
        return None
    return tuple(R[i][n] for i in range(n))


# --------------------------------------------------------------------------
# Smith normal form and lattices


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]]):
    """Return ``(D, U, V)`` with ``U @ M @ V == D`` and U, V unimodular.

    D is diagonal with positive entries d_1 | d_2 | ... followed by zeros.
    """
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):  # row_dst += f * row_src
        A[dst] = [a + f * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, f):  # col_dst += f * col_src
        for row in A:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not entries:
                return _finish(A, U, V)
            _, pi, pj = min(entries)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // p))
                    clean &= A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // p))
                    clean &= A[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return _finish(A, U, V)


def _finish(A, U, V):
    return tuple(map(tuple, A)), tuple(map(tuple, U)), tuple(map(tuple, V))


def elementary_divisors(M: Sequence[Sequence[int]]) -> list[int]:
    D, _, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]))) if D[i][i]]


def kernel_basis(M: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """A lattice basis of ``{v in Z^n : M v = 0}``."""
    D, _, V = smith_normal_form(M)
    n = len(V)
    r = sum(1 for i in range(min(len(D), n)) if D[i][i])
    return [tuple(V[i][j] for i in range(n)) for j in range(r, n)]


def saturated_row_lattice(M: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Canonical basis (RREF scaled to primitive rows) of the rational row space.

    Two integer matrices span the same rational row space iff these agree,
    which is how subtori of the diagonal torus are compared.
    """
    R, piv = rref(M)
    return tuple(primitive_vector(R[i]) for i in range(len(piv)))


def finite_group_elements(M: Sequence[Sequence[int]]) -> list[PhaseVector]:
    """All ``t`` in ``[0,1)^m`` with ``(column j of M) . t`` integral for every j.

    Rows of M index the torus factors, columns the coordinates.  These
    are the elements of ``(C*)^m`` acting trivially on every coordinate,
    written as exponents ``exp(2 pi i t)``.
    """
    m = len(M)
    A = transpose(M)  # n x m
    if not A:
        if m == 0:
            return [()]
        raise InfiniteGroupError("no coordinates: the whole torus acts trivially")
    D, _, V = smith_normal_form(A)
    divisors = [D[i][i] for i in range(min(len(D), m)) if D[i][i]]
    if len(divisors) < m:
        raise InfiniteGroupError(f"weight matrix has rank {len(divisors)} < {m}")
    out = set()
    for ks in product(*(range(d) for d in divisors)):
        s = [Fraction(k, d) for k, d in zip(ks, divisors)]
        out.add(tuple(dot(V[i], s) % 1 for i in range(m)))
    return sorted(out)


# --------------------------------------------------------------------------
# Linear programming


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None


def _pivot(T, basis, r, col):
    p = T[r][col]
    T[r] = [v / p for v in T[r]]
    for i, row in enumerate(T):
        if i != r and row[col] != 0:
            f = row[col]
            T[i] = [a - f * b for a, b in zip(row, T[r])]
    basis[r] = col


def _simplex(T, basis, cost, allowed):
    while True:
        entering = None
        for j in allowed:
            if j in basis:
                continue
            rc = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(len(T)))
            if rc < 0:
                entering = j
                break
        if entering is None:
            return "optimal"
        best = None
        for i, row in enumerate(T):
            if row[entering] > 0:
                ratio = row[-1] / row[entering]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(T, basis, best[1], entering)


def linprog(cost: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Minimize ``cost . x`` subject to ``A x = b``, ``x >= 0``, exactly."""
    nvar = len(cost)
    rows = []
    for row, rhs in zip(A, b):
        row = [Fraction(x) for x in row]
        rhs = Fraction(rhs)
        if len(row) != nvar:
            raise DimensionError("constraint row length differs from cost length")
        if rhs < 0:
            row, rhs = [-x for x in row], -rhs
        rows.append((row, rhs))
    if any(all(x == 0 for x in row) and rhs != 0 for row, rhs in rows):
        return LPResult("infeasible")
    rows = [(row, rhs) for row, rhs in rows if any(x != 0 for x in row)]
    k = len(rows)
    if k == 0:
        if any(Fraction(c) < 0 for c in cost):
            return LPResult("unbounded")
        return LPResult("optimal", tuple(Fraction(0) for _ in range(nvar)), Fraction(0))

    # phase 1 with one artificial per row
    T = [row + [Fraction(int(i == r)) for i in range(k)] + [rhs] for r, (row, rhs) in enumerate(rows)]
    basis = [nvar + r for r in range(k)]
    phase1_cost = [Fraction(0)] * nvar + [Fraction(1)] * k
    _simplex(T, basis, phase1_cost, range(nvar + k))
    if sum(T[i][-1] for i in range(k) if basis[i] >= nvar) != 0:
        return LPResult("infeasible")
    # drive degenerate artificials out, dropping redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= nvar:
            j = next((j for j in range(nvar) if T[i][j] != 0), None)
            if j is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, basis, i, j)
        i += 1
    T = [row[:nvar] + [row[-1]] for row in T]
    full_cost = [Fraction(c) for c in cost]
    status = _simplex(T, basis, full_cost, range(nvar))
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * nvar
    for i, j in enumerate(basis):
        x[j] = T[i][-1]
    return LPResult("optimal", tuple(x), dot(full_cost, x))


def feasible_point(A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """A point of ``{x >= 0 : A x = b}`` or None."""
    nvar = len(A[0]) if A else 0
    res = linprog([0] * nvar, A, b)
    return res.x if res.status == "optimal" else None


def lp_range(A: Sequence[Sequence], b: Sequence, objective: Sequence):
    """Exact ``(min, max)`` of ``objective . x`` over ``{x >= 0 : A x = b}``.

    Returns None when the polyhedron is empty; an unbounded side is None.
    """
    lo = linprog(objective, A, b)
    if lo.status == "infeasible":
        return None
    hi = linprog([-Fraction(c) for c in objective], A, b)
    return (
        lo.value if lo.status == "optimal" else None,
        -hi.value if hi.status == "optimal" else None,
    )


# --------------------------------------------------------------------------
# Cones


def _check_dims(generators, v):
    for g in generators:
        if len(g) != len(v):
            raise DimensionError(f"generator {tuple(g)} has dimension {len(g)}, expected {len(v)}")


def cone_coefficients(generators: Sequence[Sequence], v: Sequence) -> tuple[Fraction, ...] | None:
    """Nonnegative coefficients expressing v in terms of the generators, or None."""
    _check_dims(generators, v)
    if not generators:
        return () if all(x == 0 for x in v) else None
    A = transpose(generators)
    return feasible_point(A, v)


def cone_member(generators: Sequence[Sequence], v: Sequence) -> bool:
    """Is v a nonnegative rational combination of the generators?"""
    return cone_coefficients(generators, v) is not None


def farkas_certificate(generators: Sequence[Sequence], v: Sequence) -> tuple[Fraction, ...] | None:
    """A functional y with ``y.g >= 0`` for all generators and ``y.v = -1``.

    Exists iff v lies outside the cone; found by its own LP so callers can
    cross-check it against :func:`cone_member`.
    """
    _check_dims(generators, v)
    dim = len(v)
    k = len(generators)
    # variables: y+ (dim), y- (dim), slack (k)
    A = []
    b = []
    for j, g in enumerate(generators):
        A.append(list(g) + [-x for x in g] + [-int(i == j) for i in range(k)])
        b.append(0)
    A.append(list(v) + [-x for x in v] + [0] * k)
    b.append(-1)
    x = feasible_point(A, b)
    if x is None:
        return None
    return tuple(x[i] - x[dim + i] for i in range(dim))


def nonneg_kernel_exists(M: Sequence[Sequence[int]], support: Iterable[int]) -> bool:
    """Is there a nonzero ``a >= 0`` supported in ``support`` with ``M a = 0``?"""
    support = sorted(set(support))
    if not support:
        return False
    n = len(M[0])
    if any(j < 0 or j >= n for j in support):
        raise IndexError(f"support {support} outside column range 0..{n - 1}")
    A = [[row[j] for j in support] for row in M] + [[1] * len(support)]
    b = [0] * len(M) + [1]
    return feasible_point(A, b) is not None


def nonneg_kernel_vector(M: Sequence[Sequence[int]], support: Iterable[int]) -> tuple[int, ...] | None:
    """An integral witness for :func:`nonneg_kernel_exists` (full length n)."""
    support = sorted(set(support))
    if not support:
        return None
    n = len(M[0])
    A = [[row[j] for j in support] for row in M] + [[1] * len(support)]
    x = feasible_point(A, [0] * len(M) + [1])
    if x is None:
        return None
    den = math.lcm(*(c.denominator for c in x))
    out = [0] * n
    for j, c in zip(support, x):
        out[j] = int(c * den)
    g = math.gcd(*out)
    return tuple(c // g for c in out)
