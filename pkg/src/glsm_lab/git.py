"""GIT for a torus ``G = (C*)^m`` acting diagonally on ``C^n``.

Points are handled through their supports (sets of nonvanishing
coordinates).  With the level ``tau = -theta``, a support S is
semistable iff ``tau`` lies in the cone spanned by the weight columns in
S.  Supports are ``frozenset`` of 0-based column indices.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .linalg import (
    RatVector,
    cone_coefficients,
    cone_member,
    columns,
    columns_rank,
    farkas_certificate,
    nonneg_kernel_exists,
    primitive_vector,
    rank,
)

Support = frozenset


class DegenerateWeightsError(ValueError):
    pass


def level_of_theta(theta: Sequence) -> RatVector:
    """Moment-map level of a character: ``tau = -theta``."""
    return tuple(-Fraction(x) for x in theta)


def theta_of_level(tau: Sequence) -> RatVector:
    return tuple(-Fraction(x) for x in tau)


def support_key(S: Iterable[int]) -> tuple:
    S = sorted(S)
    return (len(S), S)


def sort_supports(family: Iterable[Iterable[int]]) -> list[frozenset]:
    return [frozenset(S) for S in sorted({frozenset(S) for S in family}, key=support_key)]


def is_semistable_support(Q, tau: Sequence, S: Iterable[int]) -> bool:
    cols = columns(Q)
    return cone_member([cols[j] for j in sorted(S)], tau)


def semistable_certificate(Q, tau: Sequence, S: Iterable[int]) -> dict:
    """Cone coefficients when S is semistable, else a separating functional."""
    cols = columns(Q)
    S = sorted(S)
    gens = [cols[j] for j in S]
    coeffs = cone_coefficients(gens, tau)
    if coeffs is not None:
        return {"semistable": True, "coefficients": dict(zip(S, coeffs))}
    return {"semistable": False, "separating_functional": farkas_certificate(gens, tau)}


def semistable_supports(Q, tau: Sequence) -> list[frozenset]:
    """Inclusion-minimal semistable supports.

    By Caratheodory a minimal support has linearly independent columns,
    so only subsets of size <= rank(Q) are examined.
    """
    m = len(Q)
    if len(tau) != m:
        raise ValueError(f"level has length {len(tau)}, expected {m}")
    cols = columns(Q)
    n = len(cols)
    found: list[frozenset] = []
    for size in range(0, min(rank(Q), n) + 1):
        for S in combinations(range(n), size):
            fs = frozenset(S)
            if any(T <= fs for T in found):
                continue
            if cone_member([cols[j] for j in S], tau):
                found.append(fs)
    return sort_supports(found)


def minimal_transversals(family: Sequence[frozenset]) -> list[frozenset]:
    """Inclusion-minimal sets meeting every member of ``family`` (Berge)."""
    transversals = [frozenset()]
    for edge in family:
        new = set()
        for T in transversals:
            if T & edge:
                new.add(T)
            else:
                new.update(T | {e} for e in edge)
        transversals = [T for T in new if not any(U < T for U in new)]
    return sort_supports(transversals)


def unstable_subspaces(Q, tau: Sequence) -> list[frozenset]:
    """Inclusion-maximal unstable supports.

    The unstable locus is the union of the coordinate subspaces
    ``{x_j = 0 for j not in S}`` over the returned S.
    """
    n = len(Q[0])
    minimal = semistable_supports(Q, tau)
    if frozenset() in minimal:
        return []
    everything = frozenset(range(n))
    return sort_supports(everything - T for T in minimal_transversals(minimal))


def is_semistable_by_family(S: Iterable[int], minimal: Sequence[frozenset]) -> bool:
    S = frozenset(S)
    return any(T <= S for T in minimal)


@dataclass(frozen=True)
class StrongRegularity:
    regular: bool
    reason: str
    witness: frozenset | None = None

    def __bool__(self):
        return self.regular


def _low_rank_flats(Q) -> list[frozenset]:
    """Maximal column sets of each rank < m spanned by columns."""
    m = len(Q)
    cols = columns(Q)
    n = len(cols)
    flats = set()
    zero = frozenset(j for j in range(n) if not any(cols[j]))
    flats.add(zero)
    for size in range(1, m):
        for B in combinations(range(n), size):
            if columns_rank(Q, B) != size:
                continue
            F = frozenset(j for j in range(n) if columns_rank(Q, B + (j,)) == size)
            flats.add(F)
    return sort_supports(flats)


def is_strongly_regular(Q, tau: Sequence) -> StrongRegularity:
    """Semistable locus nonempty and every semistable point has finite stabilizer."""
    m = len(Q)
    cols = columns(Q)
    if not cone_member(cols, tau):
        return StrongRegularity(False, "no semistable points: level outside the cone of all weights")
    for F in _low_rank_flats(Q):
        if cone_member([cols[j] for j in sorted(F)], tau):
            return StrongRegularity(
                False,
                f"level lies in the cone of columns {sorted(F)} of rank {columns_rank(Q, F)} < {m}",
                F,
            )
    return StrongRegularity(True, "semistable = stable and nonempty")


def affine_support_trivial(Q, S: Iterable[int]) -> bool:
    """True iff no nonconstant G-invariant monomial is supported in S."""
    return not nonneg_kernel_exists(Q, S)


# --------------------------------------------------------------------------
# chambers


@dataclass
class PhaseChamber:
    representative: RatVector
    walls: list[tuple[int, ...]]
    minimal_semistable: list[frozenset]
    maximal_unstable: list[frozenset]
    strongly_regular: bool
    samples: list[RatVector] = field(default_factory=list)

    def interior_point(self, weights: Sequence[int]) -> RatVector:
        """Positive combination of the bounding rays (m = 2 only)."""
        if len(self.walls) != 2 or len(weights) != 2:
            raise ValueError("interior_point needs a two-ray chamber")
        (a, b), (c, d) = self.walls
        s, t = (Fraction(w) for w in weights)
        return (s * a + t * c, s * b + t * d)


def _half(v):
    x, y = v
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _angle_cmp(u, v):
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    cross = u[0] * v[1] - u[1] * v[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def column_rays(Q) -> list[tuple[int, ...]]:
    rays = {primitive_vector(c) for c in columns(Q) if any(c)}
    if len(Q) == 2:
        return sorted(rays, key=functools.cmp_to_key(_angle_cmp))
    return sorted(rays)


def _make_chamber(Q, tau, walls) -> PhaseChamber:
    return PhaseChamber(
        representative=tuple(Fraction(x) for x in tau),
        walls=walls,
        minimal_semistable=semistable_supports(Q, tau),
        maximal_unstable=unstable_subspaces(Q, tau),
        strongly_regular=bool(is_strongly_regular(Q, tau)),
    )


def chambers(Q, candidates: Sequence[Sequence] | None = None) -> list[PhaseChamber]:
    """Open GIT chambers in level space.

    m = 1 and m = 2 are enumerated exactly.  For m >= 3 the candidate
    levels are grouped by their minimal-semistable-support family, which
    is all the information we claim there.
    """
    m = len(Q)
    if rank(Q) < m:
        raise DegenerateWeightsError(f"weight matrix has rank {rank(Q)} < {m}: no open chambers")
    if m == 1:
        weights = [row for row in Q[0]]
        out = []
        if any(w > 0 for w in weights):
            out.append(_make_chamber(Q, (1,), [(0,)]))
        if any(w < 0 for w in weights):
            out.append(_make_chamber(Q, (-1,), [(0,)]))
        return out
    if m == 2:
        rays = column_rays(Q)
        out = []
        k = len(rays)
        for i in range(k):
            u, v = rays[i], rays[(i + 1) % k]
            if u[0] * v[1] - u[1] * v[0] > 0:
                out.append(_make_chamber(Q, (u[0] + v[0], u[1] + v[1]), [u, v]))
        return out
    if not candidates:
        raise ValueError("chamber enumeration for m >= 3 needs candidate levels")
    groups: dict[tuple, PhaseChamber] = {}
    for tau in candidates:
        tau = tuple(Fraction(x) for x in tau)
        if len(tau) != m:
            raise ValueError(f"candidate level {tau} has length {len(tau)}, expected {m}")
        if not is_strongly_regular(Q, tau):
            continue
        fam = tuple(tuple(sorted(S)) for S in semistable_supports(Q, tau))
        if fam in groups:
            groups[fam].samples.append(tau)
        else:
            ch = _make_chamber(Q, tau, [])
            ch.samples.append(tau)
            groups[fam] = ch
    return list(groups.values())


def find_chamber(chamber_list: Sequence[PhaseChamber], Q, tau: Sequence) -> PhaseChamber | None:
    fam = semistable_supports(Q, tau)
    for ch in chamber_list:
        if ch.minimal_semistable == fam:
            return ch
    return None
