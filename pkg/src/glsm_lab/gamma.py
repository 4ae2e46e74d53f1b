"""The group Gamma = G . C*_R, its compatibility data, lifts and good lifts.

Gamma is handled through the parameter torus ``G x C*_R`` with
coordinates ``(s_1, ..., s_m, t)`` (phases, ``exp(2 pi i s)``).  The
coordinate ``x_j`` has weight ``(Q_j, c_j)`` there, collected as the
``(m+1) x n`` extended weight matrix.  The kernel of the parameter torus
onto Gamma is finite and is stored explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import git
from .linalg import (
    InfiniteGroupError,
    PhaseVector,
    RatVector,
    columns,
    farkas_certificate,
    finite_group_elements,
    int_matrix,
    lp_range,
    phase_vector,
    rank,
    saturated_row_lattice,
)
from .poly import Polynomial, weighted_degree


class CompatibilityError(ValueError):
    pass


@dataclass(frozen=True)
class RCharge:
    c: tuple[int, ...]
    d: int

    def __post_init__(self):
        if self.d <= 0:
            raise ValueError(f"R-degree d must be positive, got {self.d}")
        if math.gcd(*self.c) != 1:
            raise ValueError(f"R-charge weights {self.c} must have gcd 1")

    @property
    def q_weights(self) -> RatVector:
        return tuple(Fraction(x, self.d) for x in self.c)

    @property
    def q(self) -> Fraction:
        return Fraction(sum(self.c), self.d)


@dataclass(frozen=True)
class GammaData:
    gauge: tuple[tuple[int, ...], ...]
    rcharge: RCharge
    extended: tuple[tuple[int, ...], ...]
    J: PhaseVector
    intersection: tuple[Fraction, ...]  # t-values of G cap C*_R
    kernel: tuple[tuple[Fraction, ...], ...]  # (s, t) acting trivially on V
    zeta_character: tuple[int, ...]
    J_gauge: PhaseVector  # some s with exp(2 pi i s) acting as J

    @property
    def d(self) -> int:
        return self.rcharge.d

    @property
    def q(self) -> Fraction:
        return self.rcharge.q

    @property
    def m(self) -> int:
        return len(self.gauge)

    @property
    def n(self) -> int:
        return len(self.gauge[0])

    def J_power(self, k: int) -> PhaseVector:
        return phase_vector(x * k for x in self.J)

    def J_group(self) -> set[PhaseVector]:
        return {self.J_power(k) for k in range(self.d)}

    def action(self, s: Sequence, t) -> PhaseVector:
        """Phases by which the parameter-torus element (s, t) acts on V."""
        return phase_vector(
            sum((Fraction(a) * b for a, b in zip(s, col)), Fraction(0)) + Fraction(t) * c
            for col, c in zip(columns(self.gauge), self.rcharge.c)
        )

    def zeta(self, s: Sequence, t) -> Fraction:
        """Phase of ``zeta(g lambda) = lambda^d``."""
        return (Fraction(t) * self.d) % 1

    def epsilon(self, s: Sequence, t) -> PhaseVector:
        """Canonical representative of ``g <J>`` as an action phase vector."""
        g = phase_vector(sum((Fraction(a) * b for a, b in zip(s, col)), Fraction(0)) for col in columns(self.gauge))
        return min(phase_vector(x + y for x, y in zip(g, j)) for j in self.J_group())


def build_gamma(Q, r: RCharge) -> GammaData:
    Q = int_matrix(Q)
    m, n = len(Q), len(Q[0])
    if len(r.c) != n:
        raise ValueError(f"R-charge has {len(r.c)} weights for {n} coordinates")
    extended = Q + (tuple(r.c),)
    if rank(extended) != m + 1:
        raise CompatibilityError("C*_R lies in G (R-weights are a combination of gauge rows): G cap C*_R is infinite")
    try:
        kernel = finite_group_elements(extended)
    except InfiniteGroupError as exc:  # pragma: no cover - guarded by the rank test
        raise CompatibilityError(str(exc)) from exc
    # (s, t) in the kernel means exp(2 pi i t) in C*_R acts as an element of G
    intersection = tuple(sorted({k[-1] for k in kernel}))
    expected = tuple(Fraction(k, r.d) for k in range(r.d))
    J = phase_vector(Fraction(c, r.d) for c in r.c)
    if intersection != expected:
        raise CompatibilityError(
            f"G cap C*_R has order {len(intersection)} but <J> has order {r.d}"
        )
    # J = lambda_0^c with t = 1/d; the kernel element with t = -1/d gives s_J
    target = Fraction(-1, r.d) % 1
    s_J = next(k[:-1] for k in kernel if k[-1] == target)
    return GammaData(
        gauge=Q,
        rcharge=r,
        extended=extended,
        J=J,
        intersection=intersection,
        kernel=tuple(kernel),
        zeta_character=(0,) * m + (r.d,),
        J_gauge=phase_vector(s_J),
    )


def central_charge(Q, r: RCharge) -> Fraction:
    """``(n - dim G) - 2 q``."""
    Q = int_matrix(Q)
    build_gamma(Q, r)
    return (len(Q[0]) - len(Q)) - 2 * r.q


def order_of_phase(v: Sequence[Fraction]) -> int:
    return math.lcm(*(Fraction(x).denominator for x in v)) if v else 1


# --------------------------------------------------------------------------
# lifts


@dataclass(frozen=True)
class Lift:
    theta: RatVector
    r_level: Fraction = Fraction(0)

    @property
    def restriction(self) -> RatVector:
        return self.theta

    def extended_level(self) -> RatVector:
        return git.level_of_theta(self.theta) + (-Fraction(self.r_level),)


def trivial_lift(theta: Sequence) -> Lift:
    return Lift(tuple(Fraction(x) for x in theta), Fraction(0))


def gamma_semistable_supports(gamma: GammaData, lift: Lift) -> list[frozenset]:
    return git.semistable_supports(gamma.extended, lift.extended_level())


def _require_regular(gamma: GammaData, theta):
    tau = git.level_of_theta(theta)
    reg = git.is_strongly_regular(gamma.gauge, tau)
    if not reg:
        raise ValueError(f"theta={list(map(str, theta))} is not strongly regular: {reg.reason}")
    return tau


def is_good_lift(gamma: GammaData, theta: Sequence, lift: Lift) -> bool:
    """Does the lift cut out the same semistable locus as theta?"""
    theta = tuple(Fraction(x) for x in theta)
    if tuple(lift.theta) != theta:
        raise ValueError("lift does not restrict to theta")
    tau = _require_regular(gamma, theta)
    g_family = git.semistable_supports(gamma.gauge, tau)
    return gamma_semistable_supports(gamma, lift) == g_family


def support_r_interval(gamma: GammaData, tau: Sequence, S) -> tuple | None:
    """Interval of r_level for which the G-semistable support S stays Gamma-semistable.

    ``(tau, -r)`` must lie in the cone of extended columns of S, i.e.
    ``-r = sum c_j a_j`` for some ``a >= 0`` with ``Q_S a = tau``.
    Returns ``(r_min, r_max)`` with None for an unbounded side, or None if
    S is not even G-semistable.
    """
    S = sorted(S)
    if not S:
        return (None, None) if all(x == 0 for x in tau) else None
    A = [[row[j] for j in S] for row in gamma.gauge]
    obj = [gamma.rcharge.c[j] for j in S]
    rng = lp_range(A, tau, obj)
    if rng is None:
        return None
    s_lo, s_hi = rng
    return (None if s_hi is None else -s_hi, None if s_lo is None else -s_lo)


@dataclass
class GoodLiftAnalysis:
    theta: RatVector
    good_interval: tuple | None  # (r_min, r_max), None ends unbounded; None if no good lift
    per_support: list[tuple[frozenset, tuple]]
    certificates: list[dict] = field(default_factory=list)

    def is_good(self, r) -> bool:
        if self.good_interval is None:
            return False
        lo, hi = self.good_interval
        r = Fraction(r)
        return (lo is None or lo <= r) and (hi is None or r <= hi)

    @property
    def unique_good_level(self) -> Fraction | None:
        if self.good_interval and self.good_interval[0] is not None and self.good_interval[0] == self.good_interval[1]:
            return self.good_interval[0]
        return None


def good_lifts(gamma: GammaData, theta: Sequence) -> GoodLiftAnalysis:
    """All good lifts of theta, exactly.

    Gamma-semistability is contained in G-semistability, so a lift is good
    iff every minimal G-semistable support stays Gamma-semistable; the
    admissible r_levels form the intersection of one interval per support.
    """
    theta = tuple(Fraction(x) for x in theta)
    tau = _require_regular(gamma, theta)
    minimal = git.semistable_supports(gamma.gauge, tau)
    per_support = [(S, support_r_interval(gamma, tau, S)) for S in minimal]
    lo = hi = None
    lo_src = hi_src = None
    for S, (a, b) in per_support:
        if a is not None and (lo is None or a > lo):
            lo, lo_src = a, S
        if b is not None and (hi is None or b < hi):
            hi, hi_src = b, S
    empty = lo is not None and hi is not None and lo > hi
    analysis = GoodLiftAnalysis(theta, None if empty else (lo, hi), per_support)
    # certificates: a witness support for each side of the good set
    if hi is not None:
        analysis.certificates.append(_side_certificate(gamma, tau, theta, hi_src, "above", hi))
    if lo is not None:
        analysis.certificates.append(_side_certificate(gamma, tau, theta, lo_src, "below", lo))
    return analysis


def _side_certificate(gamma, tau, theta, S, side, bound):
    probe = bound + 1 if side == "above" else bound - 1
    level = Lift(theta, probe).extended_level()
    cols = columns(gamma.extended)
    functional = farkas_certificate([cols[j] for j in sorted(S)], level)
    return {
        "direction": f"r_level {'>' if side == 'above' else '<'} {bound}",
        "support": S,
        "probe_r_level": probe,
        "separating_functional": functional,
        "statement": (
            f"support {sorted(S)} is G-semistable but, for every r_level "
            f"{'>' if side == 'above' else '<'} {bound}, not Gamma-semistable"
        ),
    }


# --------------------------------------------------------------------------
# alternative R-charges


def rcharge_shift(gamma: GammaData, combo: Sequence) -> GammaData:
    """R-charge with ``q' = q + combo . Q``, renormalised to integers with gcd 1.

    Shifting by ``-combo`` undoes the shift exactly.
    """
    combo = [Fraction(x) for x in combo]
    if len(combo) != gamma.m:
        raise ValueError(f"combination has length {len(combo)}, expected {gamma.m}")
    q_new = [
        qj + sum((a * col_i for a, col_i in zip(combo, col)), Fraction(0))
        for qj, col in zip(gamma.rcharge.q_weights, columns(gamma.gauge))
    ]
    L = math.lcm(*(x.denominator for x in q_new))
    ints = [int(x * L) for x in q_new]
    g = math.gcd(*ints)
    if g == 0:
        raise CompatibilityError("shifted R-charge is identically zero")
    new = build_gamma(gamma.gauge, RCharge(tuple(x // g for x in ints), L // g))
    if saturated_row_lattice(new.extended) != saturated_row_lattice(gamma.extended):
        raise CompatibilityError("shift changed the group Gamma")  # pragma: no cover
    return new


def shift_report(old: GammaData, new: GammaData, W: Polynomial | None = None) -> dict:
    """Compare group, J, W-degree, q and central charge before and after a shift."""
    n, m = old.n, old.m
    calabi_yau = all(sum(row) == 0 for row in old.gauge)
    report = {
        "same_gamma": saturated_row_lattice(old.extended) == saturated_row_lattice(new.extended),
        "new_data_compatible": new.intersection == tuple(Fraction(k, new.d) for k in range(new.d)),
        "same_J_group": old.J_group() == new.J_group(),
        "calabi_yau": calabi_yau,
        "q_before": old.q,
        "q_after": new.q,
        "chat_before": (n - m) - 2 * old.q,
        "chat_after": (n - m) - 2 * new.q,
    }
    if W is not None:
        report["W_degree_after"] = weighted_degree(W, new.rcharge.c)
        report["W_degree_is_d"] = report["W_degree_after"] == new.d
    if calabi_yau:
        report["same_q_and_chat"] = old.q == new.q
    return report
