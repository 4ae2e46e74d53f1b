"""Whole-model analysis: validation, critical locus, sectors, virtual dimension."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import git
from .gamma import (
    CompatibilityError,
    GammaData,
    Lift,
    RCharge,
    build_gamma,
    is_good_lift,
)
from .linalg import (
    PhaseVector,
    RatVector,
    finite_group_elements,
    in_row_span,
    nonneg_kernel_vector,
    phase_vector,
    rank,
    submatrix_columns,
    transpose,
    mat_vec,
)
from .poly import ZERO_POLYNOMIAL, Polynomial, weighted_degree


class Epsilon(enum.Enum):
    ZERO_PLUS = "0+"
    INFINITY = "infinity"

    @classmethod
    def parse(cls, text: str) -> Epsilon:
        key = str(text).strip().lower()
        aliases = {"0+": cls.ZERO_PLUS, "zero_plus": cls.ZERO_PLUS, "zeroplus": cls.ZERO_PLUS,
                   "infinity": cls.INFINITY, "inf": cls.INFINITY, "∞": cls.INFINITY}
        if key not in aliases:
            raise ValueError(f"epsilon must be '0+' or 'infinity', got {text!r}")
        return aliases[key]


class StructureError(ValueError):
    pass


@dataclass(frozen=True)
class ModelInput:
    variables: tuple[str, ...]
    gauge: tuple[tuple[int, ...], ...]
    r_weights: tuple[int, ...]
    r_degree: int
    superpotential: Polynomial
    theta: RatVector
    epsilon: Epsilon = Epsilon.ZERO_PLUS
    lift_r_level: Fraction | None = None
    transversal: bool = False
    p_variables: tuple[str, ...] | None = None
    extra_action: tuple[int, ...] | None = None
    name: str = ""

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def m(self) -> int:
        return len(self.gauge)

    @property
    def tau(self) -> RatVector:
        return git.level_of_theta(self.theta)

    @property
    def rcharge(self) -> RCharge:
        return RCharge(tuple(self.r_weights), self.r_degree)

    @property
    def q(self) -> Fraction:
        return Fraction(sum(self.r_weights), self.r_degree)

    @property
    def lift(self) -> Lift:
        return Lift(tuple(self.theta), Fraction(self.lift_r_level or 0))

    def gamma(self) -> GammaData:
        return build_gamma(self.gauge, self.rcharge)

    def with_overrides(self, **changes) -> ModelInput:
        return replace(self, **changes)

    def names(self, S) -> list[str]:
        return [self.variables[j] for j in sorted(S)]


# --------------------------------------------------------------------------
# validation


@dataclass
class Check:
    name: str
    status: str  # pass | fail | skip | unknown
    detail: str
    certificate: dict | None = None


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    def __getitem__(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def add(self, name, passed, detail, certificate=None):
        status = passed if isinstance(passed, str) else ("pass" if passed else "fail")
        self.checks.append(Check(name, status, detail, certificate))


def validate_model(model: ModelInput) -> ValidationReport:
    """Run every input check; never raises on bad data, reports it instead."""
    rep = ValidationReport()
    n, m = model.n, model.m
    W = model.superpotential
    dims_ok = (
        all(len(row) == n for row in model.gauge)
        and len(model.r_weights) == n
        and len(model.theta) == m
        and W.variables == model.variables
    )
    rep.add("dimensions", dims_ok, f"n={n} coordinates, m={m} gauge rows")
    if not dims_ok:
        return rep
    Q = model.gauge
    rep.add("gauge_rank", rank(Q) == m, f"rank(Q)={rank(Q)}, m={m}")
    g = math.gcd(*model.r_weights)
    rep.add("r_charge_gcd", g == 1, f"gcd(c)={g}")
    rep.add("r_degree_positive", model.r_degree > 0, f"d={model.r_degree}")
    rep.add("superpotential_nonzero", not W.is_zero(), f"W = {W}")

    invariant = True
    degs = []
    for row in Q:
        deg = weighted_degree(W, row)
        degs.append(deg)
        invariant &= deg is not ZERO_POLYNOMIAL and deg == 0
    rep.add("superpotential_gauge_invariant", invariant, f"gauge degrees {[_fmt(x) for x in degs]}")
    rdeg = weighted_degree(W, model.r_weights)
    rep.add(
        "superpotential_r_degree",
        rdeg is not ZERO_POLYNOMIAL and rdeg is not None and rdeg == model.r_degree,
        f"C*_R-degree {_fmt(rdeg)}, required d={model.r_degree}",
    )

    gamma = None
    if g == 1 and model.r_degree > 0:
        try:
            gamma = model.gamma()
            rep.add("compatibility", True, f"G cap C*_R = <J>, J={[str(x) for x in gamma.J]} of order {gamma.d}",
                    {"intersection_t": [str(t) for t in gamma.intersection]})
        except CompatibilityError as exc:
            rep.add("compatibility", False, str(exc))
    else:
        rep.add("compatibility", "skip", "R-charge invalid")

    reg = git.is_strongly_regular(Q, model.tau) if rank(Q) == m else None
    if reg is None:
        rep.add("strongly_regular", False, "gauge weights not of full rank")
    else:
        cert = {"violating_support": model.names(reg.witness)} if reg.witness is not None else None
        rep.add("strongly_regular", reg.regular, reg.reason, cert)

    if reg:
        try:
            comps = critical_components(model)
            verdict = nondegeneracy_check(model, comps)
            status = {"compact": "pass", "noncompact": "fail", "unknown": "unknown"}[verdict.overall.value]
            rep.add("nondegenerate", status, f"critical locus quotient is {verdict.overall.value}")
        except StructureError as exc:
            rep.add("nondegenerate", "unknown", str(exc))
    else:
        rep.add("nondegenerate", "skip", "needs a strongly regular phase")

    if gamma is not None and reg:
        good = is_good_lift(gamma, model.theta, model.lift)
        detail = f"lift r_level={model.lift.r_level} is {'good' if good else 'not good'}"
        if model.epsilon is Epsilon.INFINITY:
            rep.add("good_lift", good, detail + " (required for epsilon=infinity)")
        else:
            rep.add("good_lift", "skip", detail + " (not required for epsilon=0+)")
    else:
        rep.add("good_lift", "skip", "needs compatible R-charge and strongly regular phase")
    return rep


def _fmt(x):
    if x is ZERO_POLYNOMIAL:
        return "zero polynomial"
    if x is None:
        return "not quasihomogeneous"
    return str(x)


# --------------------------------------------------------------------------
# critical locus


class ComponentKind(enum.Enum):
    COORDINATE_SUBSPACE = "coordinate_subspace"
    HYPERSURFACE_IN_SUBSPACE = "hypersurface_in_subspace"
    RAW_SYSTEM = "raw_system"


class Compactness(enum.Enum):
    COMPACT = "compact"
    NONCOMPACT = "noncompact"
    UNKNOWN = "unknown"


@dataclass
class CriticalComponent:
    kind: ComponentKind
    support: frozenset
    equations: list[Polynomial]
    survives_semistability: bool
    quotient_compact: Compactness = Compactness.UNKNOWN
    certificate: dict | None = None


@dataclass(frozen=True)
class Structure:
    p: frozenset
    x: frozenset
    spectators: frozenset


def _structure_candidates(W: Polynomial) -> list[frozenset]:
    used = W.used_variables()
    linear = [j for j in sorted(used) if max(e[j] for e in W.terms) <= 1]
    out = []
    for size in range(1, len(linear) + 1):
        for P in combinations(linear, size):
            if all(sum(e[j] for j in P) == 1 for e in W.terms):
                out.append(frozenset(P))
    return out


def _first_nonzero(col):
    return next((x for x in col if x), 0)


def detect_structure(model: ModelInput) -> Structure | None:
    """Split the variables of ``W = sum_j p_j F_j(x)`` into p-like and x-like.

    None when W has no such form; StructureError when the split is ambiguous.
    """
    W = model.superpotential
    used = frozenset(W.used_variables())
    spectators = frozenset(range(model.n)) - used
    candidates = _structure_candidates(W)
    if model.p_variables is not None:
        P = frozenset(model.variables.index(v) for v in model.p_variables)
        if P not in candidates:
            raise StructureError(f"declared p-variables {list(model.p_variables)} do not make W linear in them")
        return Structure(P, used - P, spectators)
    if not candidates:
        return None
    if len(candidates) > 1:
        cols = transpose(model.gauge)
        signed = [
            P for P in candidates
            if all(_first_nonzero(cols[j]) < 0 for j in P) and all(_first_nonzero(cols[j]) > 0 for j in used - P)
        ]
        if len(signed) != 1:
            raise StructureError(
                "ambiguous p-like/x-like split: " + " or ".join(str(model.names(P)) for P in candidates)
            )
        candidates = signed
    P = candidates[0]
    return Structure(P, used - P, spectators)


def _raw_component(model: ModelInput) -> CriticalComponent:
    W = model.superpotential
    eqs = [W.partial(i) for i in range(model.n)]
    return CriticalComponent(
        ComponentKind.RAW_SYSTEM,
        frozenset(range(model.n)),
        [e for e in eqs if not e.is_zero()],
        True,
        Compactness.UNKNOWN,
    )


def critical_components(model: ModelInput, transversality_asserted: bool | None = None) -> list[CriticalComponent]:
    """Decompose crit(W) for ``W = sum p_j F_j`` with transverse F_j.

    Otherwise a single RAW_SYSTEM component carrying all partial derivatives.
    """
    if transversality_asserted is None:
        transversality_asserted = model.transversal
    structure = detect_structure(model)
    if structure is None or not transversality_asserted:
        return [_raw_component(model)]
    W = model.superpotential
    minimal = git.semistable_supports(model.gauge, model.tau)
    x_zero = structure.p | structure.spectators
    p_zero = structure.x | structure.spectators
    Fs = []
    for j in sorted(structure.p):
        F = W.partial(j)
        if F not in Fs:
            Fs.append(F)
    comps = [
        CriticalComponent(ComponentKind.COORDINATE_SUBSPACE, x_zero, [],
                          git.is_semistable_by_family(x_zero, minimal)),
        CriticalComponent(ComponentKind.HYPERSURFACE_IN_SUBSPACE, p_zero, Fs,
                          git.is_semistable_by_family(p_zero, minimal)),
    ]
    for comp in comps:
        witness = nonneg_kernel_vector(model.gauge, comp.support)
        if witness is None:
            comp.quotient_compact = Compactness.COMPACT
            comp.certificate = {"invariant_monomial": None}
        else:
            comp.quotient_compact = Compactness.NONCOMPACT
            comp.certificate = {"invariant_monomial": witness}
    return comps


@dataclass
class NondegeneracyVerdict:
    per_component: list[tuple[CriticalComponent, Compactness]]
    overall: Compactness


def nondegeneracy_check(model: ModelInput, components: Sequence[CriticalComponent]) -> NondegeneracyVerdict:
    """Compactness of the critical locus in the quotient.

    A surviving component is compact iff no nonconstant invariant monomial
    lives on its ambient coordinate subspace (the quotient is then Proj
    over a point).
    """
    per = [(c, c.quotient_compact) for c in components]
    surviving = [v for c, v in per if c.survives_semistability]
    if any(v is Compactness.UNKNOWN for v in surviving):
        overall = Compactness.UNKNOWN
    elif any(v is Compactness.NONCOMPACT for v in surviving):
        overall = Compactness.NONCOMPACT
    else:
        overall = Compactness.COMPACT
    return NondegeneracyVerdict(per, overall)


# --------------------------------------------------------------------------
# sectors


@dataclass(frozen=True)
class Sector:
    gamma: PhaseVector
    fixed_support: frozenset
    age: Fraction
    degree_shift: Fraction
    label: str
    gauge_element: tuple[Fraction, ...]


def age(gamma: Sequence) -> Fraction:
    """Sum of the phases, each taken in [0, 1)."""
    return sum((Fraction(x) % 1 for x in gamma), Fraction(0))


def fixed_support(gamma: Sequence) -> frozenset:
    return frozenset(j for j, x in enumerate(gamma) if Fraction(x) % 1 == 0)


def _j_label(gamma: PhaseVector, model: ModelInput) -> str | None:
    c, d = model.r_weights, model.r_degree
    for k in range(d):
        if phase_vector(Fraction(k * x, d) for x in c) == gamma:
            return f"J^{k}"
    return None


def sectors(model: ModelInput) -> list[Sector]:
    """Twisted sectors: group elements fixing some semistable point."""
    Q = model.gauge
    reg = git.is_strongly_regular(Q, model.tau)
    if not reg:
        raise ValueError(f"sectors need a strongly regular phase: {reg.reason}")
    minimal = git.semistable_supports(Q, model.tau)
    found: dict[PhaseVector, tuple] = {}
    for S in minimal:
        for t in finite_group_elements(submatrix_columns(Q, sorted(S))):
            g = phase_vector(mat_vec(transpose(Q), t))
            found.setdefault(g, t)
    q = model.q
    out = []
    for g, t in found.items():
        fs = fixed_support(g)
        if not git.is_semistable_by_family(fs, minimal):
            continue
        a = age(g)
        out.append([g, fs, a, -2 * a + 2 * q, _j_label(g, model), t])
    out.sort(key=lambda s: (s[2], s[0]))
    extra = 0
    result = []
    for g, fs, a, shift, label, t in out:
        if label is None:
            label = f"g{extra}"
            extra += 1
        result.append(Sector(g, fs, a, shift, label, t))
    return result


# --------------------------------------------------------------------------
# virtual dimension


def central_charge_of(model: ModelInput) -> Fraction:
    return (model.n - model.m) - 2 * model.q


def anticanonical_character(model: ModelInput) -> tuple[int, ...]:
    """Sum of the coordinate characters ``(Q_j, c_j)`` of the parameter torus."""
    return tuple(sum(row) for row in model.gauge) + (sum(model.r_weights),)


def normalize_beta(model: ModelInput, beta) -> RatVector:
    if beta in (0, "0", None):
        return (Fraction(0),) * (model.m + 1)
    beta = tuple(Fraction(x) for x in beta)
    if len(beta) == model.m:
        return beta + (Fraction(0),)
    if len(beta) != model.m + 1:
        raise ValueError(f"beta must have {model.m + 1} entries (gauge characters then R), got {len(beta)}")
    return beta


def integral_c1(model: ModelInput, beta) -> Fraction:
    beta = normalize_beta(model, beta)
    return sum((b * a for b, a in zip(beta, anticanonical_character(model))), Fraction(0))


def virtual_dimension(model: ModelInput, genus: int, marks: int, beta, insertions: Sequence) -> Fraction:
    """``int_beta c1 + (chat - 3)(1 - g) + k - sum_i (age(gamma_i) - q)``.

    Insertions are Sectors or phase vectors.
    """
    if len(insertions) != marks:
        raise ValueError(f"{marks} marked points but {len(insertions)} insertions")
    if genus < 0 or marks < 0:
        raise ValueError("genus and number of marks must be nonnegative")
    q = model.q
    ages = [ins.age if isinstance(ins, Sector) else age(ins) for ins in insertions]
    return (
        integral_c1(model, beta)
        + (central_charge_of(model) - 3) * (1 - genus)
        + marks
        - sum((a - q for a in ages), Fraction(0))
    )


def lookup_sector(model: ModelInput, name: str) -> Sector:
    """Find a sector by label (``J^k``, ``g<i>``), ``J``, ``1``/``id``."""
    key = name.strip()
    if key == "J":
        key = "J^1"
    if key in ("1", "id", "identity", "e"):
        key = "J^0"
    secs = sectors(model)
    for s in secs:
        if s.label == key:
            return s
    raise KeyError(f"no sector labelled {name!r}; available: {[s.label for s in secs]}")


# --------------------------------------------------------------------------
# fixed loci of an extra C* action


@dataclass(frozen=True)
class FixedLocus:
    component: str
    support: frozenset
    equations: tuple[Polynomial, ...]


def _is_fixed(Q, w, S) -> bool:
    S = sorted(S)
    if not S:
        return True
    return in_row_span(submatrix_columns(Q, S), [w[j] for j in S])


def fixed_loci(model: ModelInput, extra_action: Sequence[int]) -> list[FixedLocus]:
    """Components of the semistable critical locus fixed by an extra diagonal C*.

    A point with support S is fixed modulo G iff the extra weights restricted
    to S are a rational combination of the gauge rows restricted to S.
    """
    w = tuple(int(x) for x in extra_action)
    if len(w) != model.n:
        raise ValueError(f"extra action has {len(w)} weights for {model.n} coordinates")
    Q = model.gauge
    minimal = git.semistable_supports(Q, model.tau)
    comps = critical_components(model)
    loci: list[FixedLocus] = []
    for comp in comps:
        if not comp.survives_semistability:
            continue
        U = sorted(comp.support)
        if len(U) > 20:
            raise ValueError("component support too large for exhaustive fixed-locus search")
        good = []
        for size in range(len(U), -1, -1):
            for S in combinations(U, size):
                fs = frozenset(S)
                if any(fs < T for T in good):
                    continue
                if git.is_semistable_by_family(fs, minimal) and _is_fixed(Q, w, fs):
                    good.append(fs)
        for S in good:
            eqs = []
            for F in comp.equations:
                R = F.restrict(S)
                if not R.is_zero() and R not in eqs:
                    eqs.append(R)
            locus = FixedLocus(comp.kind.value, S, tuple(eqs))
            if all((L.support, L.equations) != (locus.support, locus.equations) for L in loci):
                loci.append(locus)
    loci = [
        L for L in loci
        if not any(L.support < M.support and not M.equations for M in loci)
    ]
    loci.sort(key=lambda L: (sorted(set(range(model.n)) - L.support), len(L.equations)))
    return loci


def locus_string(model: ModelInput, support, equations=()) -> str:
    """``{x1=x2=0, F=0}``-style description of a coordinate subspace and equations."""
    vanish = [model.variables[j] for j in range(model.n) if j not in support]
    parts = []
    if vanish:
        parts.append("=".join(vanish) + "=0")
    parts.extend(f"{eq}=0" for eq in equations)
    return "{" + ", ".join(parts) + "}" if parts else "V"
