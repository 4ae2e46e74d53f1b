"""Numerical shadow of LG-quasimaps on dual graphs.

A vertex carries its genus and marking labels; edges are unordered pairs
(self-loops allowed).  For the hybrid LG family the line bundle A with
``A^b = omega_log(-D)`` has per-vertex degree ``(wlog_v - D_v) / b`` and,
with the chosen normalisation of the lift, ``deg u*(L) = D_v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product
from typing import Iterator, Sequence

from .analyzer import Epsilon


class DegreeRelationError(ValueError):
    pass


@dataclass(frozen=True)
class DualGraph:
    genera: tuple[int, ...]
    markings: tuple[tuple[str, ...], ...]
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        V = len(self.genera)
        if V == 0:
            raise ValueError("a dual graph needs at least one vertex")
        if len(self.markings) != V:
            raise ValueError(f"{len(self.markings)} marking lists for {V} vertices")
        if any(g < 0 for g in self.genera):
            raise ValueError("vertex genera must be nonnegative")
        labels = [x for ms in self.markings for x in ms]
        if len(set(labels)) != len(labels):
            raise ValueError("marking labels must be distinct")
        for a, b in self.edges:
            if not (0 <= a < V and 0 <= b < V):
                raise ValueError(f"edge ({a}, {b}) refers to a missing vertex")
        if not self.is_connected():
            raise ValueError("dual graph must be connected")

    @classmethod
    def build(cls, genera, markings, edges=()) -> DualGraph:
        """Markings may be counts per vertex; labels are then 1, 2, ..."""
        marks = []
        counter = 1
        for ms in markings:
            if isinstance(ms, int):
                marks.append(tuple(str(counter + i) for i in range(ms)))
                counter += ms
            else:
                marks.append(tuple(str(x) for x in ms))
        return cls(
            tuple(int(g) for g in genera),
            tuple(marks),
            tuple(tuple(sorted((int(a), int(b)))) for a, b in edges),
        )

    @property
    def n_vertices(self) -> int:
        return len(self.genera)

    @property
    def n_marks(self) -> int:
        return sum(len(ms) for ms in self.markings)

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for a, b in self.edges:
                for x, y in ((a, b), (b, a)):
                    if x == v and y not in seen:
                        seen.add(y)
                        stack.append(y)
        return len(seen) == self.n_vertices

    @property
    def betti(self) -> int:
        return len(self.edges) - self.n_vertices + 1

    @property
    def total_genus(self) -> int:
        return sum(self.genera) + self.betti

    def edge_ends(self, v: int) -> int:
        return sum((a == v) + (b == v) for a, b in self.edges)

    def special_points(self, v: int) -> int:
        return len(self.markings[v]) + self.edge_ends(v)

    def canonical_form(self) -> tuple:
        """Isomorphism invariant key (brute force over vertex orderings)."""
        best = None
        for perm in permutations(range(self.n_vertices)):
            inv = {old: new for new, old in enumerate(perm)}
            key = (
                tuple(self.genera[old] for old in perm),
                tuple(tuple(sorted(self.markings[old])) for old in perm),
                tuple(sorted(tuple(sorted((inv[a], inv[b]))) for a, b in self.edges)),
            )
            if best is None or key < best:
                best = key
        return best


def omega_log_degrees(G: DualGraph) -> tuple[Fraction, ...]:
    """``2 g_v - 2 + n_v`` with n_v = markings plus edge ends at v."""
    return tuple(Fraction(2 * g - 2 + G.special_points(v)) for v, g in enumerate(G.genera))


def is_dm_stable(G: DualGraph) -> bool:
    return all(w > 0 for w in omega_log_degrees(G))


@dataclass(frozen=True)
class QmapNumericalData:
    base_degrees: tuple[int, ...]
    lift_degrees: tuple[Fraction, ...]
    a_degrees: tuple[Fraction, ...] | None = None
    b: int | None = None

    def __post_init__(self):
        if any(D < 0 for D in self.base_degrees):
            raise ValueError("base-point degrees must be nonnegative")

    @classmethod
    def lg(cls, G: DualGraph, b: int, base_degrees: Sequence[int]) -> QmapNumericalData:
        """Hybrid LG data: ``b deg A = wlog - D`` and ``deg u*(L) = D``."""
        D = tuple(int(x) for x in base_degrees)
        w = omega_log_degrees(G)
        return cls(D, tuple(Fraction(x) for x in D), tuple((wv - d) / b for wv, d in zip(w, D)), b)


@dataclass(frozen=True)
class VertexDiagnostic:
    vertex: int
    genus: int
    special_points: int
    wlog: Fraction
    base_degree: int
    lift_degree: Fraction
    ok: bool
    reasons: tuple[str, ...]


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    epsilon: Epsilon
    vertices: tuple[VertexDiagnostic, ...]
    global_reasons: tuple[str, ...] = ()


def check_degree_relation(G: DualGraph, data: QmapNumericalData) -> None:
    V = G.n_vertices
    if len(data.base_degrees) != V or len(data.lift_degrees) != V:
        raise DegreeRelationError(f"data must have one entry per vertex ({V})")
    if data.a_degrees is None or data.b is None:
        return
    if len(data.a_degrees) != V:
        raise DegreeRelationError(f"data must have one entry per vertex ({V})")
    for v, (w, A, D) in enumerate(zip(omega_log_degrees(G), data.a_degrees, data.base_degrees)):
        if data.b * Fraction(A) != w - D:
            raise DegreeRelationError(
                f"vertex {v}: b*degA = {data.b * Fraction(A)} but wlog - D = {w - D}"
            )


def _vertex_reasons(g: int, sp: int, w: Fraction, D: int, L: Fraction, epsilon: Epsilon) -> list[str]:
    reasons = []
    if epsilon is Epsilon.ZERO_PLUS:
        if g == 0 and sp < 2:
            reasons.append(f"rational component with {sp} special point(s), needs 2")
        if w == 0 and L <= 0:
            reasons.append("wlog = 0 component needs positive lift degree (a base point)")
    else:
        if D:
            reasons.append(f"{D} base point(s)")
        if L < 0:
            reasons.append("negative lift degree")
        elif L == 0 and w <= 0:
            reasons.append("lift degree 0 on a component where wlog is not ample")
    return reasons


def check_stability(G: DualGraph, data: QmapNumericalData, epsilon: Epsilon) -> StabilityVerdict:
    check_degree_relation(G, data)
    wlog = omega_log_degrees(G)
    diags = []
    glob = []
    if epsilon is Epsilon.INFINITY and sum(data.base_degrees):
        glob.append(f"{sum(data.base_degrees)} base points, none allowed")
    for v, g in enumerate(G.genera):
        sp = G.special_points(v)
        w, D, L = wlog[v], data.base_degrees[v], Fraction(data.lift_degrees[v])
        reasons = _vertex_reasons(g, sp, w, D, L, epsilon)
        diags.append(VertexDiagnostic(v, g, sp, w, D, L, not reasons, tuple(reasons)))
    stable = not glob and all(d.ok for d in diags)
    return StabilityVerdict(stable, epsilon, tuple(diags), tuple(glob))


def enumerate_lg_configs(G: DualGraph, b: int, epsilon: Epsilon, max_degree: int) -> list[QmapNumericalData]:
    """Stable hybrid-LG data with base degrees in ``[0, max_degree]``.

    Ordered lexicographically in ``(D_0, D_1, ...)``.  Stability is a
    per-vertex condition, so the admissible degrees are found vertex by
    vertex and then combined.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    if b <= 0:
        raise ValueError("b must be positive")
    wlog = omega_log_degrees(G)
    allowed = [
        [D for D in range(max_degree + 1)
         if not _vertex_reasons(g, G.special_points(v), wlog[v], D, Fraction(D), epsilon)]
        for v, g in enumerate(G.genera)
    ]
    return [QmapNumericalData.lg(G, b, D) for D in product(*allowed)]


def classify_infty_lg(G: DualGraph, data: QmapNumericalData) -> bool:
    """At epsilon = infinity the LG data lives on a DM-stable curve."""
    if not check_stability(G, data, Epsilon.INFINITY).stable:
        raise ValueError("data is not infinity-stable")
    return is_dm_stable(G)


def degree_balance(G: DualGraph, data: QmapNumericalData) -> tuple[Fraction, int]:
    """``(sum_v b deg A_v + sum_v D_v, 2g - 2 + k)``; equal for consistent data."""
    lhs = sum((data.b * Fraction(A) for A in data.a_degrees), Fraction(0)) + sum(data.base_degrees)
    return lhs, 2 * G.total_genus - 2 + G.n_marks


# --------------------------------------------------------------------------
# graph enumeration


def enumerate_dual_graphs(max_vertices: int, max_genus: int, max_marks: int) -> Iterator[DualGraph]:
    """Connected dual graphs up to isomorphism, with labelled markings.

    Every graph with at most ``max_vertices`` vertices, total genus at most
    ``max_genus`` and at most ``max_marks`` markings is produced once.
    """
    seen = set()
    for V in range(1, max_vertices + 1):
        pairs = [(a, b) for a in range(V) for b in range(a, V)]
        for n_edges in range(V - 1, V + max_genus):
            for edges in combinations_with_replacement(pairs, n_edges):
                betti = n_edges - V + 1
                try:
                    probe = DualGraph((0,) * V, ((),) * V, edges)
                except ValueError:
                    continue
                del probe
                for genera in product(range(max_genus - betti + 1), repeat=V):
                    if sum(genera) + betti > max_genus:
                        continue
                    for k in range(max_marks + 1):
                        for where in product(range(V), repeat=k):
                            marks = [[] for _ in range(V)]
                            for label, v in enumerate(where, start=1):
                                marks[v].append(str(label))
                            G = DualGraph(tuple(genera), tuple(tuple(m) for m in marks), edges)
                            key = G.canonical_form()
                            if key not in seen:
                                seen.add(key)
                                yield G
