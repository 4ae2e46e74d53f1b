"""Reading and writing declarative TOML model files."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .analyzer import Epsilon, ModelInput
from .linalg import as_fraction
from .poly import PolynomialSyntaxError, parse
from .qmaps import DualGraph, QmapNumericalData


class ModelFileError(ValueError):
    pass


@dataclass(frozen=True)
class GraphSpec:
    graph: DualGraph
    b: int | None = None
    base_points: tuple[int, ...] | None = None
    lift_degrees: tuple[Fraction, ...] | None = None
    a_degrees: tuple[Fraction, ...] | None = None

    def data(self) -> QmapNumericalData:
        """Numerical data; missing lift degrees default to the LG normalisation."""
        V = self.graph.n_vertices
        D = self.base_points if self.base_points is not None else (0,) * V
        if self.lift_degrees is None and self.a_degrees is None and self.b is not None:
            return QmapNumericalData.lg(self.graph, self.b, D)
        lift = self.lift_degrees if self.lift_degrees is not None else tuple(Fraction(x) for x in D)
        return QmapNumericalData(tuple(D), tuple(lift), self.a_degrees, self.b)


@dataclass(frozen=True)
class ModelDocument:
    model: ModelInput
    graph: GraphSpec | None = None


def _rational(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ModelFileError(f"{where}: expected a rational, got a boolean")
    if isinstance(value, float):
        raise ModelFileError(f"{where}: float literal {value!r} not accepted, write an integer or 'a/b'")
    try:
        return as_fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ModelFileError(f"{where}: {exc}") from exc


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ModelFileError(f"{where}: expected an integer, got {value!r}")
    return value


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        raise ModelFileError(f"{where}: expected a list, got {value!r}")
    return value


def _require(table: dict, key: str, section: str):
    if key not in table:
        raise ModelFileError(f"[{section}] is missing required key {key!r}")
    return table[key]


_MODEL_KEYS = {
    "name", "variables", "gauge_weights", "r_weights", "r_degree", "superpotential", "theta",
    "epsilon", "lift_r_level", "transversal", "p_variables", "extra_action",
}
_GRAPH_KEYS = {"genera", "markings", "edges", "b", "base_points", "lift_degrees", "a_degrees"}


def parse_model_text(text: str) -> ModelDocument:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ModelFileError(f"TOML parse error: {exc}") from exc
    if "model" not in doc:
        raise ModelFileError("missing [model] section")
    unknown = set(doc) - {"model", "graph"}
    if unknown:
        raise ModelFileError(f"unknown section(s): {sorted(unknown)}")
    t = doc["model"]
    extra = set(t) - _MODEL_KEYS
    if extra:
        raise ModelFileError(f"[model] has unknown key(s): {sorted(extra)}")
    variables = tuple(str(v) for v in _list(_require(t, "variables", "model"), "variables"))
    if len(set(variables)) != len(variables):
        raise ModelFileError("variables: duplicate names")
    rows = _list(_require(t, "gauge_weights", "model"), "gauge_weights")
    if not rows:
        raise ModelFileError("gauge_weights: need at least one row")
    gauge = []
    for i, row in enumerate(rows):
        row = _list(row, f"gauge_weights[{i}]")
        if len(row) != len(variables):
            raise ModelFileError(f"gauge_weights[{i}] has {len(row)} entries for {len(variables)} variables")
        gauge.append(tuple(_int(x, f"gauge_weights[{i}]") for x in row))
    r_weights = tuple(_int(x, "r_weights") for x in _list(_require(t, "r_weights", "model"), "r_weights"))
    if len(r_weights) != len(variables):
        raise ModelFileError(f"r_weights has {len(r_weights)} entries for {len(variables)} variables")
    r_degree = _int(_require(t, "r_degree", "model"), "r_degree")
    w_text = _require(t, "superpotential", "model")
    if not isinstance(w_text, str):
        raise ModelFileError("superpotential: expected a string")
    try:
        W = parse(w_text, variables)
    except PolynomialSyntaxError as exc:
        raise ModelFileError(f"superpotential: {exc}") from exc
    theta = tuple(_rational(x, "theta") for x in _list(_require(t, "theta", "model"), "theta"))
    if len(theta) != len(gauge):
        raise ModelFileError(f"theta has {len(theta)} entries for {len(gauge)} gauge rows")
    try:
        eps = Epsilon.parse(t.get("epsilon", "0+"))
    except ValueError as exc:
        raise ModelFileError(str(exc)) from exc
    lift = t.get("lift_r_level")
    lift = None if lift is None else _rational(lift, "lift_r_level")
    transversal = t.get("transversal", False)
    if not isinstance(transversal, bool):
        raise ModelFileError("transversal: expected true or false")
    pvars = t.get("p_variables")
    if pvars is not None:
        pvars = tuple(str(v) for v in _list(pvars, "p_variables"))
        missing = [v for v in pvars if v not in variables]
        if missing:
            raise ModelFileError(f"p_variables: unknown variable(s) {missing}")
    action = t.get("extra_action")
    if action is not None:
        action = tuple(_int(x, "extra_action") for x in _list(action, "extra_action"))
        if len(action) != len(variables):
            raise ModelFileError(f"extra_action has {len(action)} entries for {len(variables)} variables")
    model = ModelInput(
        variables=variables,
        gauge=tuple(gauge),
        r_weights=r_weights,
        r_degree=r_degree,
        superpotential=W,
        theta=theta,
        epsilon=eps,
        lift_r_level=lift,
        transversal=transversal,
        p_variables=pvars,
        extra_action=action,
        name=str(t.get("name", "")),
    )
    graph = _parse_graph(doc["graph"]) if "graph" in doc else None
    return ModelDocument(model, graph)


def _parse_graph(t: dict) -> GraphSpec:
    extra = set(t) - _GRAPH_KEYS
    if extra:
        raise ModelFileError(f"[graph] has unknown key(s): {sorted(extra)}")
    genera = [_int(x, "genera") for x in _list(_require(t, "genera", "graph"), "genera")]
    V = len(genera)
    markings = t.get("markings", [0] * V)
    marks = []
    for ms in _list(markings, "markings"):
        marks.append(_int(ms, "markings") if isinstance(ms, int) else [str(x) for x in _list(ms, "markings")])
    edges = []
    for e in _list(t.get("edges", []), "edges"):
        e = _list(e, "edges")
        if len(e) != 2:
            raise ModelFileError(f"edges: {e!r} is not a vertex pair")
        edges.append((_int(e[0], "edges"), _int(e[1], "edges")))
    try:
        graph = DualGraph.build(genera, marks, edges)
    except ValueError as exc:
        raise ModelFileError(f"[graph]: {exc}") from exc

    def per_vertex(key, conv):
        if key not in t:
            return None
        vals = _list(t[key], key)
        if len(vals) != V:
            raise ModelFileError(f"{key} has {len(vals)} entries for {V} vertices")
        return tuple(conv(x, key) for x in vals)

    b = t.get("b")
    return GraphSpec(
        graph,
        None if b is None else _int(b, "b"),
        per_vertex("base_points", _int),
        per_vertex("lift_degrees", _rational),
        per_vertex("a_degrees", _rational),
    )


def load(path) -> ModelDocument:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise ModelFileError(f"model file not found: {path}") from exc
    return parse_model_text(text)


# --------------------------------------------------------------------------
# writing


def _toml_str(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _toml_rat(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else _toml_str(str(x))


def _toml_list(items) -> str:
    return "[" + ", ".join(items) + "]"


def dump(model: ModelInput, graph: GraphSpec | None = None) -> str:
    """Serialise back to the model-file format (``parse_model_text`` inverse)."""
    lines = ["[model]"]
    if model.name:
        lines.append(f"name = {_toml_str(model.name)}")
    lines.append(f"variables = {_toml_list(_toml_str(v) for v in model.variables)}")
    lines.append("gauge_weights = [" + ", ".join(_toml_list(map(str, row)) for row in model.gauge) + "]")
    lines.append(f"r_weights = {_toml_list(map(str, model.r_weights))}")
    lines.append(f"r_degree = {model.r_degree}")
    lines.append(f"superpotential = {_toml_str(str(model.superpotential))}")
    lines.append(f"theta = {_toml_list(_toml_rat(x) for x in model.theta)}")
    lines.append(f"epsilon = {_toml_str(model.epsilon.value)}")
    if model.lift_r_level is not None:
        lines.append(f"lift_r_level = {_toml_rat(model.lift_r_level)}")
    lines.append(f"transversal = {'true' if model.transversal else 'false'}")
    if model.p_variables is not None:
        lines.append(f"p_variables = {_toml_list(_toml_str(v) for v in model.p_variables)}")
    if model.extra_action is not None:
        lines.append(f"extra_action = {_toml_list(map(str, model.extra_action))}")
    if graph is not None:
        G = graph.graph
        lines += ["", "[graph]"]
        lines.append(f"genera = {_toml_list(map(str, G.genera))}")
        lines.append(
            "markings = [" + ", ".join(_toml_list(_toml_str(x) for x in ms) for ms in G.markings) + "]"
        )
        lines.append("edges = [" + ", ".join(f"[{a}, {b}]" for a, b in G.edges) + "]")
        if graph.b is not None:
            lines.append(f"b = {graph.b}")
        if graph.base_points is not None:
            lines.append(f"base_points = {_toml_list(map(str, graph.base_points))}")
        if graph.lift_degrees is not None:
            lines.append(f"lift_degrees = {_toml_list(_toml_rat(x) for x in graph.lift_degrees)}")
        if graph.a_degrees is not None:
            lines.append(f"a_degrees = {_toml_list(_toml_rat(x) for x in graph.a_degrees)}")
    return "\n".join(lines) + "\n"
