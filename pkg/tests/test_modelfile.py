from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glsm_lab.cli import BUNDLED_FIXTURES, bundled_fixtures
from glsm_lab.modelfile import ModelFileError, dump, load, parse_model_text

BASE = """
[model]
variables = ["x1", "x2", "p"]
gauge_weights = [[1, 1, -2]]
r_weights = [0, 0, 1]
r_degree = 1
superpotential = "p*(x1^2 + x2^2)"
theta = [-1]
"""


def test_minimal_model_defaults():
    doc = parse_model_text(BASE)
    m = doc.model
    assert m.epsilon.value == "0+" and m.lift_r_level is None and not m.transversal
    assert doc.graph is None


@pytest.mark.parametrize("name", bundled_fixtures())
def test_fixture_round_trip(name):
    doc = load(BUNDLED_FIXTURES / f"{name}.toml")
    again = parse_model_text(dump(doc.model, doc.graph))
    assert again == doc
    assert dump(again.model, again.graph) == dump(doc.model, doc.graph)


@pytest.mark.parametrize(
    "patch, message",
    [
        (("theta = [-1]", "theta = [-0.5]"), "float"),
        (("theta = [-1]", 'theta = ["1.5"]'), "theta"),
        (("theta = [-1]", "theta = [-1, 2]"), "theta has 2 entries"),
        (("[[1, 1, -2]]", "[[1, 1]]"), "gauge_weights[0]"),
        (('"p*(x1^2 + x2^2)"', '"p*(x1^2 + y^2)"'), "unknown variable"),
        (("r_degree = 1", "r_degree = 1.0"), "r_degree"),
        (("r_degree = 1", ""), "missing required key 'r_degree'"),
        (("theta = [-1]", "theta = [-1]\nfoo = 3"), "unknown key"),
        (("theta = [-1]", 'theta = [-1]\nepsilon = "1/2"'), "epsilon"),
        (("theta = [-1]", "theta = [-1]\nextra_action = [1]"), "extra_action"),
    ],
)
def test_semantic_errors(patch, message):
    old, new = patch
    with pytest.raises(ModelFileError) as exc:
        parse_model_text(BASE.replace(old, new))
    assert message in str(exc.value)


def test_toml_syntax_error_has_position():
    with pytest.raises(ModelFileError) as exc:
        parse_model_text(BASE + "broken = [1,,2]\nother = 3\n")
    assert "line" in str(exc.value) and "column" in str(exc.value)


def test_missing_file(tmp_path):
    with pytest.raises(ModelFileError):
        load(tmp_path / "nope.toml")


def test_graph_section():
    doc = parse_model_text(BASE + "\n[graph]\ngenera = [1, 0]\nmarkings = [1, [\"a\", \"b\"]]\nedges = [[0, 1]]\nb = 2\n")
    G = doc.graph.graph
    assert G.markings == (("1",), ("a", "b"))
    data = doc.graph.data()
    assert data.base_degrees == (0, 0) and data.a_degrees == (Fraction(1), Fraction(1, 2))
    with pytest.raises(ModelFileError):
        parse_model_text(BASE + "\n[graph]\ngenera = [0, 0]\nedges = []\n")


rat = st.fractions(min_value=-9, max_value=9, max_denominator=9)


@given(st.lists(rat, min_size=1, max_size=1), st.one_of(st.none(), rat), st.booleans(),
       st.sampled_from(["0+", "infinity"]))
@settings(max_examples=60, deadline=None)
def test_round_trip_property(theta, lift, transversal, eps):
    text = BASE.replace("theta = [-1]", "theta = [" + ", ".join(f'"{x}"' for x in theta) + "]")
    text += f'epsilon = "{eps}"\ntransversal = {"true" if transversal else "false"}\n'
    if lift is not None:
        text += f'lift_r_level = "{lift}"\n'
    doc = parse_model_text(text)
    assert parse_model_text(dump(doc.model)).model == doc.model
