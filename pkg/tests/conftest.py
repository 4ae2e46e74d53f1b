from __future__ import annotations

from fractions import Fraction

import pytest

from glsm_lab.analyzer import Epsilon, ModelInput
from glsm_lab.cli import BUNDLED_FIXTURES
from glsm_lab.modelfile import load
from glsm_lab.poly import parse

QUINTIC_Q = ((1, 1, 1, 1, 1, -5),)
QUINTIC_VARS = ("x1", "x2", "x3", "x4", "x5", "p")
QUINTIC_W = "p*(x1^5 + x2^5 + x3^5 + x4^5 + x5^5)"
GGS_Q = ((1, 1, 1, 1, 1, -5, 3, 0), (0, 0, 0, 0, 0, 0, 1, 1))
GGS_VARS = ("x1", "x2", "x3", "x4", "x5", "p", "z0", "z1")


def make_model(variables, gauge, c, d, W, theta, **kw) -> ModelInput:
    return ModelInput(
        variables=tuple(variables),
        gauge=tuple(tuple(r) for r in gauge),
        r_weights=tuple(c),
        r_degree=d,
        superpotential=parse(W, variables),
        theta=tuple(Fraction(x) for x in theta),
        **kw,
    )


def quintic(phase: str = "geometric", **kw) -> ModelInput:
    if phase == "geometric":
        c, d, theta = (0, 0, 0, 0, 0, 1), 1, (-1,)
    else:
        c, d, theta = (1, 1, 1, 1, 1, 0), 5, (1,)
    kw.setdefault("transversal", True)
    return make_model(QUINTIC_VARS, QUINTIC_Q, c, d, QUINTIC_W, theta, **kw)


def fixture(name: str):
    return load(BUNDLED_FIXTURES / f"{name}.toml")


def names(model, S):
    return sorted(model.variables[j] for j in S)


@pytest.fixture
def quintic_geometric():
    return quintic("geometric")


@pytest.fixture
def quintic_lg():
    return quintic("lg", epsilon=Epsilon.INFINITY)


@pytest.fixture
def ggs():
    return fixture("generalized_graph_space").model
