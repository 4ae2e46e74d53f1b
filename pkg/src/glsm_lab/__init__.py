"""Exact combinatorics for abelian gauged linear sigma models."""

from __future__ import annotations

from .analyzer import (
    Epsilon,
    ModelInput,
    critical_components,
    fixed_loci,
    nondegeneracy_check,
    sectors,
    validate_model,
    virtual_dimension,
)
from .gamma import RCharge, build_gamma, central_charge, good_lifts, is_good_lift, rcharge_shift
from .git import chambers, is_strongly_regular, semistable_supports, unstable_subspaces
from .modelfile import dump, load, parse_model_text
from .poly import Polynomial, parse

__version__ = "0.1.0"

__all__ = [
    "Epsilon", "ModelInput", "Polynomial", "RCharge", "build_gamma", "central_charge", "chambers",
    "critical_components", "dump", "fixed_loci", "good_lifts", "is_good_lift", "is_strongly_regular",
    "load", "nondegeneracy_check", "parse", "parse_model_text", "rcharge_shift", "sectors",
    "semistable_supports", "unstable_subspaces", "validate_model", "virtual_dimension",
]
