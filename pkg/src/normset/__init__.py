"""Exact norms on the space defined by the norming set W_{0,1} and finite experiments around them."""

from .core import (ANY, DEFAULT_SPACE, EMPTY, Avg, AvgClass, FinVec, Leaf, Sch, SchClass, SpaceSpec,
                   evaluate, format_tree, parse_tree, validate)
from .engine import Engine, NormResult, best_value, brute_force, brute_force_norm, norm

__version__ = "0.1.0"

__all__ = [
    "ANY", "DEFAULT_SPACE", "EMPTY", "Avg", "AvgClass", "FinVec", "Leaf", "Sch", "SchClass", "SpaceSpec",
    "evaluate", "format_tree", "parse_tree", "validate",
    "Engine", "NormResult", "best_value", "brute_force", "brute_force_norm", "norm",
]
