"""Certified Jacobian bounds for barycenter maps of rank-one symmetric spaces."""

from .bounds import (
    BoundReport,
    Certification,
    CubicPoly,
    Formula,
    SpaceParams,
    bcg_bound,
    build_Q,
    eval_P2,
    eval_P_reduced,
    eval_Q,
    jacobian_bound,
    objective_f,
    seq_C,
    seq_C_limit,
)
from .exact import Interval, Mode, Scalar

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "Certification", "CubicPoly", "Formula", "Interval", "Mode", "Scalar",
    "SpaceParams", "bcg_bound", "build_Q", "eval_P2", "eval_P_reduced", "eval_Q",
    "jacobian_bound", "objective_f", "seq_C", "seq_C_limit",
]
