"""Exact rational and certified interval arithmetic."""

from .interval import (
    DEFAULT_PREC,
    MAX_PREC,
    Comparison,
    Interval,
    Mode,
    Rat,
    RatLike,
    Scalar,
    as_rat,
    certify_compare,
    iroot,
    iv_arith,
    iv_pow,
    iv_root,
    iv_rpow,
    iv_sqrt,
    refine_until,
)
from .expr import evaluate

__all__ = [
    "DEFAULT_PREC", "MAX_PREC", "Comparison", "Interval", "Mode", "Rat", "RatLike", "Scalar",
    "as_rat", "certify_compare", "evaluate", "iroot", "iv_arith", "iv_pow",
    "iv_root", "iv_rpow", "iv_sqrt", "refine_until",
]
