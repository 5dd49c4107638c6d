"""Tiny evaluator for exact-form strings such as ``3^5*sqrt(13)/(2^3*11^6)``.

The grammar is integers, names bound in ``env``, ``+ - * /``, ``^`` (or
``**``) with an exponent that is a constant rational expression, unary
minus, and ``sqrt(...)``.  The same string can be evaluated as a float or as
a certified :class:`Interval`, which is how the exceptional-table constants
and the CLI's exact-form output round-trip.
"""

from __future__ import annotations

import ast
import math
from fractions import Fraction
from typing import Mapping

from .interval import DEFAULT_PREC, Interval, Mode, RatLike, as_rat, iv_rpow, iv_sqrt

_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def parse(expr: str) -> ast.Expression:
    tree = ast.parse(expr.replace("^", "**"), mode="eval")
    for node in ast.walk(tree):
        ok = isinstance(
            node,
            (ast.Expression, ast.BinOp, ast.UnaryOp, ast.USub, ast.UAdd, ast.Name,
             ast.Load, ast.Call, ast.Constant) + _BINOPS,
        )
        if not ok:
            raise ValueError(f"unsupported syntax in {expr!r}: {type(node).__name__}")
        if isinstance(node, ast.Constant) and (
            isinstance(node.value, bool) or not isinstance(node.value, int)
        ):
            raise ValueError(f"only integer literals are allowed in {expr!r}")
        if isinstance(node, ast.Call):
            if not (isinstance(node.func, ast.Name) and node.func.id == "sqrt"
                    and len(node.args) == 1 and not node.keywords):
                raise ValueError(f"only sqrt(x) calls are allowed in {expr!r}")
    return tree


def _const(node) -> Fraction:
    """Exact value of a constant (name-free, sqrt-free) exponent."""
    if isinstance(node, ast.Constant):
        return Fraction(node.value)
    if isinstance(node, ast.UnaryOp):
        v = _const(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a, b = _const(node.left), _const(node.right)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
        if isinstance(node.op, ast.Pow) and b.denominator == 1:
            return a ** int(b)
    raise ValueError("exponents must be constant rational expressions")


class _Eval:
    def __init__(self, env, mode: Mode, prec: int):
        self.env = env
        self.mode = mode
        self.prec = prec

    def lift(self, q: Fraction):
        return float(q) if self.mode is Mode.FLOAT64 else Interval.point(q)

    def __call__(self, node):
        if isinstance(node, ast.Expression):
            return self(node.body)
        if isinstance(node, ast.Constant):
            return self.lift(Fraction(node.value))
        if isinstance(node, ast.Name):
            if node.id not in self.env:
                raise KeyError(f"unbound name {node.id!r}")
            return self.lift(self.env[node.id])
        if isinstance(node, ast.UnaryOp):
            v = self(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Call):
            v = self(node.args[0])
            if self.mode is Mode.FLOAT64:
                return math.sqrt(v)
            return iv_sqrt(v, self.prec)
        if isinstance(node.op, ast.Pow):
            base = self(node.left)
            e = _const(node.right)
            if self.mode is Mode.FLOAT64:
                return base ** (int(e) if e.denominator == 1 else float(e))
            return iv_rpow(base, e, self.prec)
        a, b = self(node.left), self(node.right)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        return a / b


def evaluate(
    expr: str,
    env: Mapping[str, RatLike] | None = None,
    mode: Mode = Mode.CERTIFIED,
    prec: int = DEFAULT_PREC,
):
    """Evaluate ``expr``; returns a float or an :class:`Interval`."""
    env = {k: as_rat(v) for k, v in (env or {}).items()}
    return _Eval(env, Mode.parse(mode), prec)(parse(expr))
