"""Exact tensor calculus and curvature-structure classification for diagonal metrics."""

from .expr import Expr, FracExpr, FuncAtom, differentiate, evaluate
from .parser import ExprSyntaxError, UnknownSymbolError, parse_expr
from .tensor import MetricData, Tensor

__all__ = [
    "Expr",
    "FracExpr",
    "FuncAtom",
    "differentiate",
    "evaluate",
    "parse_expr",
    "ExprSyntaxError",
    "UnknownSymbolError",
    "MetricData",
    "Tensor",
]

__version__ = "0.1.0"
