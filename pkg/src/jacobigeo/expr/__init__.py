"""Symbolic scalar expressions: construction, parsing, printing, calculus, evaluation."""
from .core import (
    EvaluationSingularity, Expr, ExprError, FUNCTIONS, KINDS, MINUS_ONE, ONE, ZERO,
    add, as_expr, const, coord, cos, diff, div, evaluate, exp, expand, free_coords,
    ln, mul, neg, power, record_derivatives, simplify, sin, sub,
)
from .kernels import backend, compile_exprs, evaluate_many, run_program
from .parser import ExprSyntaxError, UnknownIdentifier, parse
from .printing import to_string

__all__ = [
    "EvaluationSingularity", "Expr", "ExprError", "ExprSyntaxError", "FUNCTIONS",
    "KINDS", "MINUS_ONE", "ONE", "UnknownIdentifier", "ZERO", "add", "as_expr",
    "backend", "compile_exprs", "const", "coord", "cos", "diff", "div", "evaluate",
    "evaluate_many", "exp", "expand", "free_coords", "ln", "mul", "neg", "parse",
    "power", "record_derivatives", "run_program", "simplify", "sin", "sub",
    "to_string",
]
