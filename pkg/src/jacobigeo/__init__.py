"""Symbolic-numeric verification of Jacobi structures and their contravariant geometry.

Tensor fields are built from exact expressions on a coordinate chart; identities
are checked by evaluating residuals at seeded sample points.
"""
from .expr import Expr, backend, diff, evaluate, parse, simplify
from .jacobi_algebroid import JacobiData, is_jacobi, lambda_bracket
from .manifold import (Chart, EndoField, Form, GeometryError, MetricField, Multivector, OneForm,
                       VectorField)
from .metric_connection import MetricPackage, build_package, contravariant_D
from .report import CheckContext, CheckReport

__version__ = "0.1.0"

__all__ = [
    "Chart", "CheckContext", "CheckReport", "EndoField", "Expr", "Form", "GeometryError",
    "JacobiData", "MetricField", "MetricPackage", "Multivector", "OneForm", "VectorField",
    "backend", "build_package", "contravariant_D", "diff", "evaluate", "is_jacobi",
    "lambda_bracket", "parse", "simplify",
]
