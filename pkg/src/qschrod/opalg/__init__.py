"""Exact algebra of differential-difference operators."""

from .operator import (
    OperatorExpr,
    PoleAtZeroError,
    Dt,
    Dx,
    St,
    Sx,
    T,
    X,
    commutator,
    const,
    expand_in_z,
    format_operator,
    identity,
    mul,
    normalize,
    substitute,
    zero,
)
from .polyfunc import PolyFunction, apply_to_polynomial
from .scalar import FIELD, DivisionByZero, Scalar, m, to_scalar, z

__all__ = [
    "FIELD",
    "DivisionByZero",
    "Dt",
    "Dx",
    "OperatorExpr",
    "PoleAtZeroError",
    "PolyFunction",
    "Scalar",
    "St",
    "Sx",
    "T",
    "X",
    "apply_to_polynomial",
    "commutator",
    "const",
    "expand_in_z",
    "format_operator",
    "identity",
    "m",
    "mul",
    "normalize",
    "substitute",
    "to_scalar",
    "z",
    "zero",
]
