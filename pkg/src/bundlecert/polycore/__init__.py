"""Exact multigraded polynomial arithmetic, parsing, monomial bases, and
fraction-free rational linear algebra."""

from .linalg import (
    ExactMatrix,
    bareiss_det,
    bareiss_rank,
    kernel_dim,
    section_matrix,
)
from .parse import parse_poly
from .poly import (
    Ambient,
    GaussianRational,
    MultiDegree,
    RationalPolynomial,
    intersection_product,
    mdeg_add,
    mdeg_leq,
    mdeg_neg,
    mdeg_sub,
    monomial_basis,
    monomial_count,
)

__all__ = [
    "Ambient",
    "ExactMatrix",
    "GaussianRational",
    "MultiDegree",
    "RationalPolynomial",
    "bareiss_det",
    "bareiss_rank",
    "intersection_product",
    "kernel_dim",
    "mdeg_add",
    "mdeg_leq",
    "mdeg_neg",
    "mdeg_sub",
    "monomial_basis",
    "monomial_count",
    "parse_poly",
    "section_matrix",
]
