"""Truncated bivariate power series and the D-operator."""

from .exceptions import GridTooCoarse, SingularConstantTerm, TruncationTooSmall
from .main import (
    binomial_weights,
    cauchy_series,
    d_op_from_series,
    d_op_geometric,
    d_op_power,
    d_op_product,
    d_op_via_cauchy,
    d_op_x,
    d_op_y,
    geometric_partial_sums,
    powers,
    series_reciprocal,
)
from .series import BivariateSeries

__all__ = [
    "BivariateSeries",
    "binomial_weights",
    "cauchy_series",
    "d_op_from_series",
    "d_op_geometric",
    "d_op_power",
    "d_op_product",
    "d_op_via_cauchy",
    "d_op_x",
    "d_op_y",
    "geometric_partial_sums",
    "GridTooCoarse",
    "powers",
    "series_reciprocal",
    "SingularConstantTerm",
    "TruncationTooSmall",
]
