"""Exact scalar substrate: integer polynomials, determinants, Laurent series."""

from bellows.exact.poly import (
    DegenerateInputError,
    MultiPoly,
    ResourceLimitError,
    int_det,
    poly_det,
    resultant,
    scalar_det,
)
from bellows.exact.laurent import (
    DEFAULT_PRECISION,
    INFINITY,
    LaurentScalar,
    PrecisionError,
    laurent_place,
)

__all__ = [
    "DegenerateInputError",
    "MultiPoly",
    "ResourceLimitError",
    "int_det",
    "poly_det",
    "resultant",
    "scalar_det",
    "DEFAULT_PRECISION",
    "INFINITY",
    "LaurentScalar",
    "PrecisionError",
    "laurent_place",
]
