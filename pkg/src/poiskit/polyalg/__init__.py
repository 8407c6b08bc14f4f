"""Exact polynomial arithmetic and graded multivector/form calculus."""

from .polynomial import (
    Chart,
    ChartMismatchError,
    PolyParseError,
    Polynomial,
    degrevlex_key,
    divides_exactly,
    parse_polynomial,
    poly_gcd,
    poly_gcd_all,
)
from .multivector import (
    DifferentialForm,
    MultivectorField,
    TensorValue,
    exterior_derivative,
    interior_product,
    lie_derivative,
    pair,
    schouten_bracket,
    wedge,
    wedge_power,
)

__all__ = [
    "Chart",
    "ChartMismatchError",
    "PolyParseError",
    "Polynomial",
    "degrevlex_key",
    "divides_exactly",
    "parse_polynomial",
    "poly_gcd",
    "poly_gcd_all",
    "DifferentialForm",
    "MultivectorField",
    "TensorValue",
    "exterior_derivative",
    "interior_product",
    "lie_derivative",
    "pair",
    "schouten_bracket",
    "wedge",
    "wedge_power",
]
