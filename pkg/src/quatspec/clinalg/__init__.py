"""Complex dense linear algebra used to host companion matrices."""

from .dense import (
    Polynomial,
    as_cmatrix,
    char_poly,
    det,
    eigenvalues,
    frobenius_norm,
    expand_linear_factors,
    exterior_trace,
    exterior_traces,
    newton_elementary,
    power_sums,
    scale_of,
)
from .exact import ORACLE_MAX_N, char_poly_oracle, exact_char_poly

__all__ = [
    "ORACLE_MAX_N",
    "Polynomial",
    "as_cmatrix",
    "char_poly",
    "char_poly_oracle",
    "det",
    "eigenvalues",
    "exact_char_poly",
    "expand_linear_factors",
    "exterior_trace",
    "exterior_traces",
    "newton_elementary",
    "power_sums",
    "scale_of",
]
