"""Idempotent-plus-invertible decompositions of complex matrices."""

from ._core import (
    Certificate,
    HalmosForm,
    InputError,
    NumericalFailure,
    PreconditionError,
    almost_star_clean_decompose,
    clean_decompose,
    decompose,
    difference_invertibility,
    emit_matrix_text,
    generate_corpus,
    halmos_form,
    paper_constants,
    parse_matrix_text,
    riesz_projection,
    shift_inverse_lowerbound_table,
    shift_matrix,
    star_clean_closed_range,
    strong_star_clean_counterexample,
    strongly_clean_decompose,
    verify_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "HalmosForm",
    "InputError",
    "NumericalFailure",
    "PreconditionError",
    "almost_star_clean_decompose",
    "clean_decompose",
    "decompose",
    "difference_invertibility",
    "emit_matrix_text",
    "generate_corpus",
    "halmos_form",
    "paper_constants",
    "parse_matrix_text",
    "riesz_projection",
    "shift_inverse_lowerbound_table",
    "shift_matrix",
    "star_clean_closed_range",
    "strong_star_clean_counterexample",
    "strongly_clean_decompose",
    "verify_certificate",
]
