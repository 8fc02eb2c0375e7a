"""Idempotent stable range one for 2x2 integer matrices."""

from .bezout import divisibility_isr1, ext_gcd, minimal_pairs, solve_shifted_product
from .mat2 import Mat2, adjugate, content, det, format_matrix, parse_matrix, trace
from .zdecider import Decision, Witness, clean_decompose, decide_isr1, verify_witness

__all__ = [
    "Decision",
    "Mat2",
    "Witness",
    "adjugate",
    "clean_decompose",
    "content",
    "decide_isr1",
    "det",
    "divisibility_isr1",
    "ext_gcd",
    "format_matrix",
    "minimal_pairs",
    "parse_matrix",
    "solve_shifted_product",
    "trace",
    "verify_witness",
]
