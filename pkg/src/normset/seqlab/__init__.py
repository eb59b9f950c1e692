"""Sequence constructions and the finite estimates built on them."""

from .selection import (EARLY, EXHAUSTED, LATE, ModelReport, SandwichReport, SelectionError, Selection, SeqArray,
                        SymmetryReport, asymptotic_model_weights, default_coefficients, diagonal_value,
                        sandwich_check, select_indices, symmetry_check)
from .sequences import (AVERAGE, BASIS, CUSTOM, FLAT_BLOCKS, SUM, BlockSeq, SequenceError, block_seq,
                        check_block, check_family, dyadic_family, interleaved_pair, make_seq, mix_seq,
                        normalize_seq)
from .spreading import C0_LIKE, INCONCLUSIVE, L1_LIKE, SMReport, spread_indices, spreading_surrogate

__all__ = [
    "EARLY", "EXHAUSTED", "LATE", "ModelReport", "SandwichReport", "SelectionError", "Selection", "SeqArray",
    "SymmetryReport", "asymptotic_model_weights", "default_coefficients", "diagonal_value",
    "sandwich_check", "select_indices", "symmetry_check",
    "AVERAGE", "BASIS", "CUSTOM", "FLAT_BLOCKS", "SUM", "BlockSeq", "SequenceError", "block_seq",
    "check_block", "check_family", "dyadic_family", "interleaved_pair", "make_seq", "mix_seq",
    "normalize_seq",
    "C0_LIKE", "INCONCLUSIVE", "L1_LIKE", "SMReport", "spread_indices", "spreading_surrogate",
]
