"""Symbolic generators-and-relations engine for KK-style categories over finite presentations."""

from .presentation import (
    Presentation,
    ValidationReport,
    compose_lookup,
    format_presentation,
    parse_presentation,
    validate_presentation,
)
from .terms import (
    FormalSum,
    Letter,
    SignedWord,
    Word,
    add,
    canonical_sum_form,
    concat,
    embed_hom,
    format_term,
    make_word,
    negate,
    parse_term,
    product,
    sigma_of,
)
from .rewrite import (
    Budget,
    ContextApplication,
    Equivalent,
    ProofTrace,
    Unknown,
    apply_rule,
    check_trace,
    decide_equiv,
    instantiate_rules,
)
from .normalform import desyntheticize, fuse_runs, normalize_sum, normalize_trace
from .model import MatrixModel, evaluate, random_model, soundness_check_trace, validate_model

__all__ = [
    "Presentation",
    "ValidationReport",
    "compose_lookup",
    "format_presentation",
    "parse_presentation",
    "validate_presentation",
    "FormalSum",
    "Letter",
    "SignedWord",
    "Word",
    "add",
    "canonical_sum_form",
    "concat",
    "embed_hom",
    "format_term",
    "make_word",
    "negate",
    "parse_term",
    "product",
    "sigma_of",
    "Budget",
    "ContextApplication",
    "Equivalent",
    "ProofTrace",
    "Unknown",
    "apply_rule",
    "check_trace",
    "decide_equiv",
    "instantiate_rules",
    "desyntheticize",
    "fuse_runs",
    "normalize_sum",
    "normalize_trace",
    "MatrixModel",
    "evaluate",
    "random_model",
    "soundness_check_trace",
    "validate_model",
]

__version__ = "0.1.0"
