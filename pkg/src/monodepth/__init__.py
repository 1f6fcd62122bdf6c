"""Exact depth computations for powers of monomial ideals."""

from .core import (
    ContextMismatch,
    ExponentOverflow,
    Monomial,
    MonomialIdeal,
    RingContext,
    colon,
    ideal_arith,
    localize,
    membership,
    minimalize,
    monomial_algebra,
    power,
)

__all__ = [
    "ContextMismatch",
    "ExponentOverflow",
    "Monomial",
    "MonomialIdeal",
    "RingContext",
    "colon",
    "ideal_arith",
    "localize",
    "membership",
    "minimalize",
    "monomial_algebra",
    "power",
]
__version__ = "0.1.0"
