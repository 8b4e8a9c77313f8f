"""Independent ground truth: free nilpotent arithmetic and brute-force search."""

from .magnus import (
    FreeNilpotentSpec,
    MagnusError,
    TruncatedFreePoly,
    magnus_check_equation,
    magnus_eval_word,
    magnus_is_identity,
)
from .search import SearchBudgetError, bounded_search

__all__ = [
    "FreeNilpotentSpec", "MagnusError", "SearchBudgetError", "TruncatedFreePoly",
    "bounded_search", "magnus_check_equation", "magnus_eval_word", "magnus_is_identity",
]
