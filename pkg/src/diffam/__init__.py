"""Difference families from difference sets, with brute-force certification."""

from .errors import (
    BudgetExceeded,
    ConstructionRejected,
    DiffamError,
    InputError,
    PreconditionError,
    VerificationFailed,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ConstructionRejected",
    "DiffamError",
    "InputError",
    "PreconditionError",
    "VerificationFailed",
    "__version__",
]
