"""Exact counts and circle-method diagnostics for N = p1 + p2 + m**n
with almost-proportional summands."""

from estermann.errors import (
    AccuracyError,
    DegenerateInputError,
    DomainError,
    EstermannError,
    RangeError,
    ResourceError,
    StateError,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "DegenerateInputError",
    "DomainError",
    "EstermannError",
    "RangeError",
    "ResourceError",
    "StateError",
    "__version__",
]
