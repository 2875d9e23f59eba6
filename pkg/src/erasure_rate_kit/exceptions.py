"""
Exceptions for erasure-rate-kit
"""


class ErkError(ValueError):
    """Base class for all erasure-rate-kit errors."""


class ParameterError(ErkError):
    """A parameter violates its domain (the message names the invariant)."""


class DegenerateChainError(ParameterError):
    """Markov erasure chain with 1 - q0 + q1 = 0 (absorbed in the erased state)."""


class EnumerationLimitError(ErkError):
    """Exhaustive enumeration requested beyond the supported block length."""


class DenseCapError(ErkError):
    """Dense matrix requested beyond the configured size cap."""
