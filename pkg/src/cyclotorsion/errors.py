"""Exception types shared across the package."""

from __future__ import annotations


class CyclotorsionError(Exception):
    """Base class for package-specific failures."""


class ZeroDivisorSplit(CyclotorsionError):
    """Inversion (or a zero test) in a quotient ring hit a zero divisor.

    Carries a proper monic factor of the tower modulus so the caller can split
    the quotient into two smaller towers and retry on each piece.
    """

    def __init__(self, factor, message: str = "zero divisor found; tower splits"):
        super().__init__(message)
        self.factor = factor


class PrecisionExhausted(CyclotorsionError):
    """A numeric routine could not certify its result at the working precision."""


class BadReductionError(CyclotorsionError):
    """Specialization requested at a parameter where the family degenerates."""


class BudgetExceeded(CyclotorsionError):
    """A combinatorial cap or resource budget was hit.

    ``resume_token`` is set when the interrupted computation supports
    deterministic resumption.
    """

    def __init__(self, message: str, resume_token=None):
        super().__init__(message)
        self.resume_token = resume_token
