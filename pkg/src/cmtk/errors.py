"""Exception types shared across the toolkit.

DomainError covers mathematically invalid input (CLI exit code 2),
BudgetError covers exhausted search/enumeration budgets (exit code 3).
Budgets are always explicit: nothing silently truncates.
"""


class CmtkError(Exception):
    """Base class for all toolkit errors."""


class DomainError(CmtkError):
    """Input outside the mathematical domain of an operation."""


class BudgetError(CmtkError):
    """A configured enumeration or search budget was exhausted."""

    def __init__(self, message, **info):
        super().__init__(message)
        self.info = info


class FieldRejected(DomainError):
    """Radicand does not define an imaginary quadratic extension.

    reason is one of "zero", "not_squarefree", "real", "constant_extension".
    """

    def __init__(self, reason, message):
        super().__init__(message)
        self.reason = reason


class UnsupportedPath(DomainError):
    """Input is mathematically valid but outside the implemented algorithm path."""


class NotSplitError(DomainError):
    """A prime required to split (and avoid the conductor) fails to."""

    def __init__(self, message, prime=None):
        super().__init__(message)
        self.prime = prime
