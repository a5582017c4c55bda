"""Exception types shared across the package."""

from __future__ import annotations


class ReebError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ReebError):
    """Raised when a text input cannot be parsed.

    Carries an optional 1-based line number for CLI diagnostics.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(ReebError):
    """Raised when a structure fails validation and the caller asked to raise."""


class ForestError(ReebError):
    """Raised on illegal dynamic-forest operations (e.g. linking two nodes
    already in the same tree, cutting a non-edge)."""


class BudgetExceeded(ReebError):
    """Raised internally when a search exceeds its node budget.

    Search entry points catch this and report a 'budget' outcome instead of
    letting it escape.
    """


class InternalError(ReebError):
    """Invariant violation inside the library. Seeing this is a bug."""
