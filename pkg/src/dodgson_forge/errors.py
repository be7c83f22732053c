"""Shared exception types.

Exit-code mapping in the CLI: verified mathematical failures exit 1,
budget/unsupported conditions exit 2.
"""


class InvalidArgumentError(ValueError):
    """Caller violated a documented precondition."""


class UnsupportedDegreeError(InvalidArgumentError):
    """Polynomial degree above what the operation supports (2 for resultants)."""


class SizeLimitError(RuntimeError):
    """Input exceeds a hard structural cap (e.g. subgraph enumeration limit)."""


class BudgetExceededError(RuntimeError):
    """A configured work budget ran out; partial results may be attached."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class UnassignedVariableError(InvalidArgumentError):
    """Evaluation point leaves a variable of the polynomial unassigned."""
