"""Shared exception types."""


class StructuralError(ValueError):
    """Raised when inputs violate structural preconditions (mismatched
    rings or tables, missing variable assignments, malformed shapes)."""


class BudgetExceeded(RuntimeError):
    """Raised when a computation exceeds its configured step or degree
    budget.  This is a resource report, never a wrong answer."""


class GenerationFailure(RuntimeError):
    """Raised when randomized instance generation exhausts its retry
    budget without satisfying the required invariants."""
