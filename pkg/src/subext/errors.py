"""Error types shared across the package."""


class SubextError(Exception):
    """Base class for all package errors."""


class ExactDivisionError(SubextError):
    """Raised when a requested exact division does not exist in the base ring."""


class NotInSpanError(SubextError):
    """Raised when a vector is not in the span it was claimed to lie in."""


class InfiniteLengthError(SubextError):
    """Raised when a length is requested for a module with a free summand."""


class StabilizationBudget(SubextError):
    """Raised when an iterative stabilization did not settle within its budget."""


class BudgetExceeded(SubextError):
    """Raised when an enumeration would exceed the configured class budget."""


class ReductionNotFound(SubextError):
    """Raised when no generator gives a principal reduction within the budget."""


class CertificateError(SubextError):
    """Raised when an internal cross-check (two-route computation) disagrees."""


class NotAModuleError(SubextError):
    """Raised when matrices fail to define a module action (commutation/relations)."""


class UnknownScenarioError(SubextError):
    """Raised when a scenario name is not registered."""


class WorkspaceSyntaxError(SubextError):
    """Raised on malformed workspace text; carries line/column positions."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column
