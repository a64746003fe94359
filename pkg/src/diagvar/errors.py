"""Exception types shared across the package."""


class DiagvarError(Exception):
    """Base class for all package errors."""


class DomainError(DiagvarError):
    """Invalid coefficient domain, or an operation mixing domains."""


class ContextError(DiagvarError):
    """Unknown variable, or an operation mixing variable contexts."""


class PolyParseError(DiagvarError):
    """Syntax error in the polynomial grammar."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class SchemaError(DiagvarError):
    """Malformed JSON input for a matrix or polynomial."""


class SizeGuardError(DiagvarError):
    """A documented size budget was exceeded; never a silent truncation."""


class NotUnimodularError(DiagvarError):
    """Operation requires an integer matrix with determinant +1 or -1."""


class NormalFormError(DiagvarError):
    """A computed value is not of the expected normal form."""
