# core/errors.py
from typing import Any, Optional


class WeylFormsError(Exception):
    """Base class for every error raised by the library."""
    pass


class PreconditionError(WeylFormsError, ValueError):
    """An operation was called outside of its stated domain."""
    pass


class ParseError(WeylFormsError, ValueError):
    """Text or JSON input does not follow the documented grammar."""

    def __init__(self, message: str, text: Optional[str] = None):
        super().__init__(message)
        self.text = text


class FieldMismatchError(WeylFormsError, TypeError):
    """Operands live over different cyclotomic fields or moduli."""
    pass


class PrecisionError(WeylFormsError):
    """A truncated computation ran out of precision."""

    def __init__(self, message: str, required: int):
        super().__init__(f"{message} (required precision {required})")
        self.required = required


class DepthError(WeylFormsError):
    """A graded computation needs more homogeneous components than it was given."""

    def __init__(self, message: str, required: int):
        super().__init__(f"{message} (required depth {required})")
        self.required = required


class FieldExtensionRequired(WeylFormsError):
    """An exact root is missing from the scalar field."""

    def __init__(self, radicand: Any, degree: int):
        super().__init__(f"no {degree}-th root of {radicand} in the scalar field")
        self.radicand = radicand
        self.degree = degree


class ObstructionError(WeylFormsError):
    """A linear system has no solution; carries the inconsistent part."""

    def __init__(self, message: str, obstruction: Any = None):
        super().__init__(message)
        self.obstruction = obstruction


class DivisionByZeroError(WeylFormsError, ZeroDivisionError):
    """Inversion of a zero (or non-invertible) scalar or series."""
    pass
