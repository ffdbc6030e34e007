"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class GCAEError(Exception):
    exit_code = 1
    category = "error"


class ValidationError(GCAEError, ValueError):
    exit_code = 1
    category = "validation"


class DataError(GCAEError, OSError):
    """Unreadable, missing or malformed input files."""

    exit_code = 2
    category = "io"


class NumericalError(GCAEError, ArithmeticError):
    """Singular systems, non-finite values produced by an update."""

    exit_code = 3
    category = "numerical"
