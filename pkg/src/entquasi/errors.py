"""Exception types raised by entquasi."""


class ParameterDomainError(ValueError):
    """A physical parameter lies outside its allowed range."""


class ValidationError(ValueError):
    """A coefficient matrix violates a structural invariant."""


class MatrixParseError(ValueError):
    """A matrix file could not be parsed.

    ``row`` and ``column`` locate the offending entry (1-based, file lines)
    when known.
    """

    def __init__(self, message, row=None, column=None):
        loc = ""
        if row is not None:
            loc = f" (line {row}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.row = row
        self.column = column


class ResourceLimitError(RuntimeError):
    """The requested enumeration exceeds the configured dimension cap."""


class ConsistencyError(RuntimeError):
    """An emitted solution failed its own defining equations.

    This indicates a bug, never bad input.
    """


class UndefinedErrorMetric(ValueError):
    """Relative error requested against a zero operator."""


class DegenerateDeltaError(ValueError):
    """A zero-width phase distribution was used where a density is needed."""
