"""Exception types raised across the package."""


class DecoError(Exception):
    """Base class for all package errors."""


class InvalidValue(DecoError, ValueError):
    """A non-finite or otherwise unusable numeric input."""


class MismatchedDimensions(DecoError, TypeError):
    """Arithmetic between quantities whose dimensions do not agree."""


class DomainError(DecoError, ValueError):
    """An argument outside the domain of the operation."""


class SingularMaterial(DomainError):
    """Material constants sitting on a Clausius-Mossotti pole."""


class DivisionByZeroRate(DomainError):
    """A ratio whose denominator rate vanishes identically."""


class NoSolution(DecoError, ValueError):
    """An inversion that has no finite solution (e.g. zero material response)."""


class NumericalFailure(DecoError, ArithmeticError):
    """A numerical routine failed its own accuracy guard."""


class NotFound(DecoError, KeyError):
    """Lookup of an unknown name."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ParseError(DecoError, ValueError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(DecoError, ValueError):
    """A record that parsed but violates a physical invariant."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(message)
