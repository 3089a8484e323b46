"""Exception types shared across the package."""


class SpecmixError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(SpecmixError, ValueError):
    """Invalid input data or parameter value."""


class EdgeListParseError(ValidationError):
    """Malformed edge-list line; carries the 1-based line number."""

    def __init__(self, line_number, message):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class DegenerateSpectrumError(SpecmixError):
    """The spectrum does not support the requested embedding."""


class ReconstructionError(SpecmixError):
    """The membership reconstruction system is numerically unusable."""


class NumericError(SpecmixError):
    """A numerical routine failed to converge or produced non-finite values."""
