"""Exception hierarchy shared across the package."""


class GfwError(Exception):
    """Base class for all errors raised by gfw_opt."""


class InfeasibleStart(GfwError):
    """The starting point is not in the feasible set."""


class OracleFailure(GfwError):
    """A linear maximization oracle could not produce a point."""


class NotLpBacked(GfwError):
    """An operation needs an LP-backed oracle but got something else."""


class MissingGradients(GfwError):
    """A trace lacks the gradients needed for a diagnostic."""


class InsufficientData(GfwError):
    """Too few trace entries for a statistical estimate."""


class NonSymmetric(GfwError):
    """A matrix expected to be symmetric is not."""


class ShapeMismatch(GfwError):
    """Array shapes are incompatible."""


class NumericalBreakdown(GfwError):
    """The simplex method hit a numerically unusable pivot."""


class TooLarge(GfwError):
    """A brute-force routine was called on an instance beyond its guard."""


class EmptySeries(GfwError):
    """A plot was requested without usable data."""


class ParseError(GfwError):
    """Malformed input file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IndexOutOfRange(ParseError):
    """An entry index falls outside the declared matrix shape."""
