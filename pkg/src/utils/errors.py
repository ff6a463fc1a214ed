"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class QuantileGateError(Exception):
    """Base class for all library errors."""

    exit_code: int = 4


class InputError(QuantileGateError):
    """Malformed or out-of-domain input."""

    exit_code = 2


class DimensionError(InputError):
    """Shapes do not line up."""


class DomainError(InputError):
    """Value outside the domain of the operation (e.g. p not in (0,1))."""


class ConfigurationError(InputError):
    """Inconsistent run configuration (e.g. T/dt not an integer)."""


class UnsupportedLawError(InputError):
    """Control law kind not handled by the requested operation."""


class FeasibilityError(QuantileGateError):
    """Requested probability change cannot be reached with finite energy."""

    exit_code = 3


class InfeasibleTargetError(FeasibilityError):
    """Target probability above the event's reachable ceiling."""


class NumericalError(QuantileGateError):
    """Numerical failure."""

    exit_code = 4


class HorizonError(NumericalError):
    """||A|| * T too large for a single block exponential."""


class DegeneracyError(NumericalError):
    """Zero terminal variance along the event direction."""
