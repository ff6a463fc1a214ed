"""Utils module."""

from .helpers import ensure_parent, parse_grid
from .logger import set_log_level, setup_logger
from .errors import (
    QuantileGateError,
    InputError,
    DimensionError,
    DomainError,
    ConfigurationError,
    UnsupportedLawError,
    FeasibilityError,
    InfeasibleTargetError,
    NumericalError,
    HorizonError,
    DegeneracyError,
)

__all__ = [
    'ensure_parent',
    'parse_grid',
    'setup_logger',
    'set_log_level',
    'QuantileGateError',
    'InputError',
    'DimensionError',
    'DomainError',
    'ConfigurationError',
    'UnsupportedLawError',
    'FeasibilityError',
    'InfeasibleTargetError',
    'NumericalError',
    'HorizonError',
    'DegeneracyError',
]
