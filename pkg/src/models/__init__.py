"""Models module for QuantileGate."""

from .system import ModelSpec, EffortMetric, GramianMethod, GramianPair, DiscreteModel
from .translation import EventSpec, TranslationResult, LawKind, ControlLaw
from .reports import (
    KlReport,
    Estimator,
    McEstimate,
    TightnessResult,
    IntervalResult,
    SweepResult,
    ReportRow,
    ValidationReport,
)

__all__ = [
    'ModelSpec',
    'EffortMetric',
    'GramianMethod',
    'GramianPair',
    'DiscreteModel',
    'EventSpec',
    'TranslationResult',
    'LawKind',
    'ControlLaw',
    'KlReport',
    'Estimator',
    'McEstimate',
    'TightnessResult',
    'IntervalResult',
    'SweepResult',
    'ReportRow',
    'ValidationReport',
]
