"""QuantileGate - minimal control energy for terminal probability targets"""

__version__ = "1.0.0"

from .config import Config, FIXTURES
from .models import ModelSpec, EventSpec, GramianPair, DiscreteModel, TranslationResult, ControlLaw
from .gramians import continuous_gramians, quadrature_gramians, zoh_discretize, discrete_gramians
from .translator import translate, synthesize_continuous, synthesize_discrete, feasibility_check
from .kl import kl_discrete, kl_continuous_analytic
from .validation import run_validation_suite, SuiteConfig

__all__ = [
    'Config',
    'FIXTURES',
    'ModelSpec',
    'EventSpec',
    'GramianPair',
    'DiscreteModel',
    'TranslationResult',
    'ControlLaw',
    'continuous_gramians',
    'quadrature_gramians',
    'zoh_discretize',
    'discrete_gramians',
    'translate',
    'synthesize_continuous',
    'synthesize_discrete',
    'feasibility_check',
    'kl_discrete',
    'kl_continuous_analytic',
    'run_validation_suite',
    'SuiteConfig',
]
