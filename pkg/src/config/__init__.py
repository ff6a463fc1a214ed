"""Configuration module for QuantileGate."""

from .settings import Config
from .fixtures import FIXTURES

__all__ = ['Config', 'FIXTURES']
