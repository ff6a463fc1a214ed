"""Shared fixtures: the SCALAR and DRONE models with their events and Gramians."""

import os
import sys

_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, _ROOT)

import numpy as np
import pytest

from src.config import FIXTURES
from src.gramians import continuous_gramians
from src.models import EventSpec, ModelSpec


def model_from(name: str, **overrides) -> ModelSpec:
    raw = dict(FIXTURES[name])
    raw.update(overrides)
    return ModelSpec(
        A=np.array(raw['A']), B=np.array(raw['B']), Sigma=np.array(raw['Sigma']),
        x0=np.array(raw['x0']), T=raw['T'],
        penalty=None if raw.get('penalty') is None else np.array(raw['penalty']),
    )


def event_from(name: str) -> EventSpec:
    ev = FIXTURES[name]['event']
    return EventSpec(w=np.array(ev['w']), a=ev['a'], b=ev.get('b'))


def stable_model(rng: np.random.Generator, n: int, m: int = 1, T: float = 1.0) -> ModelSpec:
    """Random Hurwitz A, full-rank B and a well-conditioned Sigma."""
    A = rng.standard_normal((n, n)) / np.sqrt(n) - 1.5 * np.eye(n)
    B = rng.standard_normal((n, m))
    G = rng.standard_normal((n, n))
    Sigma = G @ G.T / n + 0.1 * np.eye(n)
    return ModelSpec(A=A, B=B, Sigma=Sigma, x0=rng.standard_normal(n), T=T)


@pytest.fixture
def scalar_model():
    return model_from("SCALAR")


@pytest.fixture
def scalar_event():
    return event_from("SCALAR")


@pytest.fixture
def scalar_gram(scalar_model):
    return continuous_gramians(scalar_model)


@pytest.fixture
def drone_model():
    return model_from("DRONE")


@pytest.fixture
def drone_event():
    return event_from("DRONE")


@pytest.fixture
def drone_gram(drone_model):
    return continuous_gramians(drone_model)


@pytest.fixture
def unreachable_model():
    """B = [1; 0] with diagonal A: the second coordinate cannot be steered."""
    return ModelSpec(A=-np.eye(2), B=np.array([[1.0], [0.0]]), Sigma=np.eye(2),
                     x0=np.zeros(2), T=1.0)
