"""Gramian construction and exact discretization."""

from .engine import (
    effort_metric,
    noise_metric,
    van_loan_gramian,
    continuous_gramians,
    gauss_legendre_grid,
    transition_stack,
    quadrature_gramians,
    zoh_discretize,
    discrete_gramians,
)

__all__ = [
    'effort_metric',
    'noise_metric',
    'van_loan_gramian',
    'continuous_gramians',
    'gauss_legendre_grid',
    'transition_stack',
    'quadrature_gramians',
    'zoh_discretize',
    'discrete_gramians',
]
