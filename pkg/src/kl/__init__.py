"""KL-energy identity."""

from .bridge import kl_discrete, kl_continuous_analytic

__all__ = ['kl_discrete', 'kl_continuous_analytic']
