"""Monte Carlo validation."""

from .sampler import (
    TerminalSample,
    block_generator,
    run_blocks,
    simulate_terminal,
    estimate_probability,
    scalar_mc,
    jackknife_variance,
)
from .suite import (
    SuiteConfig,
    halfspace_tightness,
    matched_interval,
    interval_probability,
    interval_shift,
    interval_strictness,
    random_direction_sweep,
    within_tightness_band,
    run_validation_suite,
)

__all__ = [
    'TerminalSample',
    'block_generator',
    'run_blocks',
    'simulate_terminal',
    'estimate_probability',
    'scalar_mc',
    'jackknife_variance',
    'SuiteConfig',
    'halfspace_tightness',
    'matched_interval',
    'interval_probability',
    'interval_shift',
    'interval_strictness',
    'random_direction_sweep',
    'within_tightness_band',
    'run_validation_suite',
]
