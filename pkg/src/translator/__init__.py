"""Quantile-energy translation and matched-filter synthesis."""

from .quantile import (
    Feasibility,
    terminal_mean,
    baseline_probability,
    threshold_for_baseline,
    quantile_gap,
    feasibility_check,
    translate,
    synthesize_continuous,
    matched_sequence,
    synthesize_discrete,
    achievable_p1,
    energy_sweep,
    tabulate_law,
)

__all__ = [
    'Feasibility',
    'terminal_mean',
    'baseline_probability',
    'threshold_for_baseline',
    'quantile_gap',
    'feasibility_check',
    'translate',
    'synthesize_continuous',
    'matched_sequence',
    'synthesize_discrete',
    'achievable_p1',
    'energy_sweep',
    'tabulate_law',
]
