"""Global settings and configuration."""

import logging
from dataclasses import dataclass


@dataclass
class Config:
    """Application-wide numerical and Monte Carlo defaults."""

    # Feasibility and quantile arithmetic
    FEASIBILITY_TOL: float = 1e-12
    GAP_CROSSOVER: float = 1e-8   # relative to min(p, 1 - p)

    # Gauss-Legendre oracle: nodes per panel, panels over [0, T]
    QUADRATURE_NODES: int = 8
    QUADRATURE_PANELS: int = 257

    # Discretization
    DT_RULE: float = 0.2          # dt <= DT_RULE / ||A||_2
    HORIZON_GUARD: float = 200.0  # ||A||_2 * T above this is refused
    DEFAULT_STEPS: int = 100
    STEP_REL_TOL: float = 1e-12

    # Matrix checks
    SYMMETRY_TOL: float = 1e-10
    PSD_TOL: float = 1e-12

    # Monte Carlo
    N_PATHS: int = 1_000_000
    BLOCK_SIZE: int = 65_536
    WORKERS: int = 4
    JACKKNIFE_GROUPS: int = 100
    N_DIRECTIONS: int = 5
    TIGHTNESS_REL_TOL: float = 5e-3  # rows pass at max(this, SE_BAND * SE)
    SE_BAND: float = 3.0
    DIRECTION_STREAM: int = 1_000_003
    BASELINE_STREAM: int = 1_000_001

    # Interval events
    INTERVAL_TOL: float = 1e-12
    INTERVAL_UPPER_SIGMAS: float = 4.0
    INTERVAL_MAX_DOUBLINGS: int = 200

    # Output
    SAMPLES: int = 101
    LOG_LEVEL: int = logging.INFO
