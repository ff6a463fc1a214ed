"""Monte Carlo and validation report models."""

from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import List, Optional, Tuple


@dataclass(frozen=True)
class KlReport:
    """Energy versus path-measure KL divergence for one control law."""

    energy: float
    kl: float
    per_step_kl: Tuple[float, ...] = ()
    max_abs_gap: float = 0.0


class Estimator(str, Enum):
    INDICATOR_MEAN = "indicator-mean"
    SCALAR_SHORTCUT = "scalar-shortcut"


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo estimate with its standard error and seed provenance."""

    value: float
    se: float
    n_paths: int
    seed: int
    estimator: Estimator


@dataclass(frozen=True)
class TightnessResult:
    """Implied-energy check of one matched filter."""

    rel_err: float
    rel_err_se: float
    slack: float
    slack_se: float
    e_min: float
    e_hat: float
    p_hat: McEstimate
    r_squared: float


@dataclass(frozen=True)
class IntervalResult:
    """Interval-event energy against the halfspace energy for the same p0 -> p1."""

    delta_e: float
    delta_e_hat: float
    se: float
    e_interval: float
    e_halfspace: float
    shift: float
    p0: float
    p1: float
    p_hat: McEstimate
    passed: bool


@dataclass(frozen=True)
class SweepResult:
    max_rel_err: float
    max_rel_err_se: float
    directions: Tuple[Tuple[float, ...], ...]
    rel_errs: Tuple[float, ...]
    ses: Tuple[float, ...]
    r_squared: Tuple[float, ...]


@dataclass
class ReportRow:
    test: str
    metric: str
    value: Optional[float]
    se: Optional[float]
    kind: str  # "analytic" | "mc"
    status: str = "ok"
    detail: str = ""


@dataclass
class ValidationReport:
    rows: List[ReportRow] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    elapsed: float = field(default=0.0, compare=False)  # wall clock, kept out of as_dict()

    @property
    def ok(self) -> bool:
        return all(row.status == "ok" for row in self.rows)

    def as_dict(self) -> dict:
        return {
            'metadata': dict(self.metadata),
            'rows': [asdict(row) for row in self.rows],
        }
