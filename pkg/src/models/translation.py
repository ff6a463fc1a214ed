"""Events, translation results and control laws."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from ..linalg import as_vector, expm
from ..utils.errors import DomainError, UnsupportedLawError
from .system import DiscreteModel, EffortMetric, ModelSpec


@dataclass(frozen=True, eq=False)
class EventSpec:
    """Terminal event {w'X >= a} or, with ``b`` set, {a <= w'X <= b}."""

    w: np.ndarray
    a: float
    b: Optional[float] = None

    def __post_init__(self):
        w = as_vector(self.w, "w")
        if np.linalg.norm(w) <= 0:
            raise DomainError("event direction w must be nonzero")
        if self.b is not None and not self.b > self.a:
            raise DomainError(f"interval upper bound b={self.b} must exceed a={self.a}")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "a", float(self.a))
        if self.b is not None:
            object.__setattr__(self, "b", float(self.b))

    @property
    def is_interval(self) -> bool:
        return self.b is not None

    @property
    def sense(self) -> str:
        return "interval" if self.is_interval else "halfspace"

    def contains(self, y: np.ndarray) -> np.ndarray:
        """Indicator of the event for terminal projections y = w'X."""
        if self.is_interval:
            return (y >= self.a) & (y <= self.b)
        return y >= self.a


@dataclass(frozen=True, eq=False)
class TranslationResult:
    """Outcome of one (event, p0, p1) query."""

    r_squared: float
    v: float
    wWw: float
    m0: float
    p0: float
    p1: float
    z0: float
    z1: float
    e_min: float
    beta: float
    feasible: bool
    event: EventSpec = field(repr=False)
    metric: EffortMetric = field(repr=False)
    model: Optional[ModelSpec] = field(default=None, repr=False)

    @property
    def delta(self) -> float:
        """Terminal mean shift produced by the matched filter."""
        return self.beta * self.wWw if self.feasible else float("nan")

    def as_dict(self) -> dict:
        return {
            'r_squared': self.r_squared,
            'v': self.v,
            'wWw': self.wWw,
            'm0': self.m0,
            'p0': self.p0,
            'p1': self.p1,
            'z0': self.z0,
            'z1': self.z1,
            'e_min': self.e_min,
            'beta': self.beta,
            'feasible': self.feasible,
        }


class LawKind(str, Enum):
    CONTINUOUS_MATCHED = "continuous-matched"
    DISCRETE_MATCHED = "discrete-matched"
    OPEN_LOOP = "open-loop"
    FEEDBACK = "feedback"


@dataclass(frozen=True, eq=False)
class ControlLaw:
    """
    Deterministic control law.

    Matched laws evaluate u(s) = beta M^+ B' e^{A'(T-s)} w (continuous) or
    carry the sequence U_k (discrete). Open-loop laws wrap ``profile(s)``;
    feedback laws wrap ``profile(s, x)`` and are only accepted where stated.
    """

    kind: LawKind
    beta: float
    direction: np.ndarray
    metric: EffortMetric
    model: Optional[ModelSpec] = field(default=None, repr=False)
    dmodel: Optional[DiscreteModel] = field(default=None, repr=False)
    sequence: Optional[np.ndarray] = None
    wWw: float = 0.0
    profile: Optional[Callable] = field(default=None, repr=False)

    @property
    def is_deterministic(self) -> bool:
        return self.kind != LawKind.FEEDBACK

    def evaluate(self, s: float) -> np.ndarray:
        """Control value at time s in [0, T] (continuous and open-loop laws)."""
        if self.kind == LawKind.OPEN_LOOP:
            return np.atleast_1d(np.asarray(self.profile(s), dtype=np.float64))
        if self.kind != LawKind.CONTINUOUS_MATCHED:
            raise UnsupportedLawError(f"evaluate() is not defined for {self.kind.value} laws")
        model = self.model
        if not 0.0 <= s <= model.T:
            raise DomainError(f"s={s} outside [0, {model.T}]")
        if self.beta == 0.0:
            return np.zeros(model.m)
        psi = expm(model.A.T * (model.T - s)) @ self.direction
        return self.beta * (self.metric.M_pinv @ (model.B.T @ psi))

    def energy(self) -> float:
        """Analytic energy: beta^2 w'Ww / 2, or the summed discrete cost."""
        if self.kind == LawKind.DISCRETE_MATCHED:
            U = self.sequence
            return 0.5 * float(np.einsum('ki,ij,kj->', U, self.metric.M, U))
        if self.kind == LawKind.CONTINUOUS_MATCHED:
            return 0.5 * self.beta ** 2 * self.wWw
        raise UnsupportedLawError(f"no closed-form energy for {self.kind.value} laws")
