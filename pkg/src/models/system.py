"""System-level data models: the continuous model, its discretization, Gramians."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from ..linalg import Matrix, as_matrix, as_spd, as_vector
from ..utils.errors import DimensionError, DomainError


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """
    Continuous-time linear-Gaussian system
    dX = A X dt + B u dt + Sigma^(1/2) dW on [0, T], X_0 = x0.

    ``penalty`` replaces the default effort metric B' Sigma^-1 B when set.
    """

    A: Matrix
    B: Matrix
    Sigma: Matrix
    x0: np.ndarray
    T: float
    penalty: Optional[Matrix] = None

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        B = as_matrix(self.B, "B")
        n = A.shape[0]
        if A.shape != (n, n):
            raise DimensionError(f"A must be square, got {A.shape}")
        if B.shape[0] != n:
            raise DimensionError(f"B must have {n} rows, got {B.shape}")
        Sigma = as_spd(self.Sigma, "Sigma", definite=True)
        if Sigma.shape != (n, n):
            raise DimensionError(f"Sigma must be {n}x{n}, got {Sigma.shape}")
        x0 = as_vector(self.x0, "x0")
        if x0.shape != (n,):
            raise DimensionError(f"x0 must have length {n}, got {x0.size}")
        if not (np.isfinite(self.T) and self.T > 0):
            raise DomainError(f"T must be > 0, got {self.T}")
        penalty = None
        if self.penalty is not None:
            penalty = as_spd(self.penalty, "penalty", definite=True)
            if penalty.shape != (B.shape[1], B.shape[1]):
                raise DimensionError(f"penalty must be {B.shape[1]}x{B.shape[1]}, got {penalty.shape}")

        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "Sigma", Sigma)
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "T", float(self.T))
        object.__setattr__(self, "penalty", penalty)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    def with_sigma(self, Sigma: Matrix) -> "ModelSpec":
        return ModelSpec(self.A, self.B, Sigma, self.x0, self.T, self.penalty)

    def with_penalty(self, penalty: Optional[Matrix]) -> "ModelSpec":
        return ModelSpec(self.A, self.B, self.Sigma, self.x0, self.T, penalty)


@dataclass(frozen=True, eq=False)
class EffortMetric:
    """Control-effort metric M together with its pseudoinverse and rank."""

    M: Matrix
    M_pinv: Matrix
    rank: int


class GramianMethod(str, Enum):
    VAN_LOAN = "van-loan"
    QUADRATURE = "quadrature"
    DISCRETE_SUM = "discrete-sum"


@dataclass(frozen=True, eq=False)
class GramianPair:
    """Terminal noise covariance V and M-weighted controllability Gramian W."""

    V: Matrix
    W: Matrix
    method: GramianMethod
    T: Optional[float] = None
    steps: Optional[int] = None
    dt: Optional[float] = None

    @property
    def horizon(self) -> Tuple:
        if self.steps is not None:
            return (self.steps, self.dt)
        return (self.T,)

    def v(self, w: np.ndarray) -> float:
        return float(w @ self.V @ w)

    def wWw(self, w: np.ndarray) -> float:
        return float(w @ self.W @ w)


@dataclass(frozen=True, eq=False)
class DiscreteModel:
    """
    Exact zero-order-hold companion of a ModelSpec.

    ``metric`` is the per-step effort metric used for energies; ``noise_metric``
    is B_d' Sigma_d^-1 B_d and drives KL divergences. They coincide unless the
    source model carries a penalty.
    """

    A_d: Matrix
    B_d: Matrix
    Sigma_d: Matrix
    dt: float
    N: int
    metric: EffortMetric
    noise_metric: EffortMetric
    source: ModelSpec = field(repr=False)
    rule_violation: bool = False

    @property
    def T(self) -> float:
        return self.N * self.dt

    @property
    def n(self) -> int:
        return self.A_d.shape[0]

    @property
    def m(self) -> int:
        return self.B_d.shape[1]
