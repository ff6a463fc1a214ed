"""
Gramian engine.

Continuous Gramians V_T, W come from one Van Loan block exponential each:
for an integrand weight Q,

    expm([[-A, Q], [0, A']] * t) = [[F11, F12], [0, F22]],
    int_0^t e^{A s} Q e^{A' s} ds = F22' @ F12.

The Gauss-Legendre oracle integrates the same expressions directly, and the
discrete Gramians are accumulated by G <- A_d G A_d' + Q.
"""

import math
from typing import Optional, Tuple

import numpy as np
from scipy import linalg as sla

from ..config import Config
from ..linalg import Matrix, expm, pinv, spectral_norm, symmetrize
from ..models import DiscreteModel, EffortMetric, GramianMethod, GramianPair, ModelSpec
from ..utils.errors import ConfigurationError, DomainError, HorizonError
from ..utils.logger import setup_logger

logger = setup_logger(__name__)


def _metric_from(M: Matrix) -> EffortMetric:
    M = symmetrize(M)
    M_pinv = symmetrize(pinv(M))
    s = sla.svdvals(M)
    tol = max(M.shape) * np.finfo(np.float64).eps * (s[0] if s.size else 0.0)
    return EffortMetric(M=M, M_pinv=M_pinv, rank=int(np.sum(s > tol)))


def _weighted_inverse(S: Matrix, B: Matrix) -> Matrix:
    """B' S^-1 B, falling back to the pseudoinverse when S is singular."""
    try:
        factor = sla.cho_factor(S, lower=True)
        return B.T @ sla.cho_solve(factor, B)
    except sla.LinAlgError:
        logger.warning("covariance is not positive definite; using pseudoinverse")
        return B.T @ pinv(S) @ B


def noise_metric(model: ModelSpec) -> EffortMetric:
    """M = B' Sigma^-1 B."""
    return _metric_from(_weighted_inverse(model.Sigma, model.B))


def effort_metric(model: ModelSpec) -> EffortMetric:
    """The penalty R when given, otherwise B' Sigma^-1 B."""
    if model.penalty is not None:
        return _metric_from(model.penalty)
    return noise_metric(model)


def _guard_horizon(A: Matrix, t: float) -> None:
    if spectral_norm(A) * t > Config.HORIZON_GUARD:
        raise HorizonError(
            f"||A||*T = {spectral_norm(A) * t:.1f} exceeds {Config.HORIZON_GUARD}; "
            "split the horizon into segments"
        )


def van_loan_gramian(A: Matrix, Q: Matrix, t: float) -> Matrix:
    """int_0^t e^{A s} Q e^{A' s} ds from a single block exponential."""
    n = A.shape[0]
    C = np.zeros((2 * n, 2 * n))
    C[:n, :n] = -A
    C[:n, n:] = Q
    C[n:, n:] = A.T
    F = expm(C * t)
    return symmetrize(F[n:, n:].T @ F[:n, n:])


def continuous_gramians(model: ModelSpec, metric: Optional[EffortMetric] = None) -> GramianPair:
    """V_T and W_T^M by the Van Loan method."""
    _guard_horizon(model.A, model.T)
    metric = metric or effort_metric(model)
    Q_w = model.B @ metric.M_pinv @ model.B.T
    V = van_loan_gramian(model.A, model.Sigma, model.T)
    W = van_loan_gramian(model.A, Q_w, model.T)
    return GramianPair(V=V, W=W, method=GramianMethod.VAN_LOAN, T=model.T)


def gauss_legendre_grid(T: float, nodes: int = Config.QUADRATURE_NODES,
                        panels: int = Config.QUADRATURE_PANELS) -> Tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre abscissae and weights on [0, T]."""
    x, wts = np.polynomial.legendre.leggauss(nodes)
    h = T / panels
    local = 0.5 * h * (x + 1.0)
    taus = (np.arange(panels)[:, None] * h + local[None, :]).ravel()
    weights = np.tile(0.5 * h * wts, panels)
    return taus, weights


def transition_stack(A: Matrix, T: float, nodes: int = Config.QUADRATURE_NODES,
                     panels: int = Config.QUADRATURE_PANELS) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    e^{A tau} at every composite Gauss-Legendre node on [0, T].

    Uses e^{A (j h + x)} = (e^{A h})^j e^{A x}, so only nodes + 1 exponentials
    are evaluated.
    """
    n = A.shape[0]
    taus, weights = gauss_legendre_grid(T, nodes, panels)
    local = taus[:nodes]
    h = T / panels
    E_local = np.stack([expm(A * t) for t in local])
    step = expm(A * h)

    stack = np.empty((panels, nodes, n, n))
    P = np.eye(n)
    for j in range(panels):
        stack[j] = P @ E_local
        P = P @ step
    return taus, weights, stack.reshape(-1, n, n)


def _quadrature(Phi: np.ndarray, weights: np.ndarray, Q: Matrix) -> Matrix:
    return symmetrize(np.einsum('k,kij,jl,kml->im', weights, Phi, Q, Phi))


def quadrature_gramians(model: ModelSpec, nodes: int = Config.QUADRATURE_NODES,
                        panels: int = Config.QUADRATURE_PANELS,
                        metric: Optional[EffortMetric] = None) -> GramianPair:
    """Same integrals as continuous_gramians by composite Gauss-Legendre quadrature."""
    if nodes < 8:
        raise DomainError(f"quadrature needs at least 8 nodes per panel, got {nodes}")
    metric = metric or effort_metric(model)
    _, weights, Phi = transition_stack(model.A, model.T, nodes, panels)
    V = _quadrature(Phi, weights, model.Sigma)
    W = _quadrature(Phi, weights, model.B @ metric.M_pinv @ model.B.T)
    return GramianPair(V=V, W=W, method=GramianMethod.QUADRATURE, T=model.T)


def _resolve_steps(T: float, dt: Optional[float], steps: Optional[int]) -> Tuple[float, int]:
    if (dt is None) == (steps is None):
        raise ConfigurationError("give exactly one of dt or steps")
    if steps is not None:
        if int(steps) != steps or steps < 1:
            raise ConfigurationError(f"step count must be a positive integer, got {steps}")
        return T / steps, int(steps)
    if not dt > 0:
        raise ConfigurationError(f"dt must be > 0, got {dt}")
    N = int(round(T / dt))
    if N < 1 or not math.isclose(N * dt, T, rel_tol=Config.STEP_REL_TOL):
        raise ConfigurationError(f"T/dt = {T / dt!r} is not an integer step count")
    return float(dt), N


def zoh_discretize(model: ModelSpec, dt: Optional[float] = None,
                   steps: Optional[int] = None) -> DiscreteModel:
    """
    Exact zero-order-hold discretization.

    (A_d, B_d) are read off expm([[A, B], [0, 0]] * dt), so singular A never
    goes through A^-1. Sigma_d is the Van Loan Gramian over one step.

    Args:
        model: Continuous-time system.
        dt: Step length; T / dt must be an integer.
        steps: Number of steps N; give exactly one of ``dt`` or ``steps``.

    Returns:
        DiscreteModel with (A_d, B_d, Sigma_d), the per-step effort metric
        and a flag for a step above DT_RULE / ||A||.

    Raises:
        ConfigurationError: Both or neither of ``dt`` and ``steps``, or a non-integer step count.
        HorizonError: ||A|| T is above HORIZON_GUARD.
    """
    dt, N = _resolve_steps(model.T, dt, steps)
    _guard_horizon(model.A, model.T)
    n, m = model.n, model.m

    block = np.zeros((n + m, n + m))
    block[:n, :n] = model.A
    block[:n, n:] = model.B
    F = expm(block * dt)
    A_d = F[:n, :n]
    B_d = F[:n, n:]
    Sigma_d = van_loan_gramian(model.A, model.Sigma, dt)

    noise = _metric_from(_weighted_inverse(Sigma_d, B_d))
    # per-step cost of a piecewise-constant control under penalty R is R*dt
    metric = _metric_from(model.penalty * dt) if model.penalty is not None else noise

    norm_a = spectral_norm(model.A)
    violation = norm_a > 0 and dt > Config.DT_RULE / norm_a
    if violation:
        logger.warning(
            f"dt={dt:g} exceeds the sampling rule {Config.DT_RULE}/||A|| = {Config.DT_RULE / norm_a:g}"
        )

    return DiscreteModel(
        A_d=A_d, B_d=B_d, Sigma_d=Sigma_d, dt=dt, N=N,
        metric=metric, noise_metric=noise, source=model, rule_violation=bool(violation),
    )


def _accumulate(A_d: Matrix, Q: Matrix, N: int) -> Matrix:
    G = np.zeros_like(Q)
    for _ in range(N):
        G = A_d @ G @ A_d.T + Q
    return symmetrize(G)


def discrete_gramians(dmodel: DiscreteModel) -> GramianPair:
    """V_N and W_N^M; Sigma_d is per-step, so no dt factor appears."""
    Q_w = dmodel.B_d @ dmodel.metric.M_pinv @ dmodel.B_d.T
    V = _accumulate(dmodel.A_d, dmodel.Sigma_d, dmodel.N)
    W = _accumulate(dmodel.A_d, Q_w, dmodel.N)
    return GramianPair(V=V, W=W, method=GramianMethod.DISCRETE_SUM, steps=dmodel.N, dt=dmodel.dt)
