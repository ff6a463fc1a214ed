"""
Quantile-energy translator for terminal halfspaces.

For Y = w'X_T with variance v = w'Vw, a deterministic control shifts the mean
by delta and leaves v untouched, so moving P(Y >= a) from p0 to p1 needs
delta = (z1 - z0) sqrt(v). The cheapest control realizing delta is the
matched filter, with energy (z1 - z0)^2 / (2 R^2), R^2 = w'Ww / w'Vw.
"""

import math
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..config import Config
from ..gramians import effort_metric
from ..linalg import expm, norm_cdf, norm_pdf, norm_quantile
from ..models import (
    ControlLaw,
    DiscreteModel,
    EffortMetric,
    EventSpec,
    GramianPair,
    LawKind,
    ModelSpec,
    TranslationResult,
)
from ..utils.errors import (
    DegeneracyError,
    DomainError,
    FeasibilityError,
    InputError,
    UnsupportedLawError,
)
from ..utils.logger import setup_logger

logger = setup_logger(__name__)


class Feasibility(NamedTuple):
    feasible: bool
    r_squared: float


def _check_probability(p: float, name: str) -> float:
    if not (isinstance(p, (int, float, np.floating)) and 0.0 < p < 1.0):
        raise DomainError(f"{name} must lie in (0, 1), got {p!r}")
    return float(p)


def _terminal_variance(gram: GramianPair, w: np.ndarray) -> float:
    v = gram.v(w)
    if not v > 0:
        raise DegeneracyError(f"terminal variance w'Vw = {v:.3e} is not positive")
    return v


def terminal_mean(model: ModelSpec, w: np.ndarray) -> float:
    """Uncontrolled mean of w'X_T."""
    return float(w @ expm(model.A * model.T) @ model.x0)


def baseline_probability(model: ModelSpec, gram: GramianPair, event: EventSpec) -> Tuple[float, float]:
    """(m0, p0) for the uncontrolled system."""
    v = _terminal_variance(gram, event.w)
    m0 = terminal_mean(model, event.w)
    s = math.sqrt(v)
    if event.is_interval:
        p0 = norm_cdf((event.b - m0) / s) - norm_cdf((event.a - m0) / s)
    else:
        # upper tail as Phi(-x) keeps precision for p0 near 0
        p0 = norm_cdf((m0 - event.a) / s)
    return m0, float(p0)


def threshold_for_baseline(model: ModelSpec, gram: GramianPair, w: np.ndarray, p0: float) -> float:
    """Threshold a with P(w'X_T >= a) = p0 under zero control."""
    p0 = _check_probability(p0, "p0")
    v = _terminal_variance(gram, w)
    return terminal_mean(model, w) - float(norm_quantile(p0)) * math.sqrt(v)


def quantile_gap(p0: float, p1: float) -> float:
    """
    Phi^-1(p1) - Phi^-1(p0).

    When |p1 - p0| is below GAP_CROSSOVER times the tail mass
    min(p, 1 - p) at the midpoint, the difference of quantiles cancels;
    there the gap is (p1 - p0) / phi(Phi^-1((p0 + p1) / 2)).
    """
    p_mid = 0.5 * (p0 + p1)
    if abs(p1 - p0) < Config.GAP_CROSSOVER * min(p_mid, 1.0 - p_mid):
        z_mid = float(norm_quantile(p_mid))
        return (p1 - p0) / float(norm_pdf(z_mid))
    return float(norm_quantile(p1) - norm_quantile(p0))


def feasibility_check(gram: GramianPair, w: np.ndarray) -> Feasibility:
    """Feasible iff w'Ww > FEASIBILITY_TOL * w'Vw."""
    w = np.asarray(w, dtype=np.float64)
    if np.linalg.norm(w) <= 0:
        raise DomainError("direction w must be nonzero")
    v = _terminal_variance(gram, w)
    wWw = max(gram.wWw(w), 0.0)
    return Feasibility(feasible=wWw > Config.FEASIBILITY_TOL * v, r_squared=wWw / v)


def _translate(event: EventSpec, v: float, wWw: float, m0: float, p0: float, p1: float,
               metric: EffortMetric, model: Optional[ModelSpec]) -> TranslationResult:
    wWw = max(wWw, 0.0)
    r2 = wWw / v
    z0 = float(norm_quantile(p0))
    z1 = float(norm_quantile(p1))

    if p1 == p0:
        e_min, beta, feasible = 0.0, 0.0, True
    elif wWw <= Config.FEASIBILITY_TOL * v:
        e_min, beta, feasible = math.inf, math.nan, False
        logger.info(f"direction unreachable: R^2 = {r2:.3e}")
    else:
        gap = quantile_gap(p0, p1)
        e_min = gap * gap / (2.0 * r2)
        beta = gap * math.sqrt(v) / wWw
        feasible = True

    return TranslationResult(
        r_squared=r2, v=v, wWw=wWw, m0=m0, p0=p0, p1=p1, z0=z0, z1=z1,
        e_min=e_min, beta=beta, feasible=feasible,
        event=event, metric=metric, model=model,
    )


def translate(model: ModelSpec, gram: GramianPair, event: EventSpec, p0: float, p1: float,
              metric: Optional[EffortMetric] = None) -> TranslationResult:
    """
    Minimal energy to move P(w'X_T >= a) from p0 to p1.

    An unreachable direction is reported through ``feasible=False`` and
    ``e_min = inf``; no exception is raised for it.

    Args:
        model: Continuous-time system; supplies the terminal mean.
        gram: Gramians of ``model`` over [0, T].
        event: Halfspace event w'X_T >= a.
        p0: Baseline probability, in (0, 1).
        p1: Target probability, in (0, 1).
        metric: Effort metric; defaults to the penalty or the noise metric of ``model``.

    Returns:
        TranslationResult with E_min, R^2, the quantile gap and the feasibility verdict.

    Raises:
        DomainError: An interval event, or a probability outside (0, 1).
        DegeneracyError: w'V_T w is not positive.
    """
    if event.is_interval:
        raise DomainError("translate covers halfspace events; use interval_strictness for intervals")
    p0 = _check_probability(p0, "p0")
    p1 = _check_probability(p1, "p1")
    v = _terminal_variance(gram, event.w)
    return _translate(
        event, v, gram.wWw(event.w), terminal_mean(model, event.w), p0, p1,
        metric or effort_metric(model), model,
    )


def synthesize_continuous(result: TranslationResult) -> ControlLaw:
    """Matched filter u*(s) = beta M^+ B' e^{A'(T-s)} w."""
    if not result.feasible:
        raise FeasibilityError(f"infeasible direction (R^2 = {result.r_squared:.3e})")
    if result.model is None:
        raise InputError("translation result carries no continuous model")
    return ControlLaw(
        kind=LawKind.CONTINUOUS_MATCHED,
        beta=result.beta,
        direction=result.event.w,
        metric=result.metric,
        model=result.model,
        wWw=result.wWw,
    )


def matched_sequence(dmodel: DiscreteModel, w: np.ndarray, beta: float) -> np.ndarray:
    """U_k = beta M^+ B_d' (A_d^(N-1-k))' w for k = 0..N-1."""
    gain = dmodel.metric.M_pinv @ dmodel.B_d.T
    U = np.empty((dmodel.N, dmodel.m))
    g = np.asarray(w, dtype=np.float64)
    for k in range(dmodel.N - 1, -1, -1):
        U[k] = beta * (gain @ g)
        g = dmodel.A_d.T @ g
    return U


def synthesize_discrete(dgram: GramianPair, dmodel: DiscreteModel, p0: float, p1: float,
                        event: EventSpec) -> Tuple[TranslationResult, ControlLaw]:
    """Discrete-time translation and its matched control sequence."""
    if event.is_interval:
        raise DomainError("synthesize_discrete covers halfspace events only")
    p0 = _check_probability(p0, "p0")
    p1 = _check_probability(p1, "p1")
    w = event.w
    v = _terminal_variance(dgram, w)

    x = dmodel.source.x0
    for _ in range(dmodel.N):
        x = dmodel.A_d @ x
    result = _translate(event, v, dgram.wWw(w), float(w @ x), p0, p1, dmodel.metric, dmodel.source)
    if not result.feasible:
        raise FeasibilityError(f"infeasible direction (R_N^2 = {result.r_squared:.3e})")

    law = ControlLaw(
        kind=LawKind.DISCRETE_MATCHED,
        beta=result.beta,
        direction=w,
        metric=dmodel.metric,
        model=dmodel.source,
        dmodel=dmodel,
        sequence=matched_sequence(dmodel, w, result.beta),
        wWw=result.wWw,
    )
    return result, law


def achievable_p1(gram: GramianPair, event: EventSpec, p0: float, energy_budget: float,
                  direction: str = "raise") -> float:
    """Probability reachable from p0 with the given energy: Phi(z0 +/- sqrt(2 E R^2))."""
    p0 = _check_probability(p0, "p0")
    if direction not in ("raise", "lower"):
        raise DomainError(f"direction must be 'raise' or 'lower', got {direction!r}")
    if not energy_budget >= 0:
        raise DomainError(f"energy budget must be >= 0, got {energy_budget}")
    if energy_budget == 0:
        return p0

    verdict = feasibility_check(gram, event.w)
    if not verdict.feasible:
        raise FeasibilityError(f"infeasible direction (R^2 = {verdict.r_squared:.3e})")
    shift = math.sqrt(2.0 * energy_budget * verdict.r_squared)
    z0 = float(norm_quantile(p0))
    return float(norm_cdf(z0 + shift if direction == "raise" else z0 - shift))


def energy_sweep(model: ModelSpec, gram: GramianPair, event: EventSpec, p0: float,
                 p1_grid: Sequence[float]) -> pd.DataFrame:
    """E_min and beta over a grid of target probabilities."""
    rows = []
    for p1 in p1_grid:
        result = translate(model, gram, event, p0, p1)
        rows.append({'p1': result.p1, 'e_min': result.e_min, 'beta': result.beta})
    return pd.DataFrame(rows, columns=['p1', 'e_min', 'beta'])


def tabulate_law(law: ControlLaw, samples: int = Config.SAMPLES) -> pd.DataFrame:
    """
    Sampled control for export.

    Discrete laws give one row per step with the per-step cost U'MU/2 (the
    column sums to the discrete E_min); continuous laws give ``samples``
    evenly spaced times with the running cost u'Mu/2.
    """
    M = law.metric.M
    if law.kind == LawKind.DISCRETE_MATCHED:
        U = law.sequence
        dm = law.dmodel
        frame = pd.DataFrame(U, columns=[f"U_{i + 1}" for i in range(U.shape[1])])
        frame.insert(0, 't', np.arange(dm.N) * dm.dt)
        frame.insert(0, 'k', np.arange(dm.N))
        frame['energy'] = 0.5 * np.einsum('ki,ij,kj->k', U, M, U)
        return frame
    if law.kind != LawKind.CONTINUOUS_MATCHED:
        raise UnsupportedLawError(f"cannot tabulate {law.kind.value} laws")
    if samples < 2:
        raise DomainError("need at least 2 samples")

    times = np.linspace(0.0, law.model.T, samples)
    u = np.stack([law.evaluate(s) for s in times])
    frame = pd.DataFrame(u, columns=[f"u_{i + 1}" for i in range(u.shape[1])])
    frame.insert(0, 's', times)
    frame['power'] = 0.5 * np.einsum('ki,ij,kj->k', u, M, u)
    return frame
