"""
Validation protocol: halfspace tightness, interval strictness, random
directions and the full report.

Energies are always analytic. Monte Carlo only estimates probabilities; an
estimated probability is turned into an implied energy with a delta-method
standard error.
"""

import math
import time
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .. import __version__
from ..config import Config
from ..gramians import continuous_gramians, discrete_gramians, zoh_discretize
from ..linalg import norm_cdf, norm_pdf, norm_quantile
from ..models import (
    Estimator,
    EventSpec,
    GramianPair,
    IntervalResult,
    McEstimate,
    ModelSpec,
    ReportRow,
    SweepResult,
    TightnessResult,
    ValidationReport,
)
from ..translator import (
    baseline_probability,
    feasibility_check,
    quantile_gap,
    synthesize_continuous,
    synthesize_discrete,
    threshold_for_baseline,
    translate,
)
from ..utils.errors import (
    DomainError,
    FeasibilityError,
    InfeasibleTargetError,
    NumericalError,
    QuantileGateError,
)
from ..utils.logger import setup_logger
from .sampler import block_generator, estimate_probability, scalar_mc, simulate_terminal

logger = setup_logger(__name__)


@dataclass
class SuiteConfig:
    """Monte Carlo settings for one validation run."""

    n_paths: int = Config.N_PATHS
    seed: int = 0
    steps: Optional[int] = Config.DEFAULT_STEPS
    dt: Optional[float] = None
    n_directions: int = Config.N_DIRECTIONS
    estimator: str = "scalar"
    workers: int = Config.WORKERS
    block_size: int = Config.BLOCK_SIZE
    progress: bool = False

    def discretization(self) -> dict:
        return {'dt': self.dt} if self.dt is not None else {'steps': self.steps}


def _aligned_halfspace(model: ModelSpec, gram: GramianPair, event: EventSpec, p0: float) -> EventSpec:
    """The event itself when its baseline is p0, otherwise w'X >= a with a moved to match p0."""
    if not event.is_interval:
        _, p_base = baseline_probability(model, gram, event)
        if abs(p_base - p0) <= 1e-9:
            return event
    a = threshold_for_baseline(model, gram, event.w, p0)
    logger.info(f"threshold moved to a={a:.6g} to match p0={p0}")
    return EventSpec(w=event.w, a=a)


def _implied_energy(p_hat: McEstimate, z0: float, r2: float) -> Tuple[float, float]:
    """Energy implied by an estimated probability and its delta-method SE."""
    if not 0.0 < p_hat.value < 1.0:
        raise NumericalError(f"estimated probability {p_hat.value} is degenerate; raise n_paths")
    z = float(norm_quantile(p_hat.value))
    e_hat = (z - z0) ** 2 / (2.0 * r2)
    dE_dp = (z - z0) / (r2 * float(norm_pdf(z)))
    return e_hat, abs(dE_dp) * p_hat.se


def within_tightness_band(rel_err: float, rel_err_se: float) -> bool:
    """Relative energy error is within max(TIGHTNESS_REL_TOL, SE_BAND * SE)."""
    return rel_err <= max(Config.TIGHTNESS_REL_TOL, Config.SE_BAND * rel_err_se)


def halfspace_tightness(model: ModelSpec, event: EventSpec, p0: float, p1: float, n_paths: int,
                        seed: int, stream: int = 0, estimator: str = "scalar",
                        gram: Optional[GramianPair] = None, steps: Optional[int] = Config.DEFAULT_STEPS,
                        dt: Optional[float] = None, workers: int = Config.WORKERS,
                        block_size: int = Config.BLOCK_SIZE, progress: bool = False) -> TightnessResult:
    """
    Run the matched filter and compare the implied energy with E_min.

    ``estimator="scalar"`` samples w'X_T ~ N(m0 + delta, v) directly;
    ``estimator="path"`` simulates the discretized system under the discrete
    matched filter and compares with the discrete closed form.
    """
    if event.is_interval:
        raise DomainError("halfspace_tightness needs a halfspace event")
    if estimator not in ("scalar", "path"):
        raise DomainError(f"unknown estimator {estimator!r}")
    gram = gram or continuous_gramians(model)
    event = _aligned_halfspace(model, gram, event, p0)

    if p1 == p0:
        exact = McEstimate(value=p0, se=0.0, n_paths=0, seed=seed, estimator=Estimator.SCALAR_SHORTCUT)
        r2 = feasibility_check(gram, event.w).r_squared
        return TightnessResult(rel_err=0.0, rel_err_se=0.0, slack=0.0, slack_se=0.0,
                               e_min=0.0, e_hat=0.0, p_hat=exact, r_squared=r2)

    if estimator == "scalar":
        result = translate(model, gram, event, p0, p1)
        law = synthesize_continuous(result)
        mean = result.m0 + law.beta * law.wWw
        p_hat = scalar_mc(mean, result.v, event, n_paths, seed, stream, workers, block_size, progress)
    else:
        if dt is not None:
            steps = None
        dmodel = zoh_discretize(model, dt=dt, steps=steps)
        result, law = synthesize_discrete(discrete_gramians(dmodel), dmodel, p0, p1, event)
        sample = simulate_terminal(dmodel, law, n_paths, seed, event.w, stream=stream,
                                   workers=workers, block_size=block_size, progress=progress)
        p_hat = estimate_probability(sample, event)

    e_hat, se = _implied_energy(p_hat, result.z0, result.r_squared)
    slack = e_hat - result.e_min
    return TightnessResult(
        rel_err=abs(slack) / result.e_min,
        rel_err_se=se / result.e_min,
        slack=slack,
        slack_se=se,
        e_min=result.e_min,
        e_hat=e_hat,
        p_hat=p_hat,
        r_squared=result.r_squared,
    )


def matched_interval(m0: float, v: float, p0: float,
                     upper_sigmas: float = Config.INTERVAL_UPPER_SIGMAS) -> Tuple[float, float]:
    """Interval [a, b] with b = m0 + k*sqrt(v) and baseline probability p0."""
    s = math.sqrt(v)
    top = float(norm_cdf(upper_sigmas))
    if not 0.0 < p0 < top:
        raise DomainError(f"p0={p0} not representable below {upper_sigmas} sigma")
    a = m0 + s * float(norm_quantile(top - p0))
    return a, m0 + upper_sigmas * s


def interval_probability(m0: float, s: float, a: float, b: float) -> Callable[[float], float]:
    """P(a <= Y + delta <= b) as a function of the mean shift delta."""
    def prob(delta: float) -> float:
        return float(norm_cdf((b - m0 - delta) / s) - norm_cdf((a - m0 - delta) / s))
    return prob


def interval_shift(m0: float, s: float, a: float, b: float, p1: float,
                   tol: float = Config.INTERVAL_TOL) -> float:
    """
    Smallest |delta| with P(a <= Y + delta <= b) = p1.

    Raising the probability moves the mean toward the interval centre, where
    P peaks; lowering it moves the mean away from the centre. P is monotone on
    both branches, so the root is bracketed and bisected there.
    """
    prob = interval_probability(m0, s, a, b)
    p0 = prob(0.0)
    if p1 == p0:
        return 0.0
    centre = math.inf if math.isinf(b) else 0.5 * (a + b) - m0

    if p1 > p0:
        direction = 1.0 if centre >= 0 else -1.0
        if math.isinf(centre):
            hi = s
            for _ in range(Config.INTERVAL_MAX_DOUBLINGS):
                if prob(hi) >= p1:
                    break
                hi *= 2.0
            else:
                raise InfeasibleTargetError(f"p1={p1} not reached within bracket")
        else:
            ceiling = prob(centre)
            if p1 > ceiling:
                raise InfeasibleTargetError(f"p1={p1} above the interval ceiling {ceiling:.6g}")
            hi = abs(centre)
    else:
        direction = -1.0 if centre > 0 else 1.0
        hi = s
        for _ in range(Config.INTERVAL_MAX_DOUBLINGS):
            if prob(direction * hi) <= p1:
                break
            hi *= 2.0
        else:
            raise NumericalError(f"p1={p1} not bracketed")

    lo = 0.0
    below = p1 < p0
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        overshoot = prob(direction * mid) <= p1 if below else prob(direction * mid) >= p1
        if overshoot:
            hi = mid
        else:
            lo = mid
    return direction * 0.5 * (lo + hi)


def _check_first_crossing(prob: Callable[[float], float], shift: float, p0: float, p1: float,
                          n_grid: int) -> None:
    """Grid scan: no smaller shift on the same side reaches p1."""
    if shift == 0.0 or n_grid < 2:
        return
    grid = np.linspace(0.0, shift, n_grid)[:-1]
    values = np.array([prob(d) for d in grid])
    reached = values >= p1 if p1 > p0 else values <= p1
    # allow the last grid cell to touch the root
    if np.any(reached[:-1]):
        raise NumericalError("interval root is not the smallest shift reaching p1")


def interval_strictness(model: ModelSpec, event: EventSpec, p1: float, n_grid: int, n_paths: int,
                        seed: int, stream: int = 0, gram: Optional[GramianPair] = None,
                        workers: int = Config.WORKERS, block_size: int = Config.BLOCK_SIZE,
                        progress: bool = False) -> IntervalResult:
    """Energy for an interval event against the halfspace energy for the same p0 -> p1."""
    if not event.is_interval:
        raise DomainError("interval_strictness needs an interval event")
    if not 0.0 < p1 < 1.0:
        raise DomainError(f"p1 must lie in (0, 1), got {p1!r}")
    gram = gram or continuous_gramians(model)
    verdict = feasibility_check(gram, event.w)
    if not verdict.feasible:
        raise FeasibilityError(f"infeasible direction (R^2 = {verdict.r_squared:.3e})")

    m0, p0 = baseline_probability(model, gram, event)
    v = gram.v(event.w)
    wWw = gram.wWw(event.w)
    s = math.sqrt(v)

    shift = interval_shift(m0, s, event.a, event.b, p1)
    prob = interval_probability(m0, s, event.a, event.b)
    _check_first_crossing(prob, shift, p0, p1, n_grid)

    e_interval = shift ** 2 / (2.0 * wWw)
    e_halfspace = quantile_gap(p0, p1) ** 2 / (2.0 * verdict.r_squared)
    delta_e = e_interval - e_halfspace

    p_hat = scalar_mc(m0 + shift, v, event, n_paths, seed, stream, workers, block_size, progress)
    # dP/d(delta) at the root, then dE/dp = shift / (w'Ww * dP/d(delta))
    slope = float(norm_pdf((event.a - m0 - shift) / s) - norm_pdf((event.b - m0 - shift) / s)) / s
    if shift == 0.0:
        dE_dp = 0.0
    elif slope == 0.0:
        raise NumericalError("interval probability is flat at the root")
    else:
        dE_dp = shift / (wWw * slope)
    e_hat = e_interval + dE_dp * (p_hat.value - p1)
    se = abs(dE_dp) * p_hat.se
    delta_e_hat = e_hat - e_halfspace

    return IntervalResult(
        delta_e=delta_e,
        delta_e_hat=delta_e_hat,
        se=se,
        e_interval=e_interval,
        e_halfspace=e_halfspace,
        shift=shift,
        p0=p0,
        p1=p1,
        p_hat=p_hat,
        passed=delta_e_hat >= -3.0 * se,
    )


def _unit_directions(n: int, count: int, seed: int) -> Iterable[np.ndarray]:
    rng = block_generator(seed, Config.DIRECTION_STREAM, 0)
    for _ in range(100 * count):
        w = rng.standard_normal(n)
        norm = np.linalg.norm(w)
        if norm > 0:
            yield w / norm


def random_direction_sweep(model: ModelSpec, count: int, p0: float, p1: float, n_paths: int,
                           seed: int, directions: Optional[Sequence[Sequence[float]]] = None,
                           gram: Optional[GramianPair] = None, stream_offset: int = 0,
                           estimator: str = "scalar", workers: int = Config.WORKERS,
                           block_size: int = Config.BLOCK_SIZE, progress: bool = False) -> SweepResult:
    """
    Halfspace tightness over random unit directions.

    Each direction gets its own threshold (baseline p0) and its own stream;
    unreachable directions are skipped.
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    gram = gram or continuous_gramians(model)
    candidates = ([np.asarray(d, dtype=np.float64) / np.linalg.norm(d) for d in directions]
                  if directions is not None else _unit_directions(model.n, count, seed))

    chosen: List[np.ndarray] = []
    for w in candidates:
        if feasibility_check(gram, w).feasible:
            chosen.append(w)
        else:
            logger.warning(f"skipping unreachable direction {np.round(w, 4).tolist()}")
        if len(chosen) == count:
            break
    if not chosen:
        raise FeasibilityError("no reachable direction found")

    results = []
    for i, w in enumerate(chosen):
        event = EventSpec(w=w, a=threshold_for_baseline(model, gram, w, p0))
        results.append(halfspace_tightness(
            model, event, p0, p1, n_paths, seed, stream=stream_offset + i, estimator=estimator,
            gram=gram, workers=workers, block_size=block_size, progress=progress,
        ))

    worst = max(range(len(results)), key=lambda i: results[i].rel_err)
    return SweepResult(
        max_rel_err=results[worst].rel_err,
        max_rel_err_se=results[worst].rel_err_se,
        directions=tuple(tuple(float(x) for x in w) for w in chosen),
        rel_errs=tuple(r.rel_err for r in results),
        ses=tuple(r.rel_err_se for r in results),
        r_squared=tuple(r.r_squared for r in results),
    )


def _row(rows: List[ReportRow], test: str, metric: str, kind: str, compute) -> None:
    """Append one report row; library errors mark the row failed instead of aborting."""
    try:
        value, se, status, detail = compute()
        rows.append(ReportRow(test, metric, value, se, kind, status, detail))
    except QuantileGateError as e:
        logger.warning(f"row '{test}' failed: {e}")
        rows.append(ReportRow(test, metric, None, None, kind, "failed", str(e)))


def run_validation_suite(model: ModelSpec, event: EventSpec, p1: float, config: SuiteConfig,
                         p0: Optional[float] = None) -> ValidationReport:
    """
    All validation rows for one model, event and target probability.

    A row whose computation raises a library error is recorded as failed;
    the remaining rows still run.

    Args:
        model: Continuous-time system under test.
        event: Halfspace or interval event; its direction drives every row.
        p1: Target probability.
        config: Path count, seed, discretization and worker settings.
        p0: Baseline probability; defaults to the analytic baseline of ``event``.

    Returns:
        ValidationReport with seven rows and seed-level metadata.
    """
    start = time.time()
    gram = continuous_gramians(model)
    if p0 is None:
        if event.is_interval:
            p0 = baseline_probability(model, gram, EventSpec(w=event.w, a=event.a))[1]
        else:
            p0 = baseline_probability(model, gram, event)[1]
    halfspace = _aligned_halfspace(model, gram, EventSpec(w=event.w, a=event.a), p0)
    mc = dict(workers=config.workers, block_size=config.block_size, progress=config.progress)
    rows: List[ReportRow] = []

    def baseline():
        dmodel = zoh_discretize(model, **config.discretization())
        sample = simulate_terminal(dmodel, None, config.n_paths, config.seed, halfspace.w,
                                   stream=Config.BASELINE_STREAM, **mc)
        est = estimate_probability(sample, halfspace)
        status = "ok" if abs(est.value - p0) <= 3.0 * est.se + 1e-12 else "failed"
        return est.value, est.se, status, f"analytic={p0:.10g}"
    _row(rows, "Baseline p0", "P(w'X_T >= a)", "mc", baseline)

    def reachability():
        verdict = feasibility_check(gram, halfspace.w)
        return verdict.r_squared, None, "ok" if verdict.feasible else "failed", ""
    _row(rows, "Reachability SNR", "R_T^2", "analytic", reachability)

    tight: dict = {}

    def tightness():
        tight['result'] = halfspace_tightness(
            model, halfspace, p0, p1, config.n_paths, config.seed, stream=0,
            estimator=config.estimator, gram=gram, **config.discretization(), **mc)
        r = tight['result']
        status = "ok" if within_tightness_band(r.rel_err, r.rel_err_se) else "failed"
        return r.rel_err, r.rel_err_se, status, f"e_min={r.e_min:.10g}"
    _row(rows, "Halfspace tightness", "|E_hat - E|/E", "mc", tightness)

    def slack():
        if 'result' not in tight:
            raise NumericalError("tightness row failed")
        r = tight['result']
        status = "ok" if abs(r.slack) <= 3.0 * r.slack_se + 1e-12 else "failed"
        return r.slack, r.slack_se, status, f"e_hat={r.e_hat:.10g}"
    _row(rows, "Halfspace slack", "E_hat - E", "mc", slack)

    def discrete():
        dmodel = zoh_discretize(model, **config.discretization())
        result, law = synthesize_discrete(discrete_gramians(dmodel), dmodel, p0, p1, halfspace)
        if result.e_min == 0.0:
            return 0.0, 0.0, "ok", "p1 == p0"
        rel = abs(law.energy() - result.e_min) / result.e_min
        return rel, 0.0, "ok" if rel <= 1e-13 else "failed", f"N={dmodel.N}"
    _row(rows, "Discrete-time test", "relative error", "analytic", discrete)

    def interval():
        if event.is_interval:
            target = event
        else:
            m0 = baseline_probability(model, gram, halfspace)[0]
            a, b = matched_interval(m0, gram.v(halfspace.w), p0)
            target = EventSpec(w=halfspace.w, a=a, b=b)
        r = interval_strictness(model, target, p1, 1000, config.n_paths, config.seed, stream=1,
                                gram=gram, **mc)
        return r.delta_e_hat, r.se, "ok" if r.passed else "failed", f"analytic={r.delta_e:.10g}"
    _row(rows, "Interval event", "Delta E", "mc", interval)

    def directions():
        r = random_direction_sweep(model, config.n_directions, p0, p1, config.n_paths, config.seed,
                                   gram=gram, stream_offset=2, estimator=config.estimator, **mc)
        passed = all(within_tightness_band(e, s) for e, s in zip(r.rel_errs, r.ses))
        status = "ok" if passed else "failed"
        return r.max_rel_err, r.max_rel_err_se, status, f"directions={len(r.directions)}"
    _row(rows, f"Random directions ({config.n_directions})", "max |E_hat - E|/E", "mc", directions)

    elapsed = time.time() - start
    logger.info(f"validation finished in {elapsed:.2f}s")
    metadata = {
        'version': __version__,
        'n': model.n,
        'm': model.m,
        'T': model.T,
        'p0': p0,
        'p1': p1,
        'n_paths': config.n_paths,
        'seed': config.seed,
        'steps': config.steps if config.dt is None else None,
        'dt': config.dt,
        'estimator': config.estimator,
        'block_size': config.block_size,
        'n_directions': config.n_directions,
    }
    return ValidationReport(rows=rows, metadata=metadata, elapsed=elapsed)
