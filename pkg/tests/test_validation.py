"""
Monte Carlo validation.

 Group 1 - Scalar sampling and standard errors
 Group 2 - Path simulation and reproducibility
 Group 3 - Halfspace tightness
 Group 4 - Interval strictness
 Group 5 - Random directions
 Group 6 - Full report

Fixed seeds make every check deterministic; Monte Carlo bands use 3 SE.
Full-scale (10^6 path) runs are marked slow.
"""

import json
import math

import numpy as np
import pytest

from src.config import Config
from src.gramians import continuous_gramians, discrete_gramians, zoh_discretize
from src.linalg import norm_cdf
from src.models import EventSpec, ModelSpec
from src.translator import synthesize_discrete, threshold_for_baseline, translate
from src.utils.errors import FeasibilityError, InfeasibleTargetError
from src.validation import (
    SuiteConfig,
    halfspace_tightness,
    interval_probability,
    interval_shift,
    interval_strictness,
    jackknife_variance,
    matched_interval,
    random_direction_sweep,
    run_blocks,
    run_validation_suite,
    scalar_mc,
    simulate_terminal,
    within_tightness_band,
)

P_PLUS_ONE_SIGMA = 0.8413447460685429
FAST = dict(workers=2, block_size=4096)


# ═══════════════════════════════════════════════════════════════════════════════
# Group 1 - Scalar sampling and standard errors
# ═══════════════════════════════════════════════════════════════════════════════


def test_scalar_mc_examples():
    cases = [
        (0.0, EventSpec(w=[1.0], a=0.0), 0.5),
        (1.0, EventSpec(w=[1.0], a=0.0), P_PLUS_ONE_SIGMA),
        (0.0, EventSpec(w=[1.0], a=-1.0, b=1.0), 2.0 * P_PLUS_ONE_SIGMA - 1.0),
    ]
    for seed, (m, event, expected) in enumerate(cases):
        est = scalar_mc(m, 1.0, event, 100_000, seed, **FAST)
        assert est.se > 0
        assert abs(est.value - expected) <= 3.0 * est.se, f"{est.value} vs {expected}"


def test_scalar_mc_standard_error_formula():
    est = scalar_mc(0.0, 1.0, EventSpec(w=[1.0], a=0.0), 10_000, 3, **FAST)
    p = est.value
    assert est.se == pytest.approx(math.sqrt(p * (1 - p) / (10_000 - 1)), rel=1e-12)
    assert est.n_paths == 10_000 and est.seed == 3


def test_standard_error_coverage():
    """value +/- 1.96 SE covers the analytic p0 in about 95% of fresh seeds."""
    event = EventSpec(w=[1.0], a=0.0)
    windows = []
    for start in range(10_000, 12_000, 200):
        covered = 0
        for seed in range(start, start + 200):
            est = scalar_mc(0.0, 1.0, event, 1000, seed, workers=1)
            covered += abs(est.value - 0.5) <= 1.96 * est.se
        windows.append(covered / 200)
    assert 0.92 <= float(np.mean(windows)) <= 0.98
    assert 0.92 <= float(np.median(windows)) <= 0.98


def test_run_blocks_preserves_order():
    sizes = run_blocks(lambda block, size: (block, size), 10, workers=3, block_size=4)
    assert sizes == [(0, 4), (1, 4), (2, 2)]


def test_jackknife_on_known_sample():
    rng = np.random.default_rng(1)
    y = rng.standard_normal(20_000) * 2.0
    var, se = jackknife_variance(y)
    assert abs(var - 4.0) <= 3.0 * se
    # sample variance SE of a Gaussian is about sigma^2 sqrt(2 / n)
    assert se == pytest.approx(4.0 * math.sqrt(2.0 / 20_000), rel=0.5)


# ═══════════════════════════════════════════════════════════════════════════════
# Group 2 - Path simulation and reproducibility
# ═══════════════════════════════════════════════════════════════════════════════


def test_uncontrolled_scalar_moments(scalar_model):
    dm = zoh_discretize(scalar_model, steps=10)
    V_N = discrete_gramians(dm).V[0, 0]
    sample = simulate_terminal(dm, None, 100_000, 21, np.ones(1), **FAST)
    y = sample.projections
    assert abs(y.mean()) <= 3.0 * y.std(ddof=1) / math.sqrt(y.size)
    var, se = jackknife_variance(y)
    assert abs(var - V_N) <= 3.0 * se


def test_matched_filter_mean_shift(drone_model, drone_event):
    dm = zoh_discretize(drone_model, steps=20)
    dgram = discrete_gramians(dm)
    result, law = synthesize_discrete(dgram, dm, 0.7, 0.9, drone_event)
    sample = simulate_terminal(dm, law, 100_000, 8, drone_event.w, **FAST)
    y = sample.projections
    delta = law.beta * dgram.wWw(drone_event.w)
    assert abs(y.mean() - (result.m0 + delta)) <= 3.0 * y.std(ddof=1) / math.sqrt(y.size)


def test_simulation_independent_of_worker_count(drone_model):
    dm = zoh_discretize(drone_model, steps=10)
    runs = [
        simulate_terminal(dm, None, 5000, 42, np.array([1.0, 0.0]), workers=k, block_size=512).projections
        for k in (1, 4, 8)
    ]
    assert np.array_equal(runs[0], runs[1])
    assert np.array_equal(runs[0], runs[2])


def test_full_state_sample(drone_model):
    dm = zoh_discretize(drone_model, steps=5)
    w = np.array([1.0, 0.0])
    full = simulate_terminal(dm, None, 300, 4, w, full_state=True, workers=1, block_size=128)
    thin = simulate_terminal(dm, None, 300, 4, w, workers=1, block_size=128)
    assert full.states.shape == (300, 2)
    assert np.allclose(full.projections, thin.projections, rtol=0, atol=1e-15)


# ═══════════════════════════════════════════════════════════════════════════════
# Group 3 - Halfspace tightness
# ═══════════════════════════════════════════════════════════════════════════════


def test_equal_probabilities_give_exact_zero(drone_model, drone_event):
    r = halfspace_tightness(drone_model, drone_event, 0.7, 0.7, 1000, 1)
    assert r.rel_err == 0.0 and r.slack == 0.0 and r.e_min == 0.0


def test_scalar_slack_small_sample(scalar_model, scalar_event):
    r = halfspace_tightness(scalar_model, scalar_event, 0.5, P_PLUS_ONE_SIGMA, 100_000, 7, **FAST)
    assert r.e_min == pytest.approx(0.5, abs=1e-12)
    assert abs(r.slack) <= 3.0 * r.slack_se


def test_path_estimator(drone_model, drone_event):
    r = halfspace_tightness(drone_model, drone_event, 0.7, 0.9, 50_000, 13, estimator="path",
                            steps=20, **FAST)
    assert abs(r.slack) <= 3.0 * r.slack_se
    assert r.p_hat.estimator.value == "indicator-mean"


def test_realigns_threshold_to_p0(drone_model, drone_event):
    """An event whose baseline is not p0 is shifted to the matching threshold."""
    shifted = EventSpec(w=drone_event.w, a=drone_event.a + 0.3)
    a = halfspace_tightness(drone_model, shifted, 0.7, 0.9, 20_000, 5, **FAST)
    b = halfspace_tightness(drone_model, drone_event, 0.7, 0.9, 20_000, 5, **FAST)
    assert a.e_min == b.e_min


@pytest.mark.slow
def test_drone_tightness_full_scale(drone_model, drone_event):
    r = halfspace_tightness(drone_model, drone_event, 0.7, 0.9, 1_000_000, 42)
    assert r.rel_err <= max(5e-3, 3.0 * r.rel_err_se)
    assert abs(r.slack) <= 3.0 * r.slack_se


@pytest.mark.slow
def test_scalar_tightness_full_scale(scalar_model, scalar_event):
    r = halfspace_tightness(scalar_model, scalar_event, 0.5, P_PLUS_ONE_SIGMA, 1_000_000, 42)
    assert r.rel_err <= max(5e-3, 3.0 * r.rel_err_se)
    assert abs(r.slack) <= 3.0 * r.slack_se


# ═══════════════════════════════════════════════════════════════════════════════
# Group 4 - Interval strictness
# ═══════════════════════════════════════════════════════════════════════════════


def test_unbounded_interval_recovers_halfspace(drone_model, drone_event):
    event = EventSpec(w=drone_event.w, a=drone_event.a, b=math.inf)
    r = interval_strictness(drone_model, event, 0.9, 1000, 2000, 1, **FAST)
    assert r.p0 == pytest.approx(0.7, abs=1e-12)
    assert abs(r.delta_e) <= 1e-9


def test_decreasing_branch_against_grid_scan():
    """Symmetric interval centred on m0: lowering p moves the mean off centre."""
    m0, s, a, b, p1 = 0.0, 1.0, -1.0, 1.0, 0.5
    shift = interval_shift(m0, s, a, b, p1)
    prob = interval_probability(m0, s, a, b)
    assert shift > 0
    assert prob(shift) == pytest.approx(p1, abs=1e-10)

    grid = np.linspace(0.0, 3.0, 30_001)
    first = grid[np.argmax([prob(d) <= p1 for d in grid])]
    assert abs(first - shift) <= grid[1] - grid[0]


def test_increasing_branch_moves_toward_centre():
    # centre at +1.5 from the mean
    m0, s, a, b = 0.0, 1.0, 0.5, 2.5
    prob = interval_probability(m0, s, a, b)
    p0 = prob(0.0)
    shift = interval_shift(m0, s, a, b, p0 + 0.2)
    assert 0 < shift < 1.5
    assert prob(shift) == pytest.approx(p0 + 0.2, abs=1e-10)
    assert interval_shift(m0, s, a, b, p0) == 0.0


def test_interval_strictness_on_scalar(scalar_model):
    r = interval_strictness(scalar_model, EventSpec(w=[1.0], a=-1.0, b=1.0), 0.5, 1000, 5000, 2, **FAST)
    assert r.p0 == pytest.approx(2.0 * P_PLUS_ONE_SIGMA - 1.0, abs=1e-14)
    assert r.shift > 0
    assert r.delta_e >= 0


def test_interval_ceiling(scalar_model):
    with pytest.raises(InfeasibleTargetError):
        interval_strictness(scalar_model, EventSpec(w=[1.0], a=-1.0, b=1.0), 0.9, 1000, 1000, 1, **FAST)


def test_matched_interval_baseline(drone_model, drone_gram):
    w = np.array([1.0, 0.0])
    a, b = matched_interval(0.0, drone_gram.v(w), 0.7)
    assert b == pytest.approx(4.0 * math.sqrt(1.0 / 3.0), rel=1e-12)
    s = math.sqrt(drone_gram.v(w))
    assert float(norm_cdf(b / s) - norm_cdf(a / s)) == pytest.approx(0.7, abs=1e-12)


def test_drone_interval_needs_more_energy(drone_model, drone_gram):
    w = np.array([1.0, 0.0])
    a, b = matched_interval(0.0, drone_gram.v(w), 0.7)
    r = interval_strictness(drone_model, EventSpec(w=w, a=a, b=b), 0.9, 1000, 100_000, 3,
                            gram=drone_gram, **FAST)
    assert r.delta_e > 0
    assert r.passed
    assert r.delta_e_hat >= -3.0 * r.se


# ═══════════════════════════════════════════════════════════════════════════════
# Group 5 - Random directions
# ═══════════════════════════════════════════════════════════════════════════════


def test_isotropic_model_has_equal_snr():
    model = ModelSpec(A=np.zeros((3, 3)), B=np.eye(3), Sigma=np.eye(3), x0=np.zeros(3), T=1.0)
    r = random_direction_sweep(model, 4, 0.5, 0.7, 2000, 11, **FAST)
    assert len(r.directions) == 4
    assert max(r.r_squared) - min(r.r_squared) <= 1e-12
    assert all(np.linalg.norm(d) == pytest.approx(1.0, abs=1e-12) for d in r.directions)


def test_single_aligned_direction_matches_tightness(drone_model, drone_gram):
    w = np.array([1.0, 0.0])
    sweep = random_direction_sweep(drone_model, 1, 0.7, 0.9, 20_000, 42, directions=[w],
                                   gram=drone_gram, **FAST)
    event = EventSpec(w=w, a=threshold_for_baseline(drone_model, drone_gram, w, 0.7))
    single = halfspace_tightness(drone_model, event, 0.7, 0.9, 20_000, 42, gram=drone_gram, **FAST)
    assert sweep.rel_errs[0] == single.rel_err
    assert sweep.ses[0] == single.rel_err_se


def test_unreachable_directions_rejected(unreachable_model):
    with pytest.raises(FeasibilityError):
        random_direction_sweep(unreachable_model, 1, 0.5, 0.7, 1000, 1, directions=[[0.0, 1.0]])


@pytest.mark.slow
def test_drone_random_directions_full_scale(drone_model):
    r = random_direction_sweep(drone_model, 5, 0.7, 0.9, 1_000_000, 42)
    assert r.max_rel_err <= max(5e-3, 3.0 * r.max_rel_err_se)


# ═══════════════════════════════════════════════════════════════════════════════
# Group 6 - Full report
# ═══════════════════════════════════════════════════════════════════════════════


def _smoke_config(workers: int) -> SuiteConfig:
    return SuiteConfig(n_paths=4000, seed=42, steps=20, n_directions=2, workers=workers, block_size=1024)


def test_suite_emits_all_rows(drone_model, drone_event):
    report = run_validation_suite(drone_model, drone_event, 0.9, _smoke_config(2))
    assert len(report.rows) == 7
    by_test = {row.test: row for row in report.rows}
    assert by_test["Reachability SNR"].value == pytest.approx(0.25, abs=1e-10)
    assert by_test["Reachability SNR"].kind == "analytic"
    assert by_test["Discrete-time test"].value <= 1e-13
    assert by_test["Discrete-time test"].status == "ok"
    for row in report.rows:
        if row.kind == "mc" and row.status == "ok":
            assert row.se is not None
    assert report.metadata['p0'] == pytest.approx(0.7, abs=1e-12)
    assert by_test["Halfspace tightness"].status == "ok"
    assert by_test["Random directions (2)"].status == "ok"
    assert report.metadata['seed'] == 42


def test_suite_json_is_byte_identical_across_workers(drone_model, drone_event):
    dumps = [
        json.dumps(run_validation_suite(drone_model, drone_event, 0.9, _smoke_config(k)).as_dict(),
                   sort_keys=True)
        for k in (1, 4, 8)
    ]
    assert dumps[0] == dumps[1] == dumps[2]
    assert 'elapsed' not in dumps[0] and 'workers' not in dumps[0]


def test_tightness_band():
    assert within_tightness_band(4e-3, 1e-4)
    assert not within_tightness_band(6e-3, 1e-3)
    assert within_tightness_band(6e-3, 2.5e-3)
    assert within_tightness_band(0.0, 0.0)


def test_suite_fails_rows_outside_band(drone_model, drone_event, monkeypatch):
    monkeypatch.setattr(Config, "TIGHTNESS_REL_TOL", 0.0)
    monkeypatch.setattr(Config, "SE_BAND", 0.0)
    report = run_validation_suite(drone_model, drone_event, 0.9, _smoke_config(2))
    by_test = {row.test: row for row in report.rows}
    assert by_test["Halfspace tightness"].value > 0
    assert by_test["Halfspace tightness"].status == "failed"
    assert by_test["Random directions (2)"].status == "failed"
    assert by_test["Reachability SNR"].status == "ok"


def test_entry_points_document_arguments():
    for fn in (translate, zoh_discretize, run_validation_suite):
        doc = fn.__doc__ or ""
        assert "Args:" in doc and "Returns:" in doc, fn.__name__
        for name in fn.__code__.co_varnames[:fn.__code__.co_argcount]:
            assert f"{name}:" in doc, f"{fn.__name__} does not document {name}"
