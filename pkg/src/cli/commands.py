"""Subcommand handlers. Each returns the process exit code."""

import sys
from argparse import Namespace
from typing import List, Optional

import numpy as np
import pandas as pd

from ..config import Config
from ..gramians import continuous_gramians, discrete_gramians, zoh_discretize
from ..models import EventSpec, GramianPair, ModelSpec
from ..translator import (
    baseline_probability,
    energy_sweep,
    feasibility_check,
    synthesize_continuous,
    synthesize_discrete,
    tabulate_law,
    translate,
)
from ..utils.errors import ConfigurationError
from ..utils.logger import setup_logger
from ..validation import SuiteConfig, run_validation_suite
from .output import banner, emit_frame, emit_mapping, emit_report, format_matrix, write_text
from .schema import RunConfig

logger = setup_logger(__name__)


def _require_event(cfg: RunConfig) -> EventSpec:
    event = cfg.to_event()
    if event is None:
        raise ConfigurationError("this command needs an 'event' in the configuration")
    return event


def _single_p1(cfg: RunConfig) -> float:
    grid = cfg.p1_grid()
    if len(grid) != 1:
        raise ConfigurationError("this command needs a single p1 (use 'sweep' for grids)")
    return grid[0]


def _p0(cfg: RunConfig, model: ModelSpec, gram: GramianPair, event: EventSpec) -> float:
    if cfg.p0 is not None:
        return cfg.p0
    return baseline_probability(model, gram, event)[1]


def _matrix_frame(matrices: dict) -> pd.DataFrame:
    records = []
    for name, X in matrices.items():
        X = np.atleast_2d(X)
        for i in range(X.shape[0]):
            for j in range(X.shape[1]):
                records.append({'matrix': name, 'i': i, 'j': j, 'value': float(X[i, j])})
    return pd.DataFrame(records, columns=['matrix', 'i', 'j', 'value'])


def _emit_matrices(title: str, matrices: dict, scalars: dict, fmt: str, out: Optional[str]) -> None:
    if fmt == "json":
        payload = {k: np.atleast_2d(v).tolist() for k, v in matrices.items()}
        payload.update(scalars)
        emit_mapping(title, payload, "json", out)
    elif fmt == "csv":
        emit_frame(_matrix_frame(matrices), "csv", out)
    else:
        blocks = [banner(title)]
        blocks += [format_matrix(k, v) for k, v in matrices.items()]
        blocks += [f"{k}: {v:.10g}" if isinstance(v, float) else f"{k}: {v}" for k, v in scalars.items()]
        blocks.append("=" * 60)
        write_text("\n".join(blocks) + "\n", out)


def _infeasible(r_squared: float) -> int:
    print(f"[ERROR] Infeasible direction: R^2 = {r_squared:.3e} "
          f"(needs > {Config.FEASIBILITY_TOL:g})", file=sys.stderr)
    return 3


def cmd_gramians(cfg: RunConfig, args: Namespace) -> int:
    model = cfg.to_model()
    gram = continuous_gramians(model)
    matrices = {'V': gram.V, 'W': gram.W}
    scalars = {'T': model.T}

    event = cfg.to_event()
    if event is not None:
        scalars['r_squared'] = feasibility_check(gram, event.w).r_squared

    disc = cfg.discretization()
    if disc is not None:
        dmodel = zoh_discretize(model, **disc)
        dgram = discrete_gramians(dmodel)
        matrices.update({'V_N': dgram.V, 'W_N': dgram.W})
        scalars['N'] = dmodel.N
        if event is not None:
            scalars['r_squared_N'] = feasibility_check(dgram, event.w).r_squared

    _emit_matrices("GRAMIANS", matrices, scalars, args.format or "table", args.out)
    return 0


def cmd_translate(cfg: RunConfig, args: Namespace) -> int:
    model = cfg.to_model()
    event = _require_event(cfg)
    gram = continuous_gramians(model)
    result = translate(model, gram, event, _p0(cfg, model, gram, event), _single_p1(cfg))
    if not result.feasible:
        return _infeasible(result.r_squared)

    values = result.as_dict()
    disc = cfg.discretization()
    if disc is not None:
        dmodel = zoh_discretize(model, **disc)
        dresult, _ = synthesize_discrete(discrete_gramians(dmodel), dmodel, result.p0, result.p1, event)
        values.update({'N': dmodel.N, 'r_squared_N': dresult.r_squared, 'e_min_N': dresult.e_min})
    emit_mapping("TRANSLATION", values, args.format or "table", args.out)
    return 0


def cmd_synthesize(cfg: RunConfig, args: Namespace) -> int:
    model = cfg.to_model()
    event = _require_event(cfg)
    gram = continuous_gramians(model)
    p0, p1 = _p0(cfg, model, gram, event), _single_p1(cfg)

    disc = cfg.discretization()
    if disc is not None:
        dmodel = zoh_discretize(model, **disc)
        result, law = synthesize_discrete(discrete_gramians(dmodel), dmodel, p0, p1, event)
    else:
        result = translate(model, gram, event, p0, p1)
        if not result.feasible:
            return _infeasible(result.r_squared)
        law = synthesize_continuous(result)

    frame = tabulate_law(law, args.samples or Config.SAMPLES)
    emit_frame(frame, args.format or "csv", args.out)
    if args.out is not None:
        print(f"[OK] E_min = {result.e_min:.17g}   beta = {result.beta:.17g}")
    else:
        logger.info(f"E_min = {result.e_min:.17g}, beta = {result.beta:.17g}")
    return 0


def cmd_discretize(cfg: RunConfig, args: Namespace) -> int:
    disc = cfg.discretization()
    if disc is None:
        raise ConfigurationError("discretize needs --dt or --n")
    dmodel = zoh_discretize(cfg.to_model(), **disc)
    matrices = {'A_d': dmodel.A_d, 'B_d': dmodel.B_d, 'Sigma_d': dmodel.Sigma_d, 'M': dmodel.metric.M}
    scalars = {'dt': dmodel.dt, 'N': dmodel.N, 'rank_M': dmodel.metric.rank,
               'rule_violation': dmodel.rule_violation}
    _emit_matrices("DISCRETE MODEL (ZOH)", matrices, scalars, args.format or "table", args.out)
    if dmodel.rule_violation:
        print(f"[WARN] dt={dmodel.dt:g} violates dt <= {Config.DT_RULE}/||A||", file=sys.stderr)
    return 0


def fresh_seed() -> int:
    return int(np.random.SeedSequence().entropy) % (2 ** 64)


def cmd_validate(cfg: RunConfig, args: Namespace) -> int:
    model = cfg.to_model()
    event = _require_event(cfg)
    seed = cfg.mc.seed
    if seed is None:
        seed = fresh_seed()
        print(f"[*] Seed: {seed}", file=sys.stderr)

    disc = cfg.discretization() or {'steps': Config.DEFAULT_STEPS}
    suite = SuiteConfig(
        n_paths=cfg.mc.n_paths,
        seed=seed,
        steps=disc.get('steps'),
        dt=disc.get('dt'),
        n_directions=args.directions,
        estimator=args.estimator,
        workers=args.workers,
        progress=args.progress,
    )
    report = run_validation_suite(model, event, _single_p1(cfg), suite, p0=cfg.p0)
    emit_report(report, args.format or "table", args.out)
    if not report.ok:
        failed = [row.test for row in report.rows if row.status != "ok"]
        logger.warning(f"rows outside tolerance: {', '.join(failed)}")
    return 0


def cmd_sweep(cfg: RunConfig, args: Namespace) -> int:
    model = cfg.to_model()
    event = _require_event(cfg)
    grid: List[float] = cfg.p1_grid()
    if not grid:
        raise ConfigurationError("sweep needs --p1 start:stop:step")
    gram = continuous_gramians(model)
    verdict = feasibility_check(gram, event.w)
    if not verdict.feasible:
        return _infeasible(verdict.r_squared)
    frame = energy_sweep(model, gram, event, _p0(cfg, model, gram, event), grid)
    emit_frame(frame, args.format or "csv", args.out)
    return 0


COMMANDS = {
    'gramians': cmd_gramians,
    'translate': cmd_translate,
    'synthesize': cmd_synthesize,
    'discretize': cmd_discretize,
    'validate': cmd_validate,
    'sweep': cmd_sweep,
}
