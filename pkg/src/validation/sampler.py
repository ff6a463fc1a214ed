"""
Monte Carlo sampling.

Paths are grouped in fixed-size blocks; block b of stream s under seed k draws
from Philox keyed by SeedSequence(k, spawn_key=(s, b)). A path's noise thus
depends only on (seed, stream, path index), never on how many workers run
the blocks, and results are gathered back in block order.
"""

import asyncio
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
from tqdm.asyncio import tqdm as atqdm

from ..config import Config
from ..linalg import psd_sqrt
from ..models import ControlLaw, DiscreteModel, Estimator, EventSpec, LawKind, McEstimate
from ..utils.errors import DegeneracyError, DimensionError, DomainError, UnsupportedLawError
from ..utils.logger import setup_logger

logger = setup_logger(__name__)


def block_generator(seed: int, stream: int, block: int) -> np.random.Generator:
    """Counter-based generator for one block of one stream."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream, block)))
    )


def _block_sizes(n_paths: int, block_size: int) -> List[int]:
    full, rest = divmod(n_paths, block_size)
    return [block_size] * full + ([rest] if rest else [])


async def _gather_blocks(job: Callable[[int, int], object], sizes: List[int], workers: int,
                         desc: str, progress: bool) -> list:
    semaphore = asyncio.Semaphore(max(1, workers))
    results: list = [None] * len(sizes)

    async def run_block(index: int, size: int, pbar) -> None:
        async with semaphore:
            results[index] = await asyncio.to_thread(job, index, size)
            pbar.update(1)

    with atqdm(total=len(sizes), desc=desc, unit="block", disable=not progress) as pbar:
        await asyncio.gather(*(run_block(i, s, pbar) for i, s in enumerate(sizes)))
    return results


def run_blocks(job: Callable[[int, int], object], n_paths: int, workers: int = Config.WORKERS,
               block_size: int = Config.BLOCK_SIZE, desc: str = "Sampling",
               progress: bool = False) -> list:
    """Run ``job(block_index, block_size)`` over all blocks; results in block order."""
    if n_paths < 1:
        raise DomainError(f"n_paths must be >= 1, got {n_paths}")
    sizes = _block_sizes(n_paths, block_size)
    return asyncio.run(_gather_blocks(job, sizes, workers, desc, progress))


@dataclass(frozen=True, eq=False)
class TerminalSample:
    """Simulated terminal projections w'X_N (and optionally full states)."""

    projections: np.ndarray
    states: Optional[np.ndarray]
    n_paths: int
    seed: int


def simulate_terminal(dmodel: DiscreteModel, law: Optional[ControlLaw], n_paths: int, seed: int,
                      w: np.ndarray, full_state: bool = False, stream: int = 0,
                      workers: int = Config.WORKERS, block_size: int = Config.BLOCK_SIZE,
                      progress: bool = False) -> TerminalSample:
    """
    Simulate X_{k+1} = A_d X_k + B_d U_k + xi_k, xi_k ~ N(0, Sigma_d).

    ``law=None`` runs the uncontrolled system.
    """
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (dmodel.n,):
        raise DimensionError(f"w must have length {dmodel.n}")
    if law is None:
        drift = np.zeros((dmodel.N, dmodel.n))
    elif law.kind == LawKind.DISCRETE_MATCHED:
        if law.sequence.shape != (dmodel.N, dmodel.m):
            raise DimensionError(f"law has {law.sequence.shape[0]} steps, model has {dmodel.N}")
        drift = law.sequence @ dmodel.B_d.T
    else:
        raise UnsupportedLawError(f"path simulation needs a discrete law, got {law.kind.value}")

    L = psd_sqrt(dmodel.Sigma_d)
    A_t = dmodel.A_d.T
    x0 = dmodel.source.x0

    def job(block: int, size: int):
        rng = block_generator(seed, stream, block)
        X = np.tile(x0, (size, 1))
        for k in range(dmodel.N):
            X = X @ A_t + drift[k] + rng.standard_normal((size, dmodel.n)) @ L.T
        return X if full_state else X @ w

    blocks = run_blocks(job, n_paths, workers, block_size, "Simulating paths", progress)
    if full_state:
        states = np.concatenate(blocks, axis=0)
        return TerminalSample(projections=states @ w, states=states, n_paths=n_paths, seed=seed)
    return TerminalSample(projections=np.concatenate(blocks), states=None, n_paths=n_paths, seed=seed)


def _bernoulli_estimate(hits: int, n: int, seed: int, estimator: Estimator) -> McEstimate:
    p = hits / n
    # sample std of the indicators, divided by sqrt(n)
    se = math.sqrt(p * (1.0 - p) / (n - 1)) if n > 1 else 0.0
    return McEstimate(value=p, se=se, n_paths=n, seed=seed, estimator=estimator)


def estimate_probability(sample: TerminalSample, event: EventSpec) -> McEstimate:
    """Indicator-mean estimate of the event probability from simulated paths."""
    hits = int(np.count_nonzero(event.contains(sample.projections)))
    return _bernoulli_estimate(hits, sample.n_paths, sample.seed, Estimator.INDICATOR_MEAN)


def scalar_mc(m: float, v: float, event: EventSpec, n_paths: int, seed: int, stream: int = 0,
              workers: int = Config.WORKERS, block_size: int = Config.BLOCK_SIZE,
              progress: bool = False) -> McEstimate:
    """Estimate P(Y in event) for Y ~ N(m, v) by sampling Y directly."""
    if not v > 0:
        raise DegeneracyError(f"variance must be > 0, got {v}")
    s = math.sqrt(v)

    def job(block: int, size: int) -> int:
        y = m + s * block_generator(seed, stream, block).standard_normal(size)
        return int(np.count_nonzero(event.contains(y)))

    hits = sum(run_blocks(job, n_paths, workers, block_size, "Scalar MC", progress))
    return _bernoulli_estimate(hits, n_paths, seed, Estimator.SCALAR_SHORTCUT)


def jackknife_variance(y: np.ndarray, groups: int = Config.JACKKNIFE_GROUPS) -> Tuple[float, float]:
    """Sample variance and its delete-one-group jackknife standard error."""
    y = np.asarray(y, dtype=np.float64)
    n = y.size
    groups = min(groups, n)
    if n < 3 or groups < 2:
        raise DomainError("jackknife needs at least 3 observations")
    centred = y - y.mean()
    chunks = np.array_split(centred, groups)
    counts = np.array([c.size for c in chunks], dtype=np.float64)
    s1 = np.array([c.sum() for c in chunks])
    s2 = np.array([np.dot(c, c) for c in chunks])

    n_out = n - counts
    s1_out = s1.sum() - s1
    s2_out = s2.sum() - s2
    var_out = (s2_out - s1_out ** 2 / n_out) / (n_out - 1.0)
    se = math.sqrt((groups - 1) / groups * float(np.sum((var_out - var_out.mean()) ** 2)))
    return float(np.var(y, ddof=1)), se
