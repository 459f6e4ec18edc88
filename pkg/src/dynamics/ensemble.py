"""Monte Carlo oracle: push samples of a Gaussian state through Hamilton's flow.

Particles are drawn in fixed-size blocks; block k always uses the Philox
substream keyed by (seed, k). Shards only decide which thread runs which
block, so the concatenated sample and every statistic computed from it are
the same for any shard count.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from core.errors import PreconditionError
from core.settings import settings
from dynamics.integrators import IntegratorConfig, flow_arrays
from phase_space.potentials import Hamiltonian
from phase_space.states import GaussianState, MomentState

logger = logging.getLogger(__name__)

MIN_PARTICLES = 100


@dataclass(frozen=True)
class MomentErrors:
    """Standard errors of the five sample moments."""

    mean_q: float
    mean_p: float
    var_q: float
    var_p: float
    cov_qp: float


@dataclass(frozen=True)
class EnsembleResult:
    moments: MomentState
    standard_errors: MomentErrors
    n: int
    seed: int


def block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def _run_block(
    s: GaussianState,
    h: Hamiltonian,
    t: float,
    cfg: IntegratorConfig,
    seed: int,
    block: int,
    size: int,
) -> tuple[np.ndarray, np.ndarray]:
    rng = block_generator(seed, block)
    q = s.q0 + (s.a / math.sqrt(2.0)) * rng.standard_normal(size)
    p = s.p0 + (s.b / math.sqrt(2.0)) * rng.standard_normal(size)
    return flow_arrays(q, p, h, t, cfg)


def sample_ensemble(
    s: GaussianState,
    h: Hamiltonian,
    t: float,
    n: int,
    seed: int,
    cfg: IntegratorConfig,
    shards: int | None = None,
    block_size: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Final positions and momenta of n particles, in block order."""
    if n < MIN_PARTICLES:
        raise PreconditionError(f"Ensemble needs at least {MIN_PARTICLES} particles, got {n}")
    shards = shards or settings.ENSEMBLE_SHARDS
    block_size = block_size or settings.ENSEMBLE_BLOCK_SIZE
    sizes = [min(block_size, n - start) for start in range(0, n, block_size)]
    logger.debug("ensemble: %d particles in %d blocks over %d shards", n, len(sizes), shards)

    def run(block: int) -> tuple[np.ndarray, np.ndarray]:
        return _run_block(s, h, t, cfg, seed, block, sizes[block])

    with ThreadPoolExecutor(max_workers=shards) as pool:
        parts = list(pool.map(run, range(len(sizes))))
    q = np.concatenate([part[0] for part in parts])
    p = np.concatenate([part[1] for part in parts])
    return q, p


def sample_moments(q: np.ndarray, p: np.ndarray) -> tuple[MomentState, MomentErrors]:
    n = q.size
    dq = q - q.mean()
    dp = p - p.mean()
    var_q = float(dq @ dq) / (n - 1)
    var_p = float(dp @ dp) / (n - 1)
    cross = dq * dp
    cov = float(cross.sum()) / (n - 1)
    moments = MomentState(float(q.mean()), float(p.mean()), var_q, var_p, cov)
    errors = MomentErrors(
        mean_q=math.sqrt(var_q / n),
        mean_p=math.sqrt(var_p / n),
        var_q=math.sqrt(max(float(np.mean(dq**4)) - var_q**2, 0.0) / n),
        var_p=math.sqrt(max(float(np.mean(dp**4)) - var_p**2, 0.0) / n),
        cov_qp=math.sqrt(max(float(np.mean(cross**2)) - cov**2, 0.0) / n),
    )
    return moments, errors


def ensemble_evolve(
    s: GaussianState,
    h: Hamiltonian,
    t: float,
    n: int,
    seed: int,
    cfg: IntegratorConfig,
    shards: int | None = None,
) -> EnsembleResult:
    q, p = sample_ensemble(s, h, t, n, seed, cfg, shards=shards)
    moments, errors = sample_moments(q, p)
    return EnsembleResult(moments=moments, standard_errors=errors, n=n, seed=seed)
