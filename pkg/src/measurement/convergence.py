"""Monte Carlo checks of the large-n reconstruction.

Every (sample size, trial) pair owns the substream
``SeedSequence(seed, spawn_key=(k, j))``, split into one stream for the
n-sample estimate and one for the fresh draws, so reports do not depend on
how many worker threads run the trials.

Fresh draws model what the limit density describes once the random error
has averaged out: a reading of ``x_true + systematic_offset`` blurred by the
residual systematic uncertainty ``Normal(0, sigma_syst^2)`` and quantized on
the device lattice. With half-point interval endpoints the in-interval
frequency of the quantized draws estimates exactly the continuous integral.
"""

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from core.errors import PreconditionError, ZeroVarianceError
from core.settings import settings
from measurement.device import MeasurementDevice, sample_measurements
from measurement.lattice import LatticeInterval, SampleSet, quantize_array
from measurement.reconstruction import (
    EstimateResult,
    estimate,
    frequency_in_interval,
    interval_probability,
    rho_infinity,
)

logger = logging.getLogger(__name__)

DEFAULT_FRESH_DRAWS = 100_000


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    probability: float
    frequency: float
    gap: float
    gap_stderr: float
    mc_error: float

    @property
    def error_bar(self) -> float:
        return max(self.gap_stderr, self.mc_error)


@dataclass(frozen=True)
class ConvergenceReport:
    rows: list[ConvergenceRow]
    interval: LatticeInterval
    trials: int
    n_fresh: int
    seed: int

    def is_non_increasing(self, k: float = 2.0) -> bool:
        """Whether each gap stays below its predecessor plus k combined error bars."""
        return all(
            later.gap <= earlier.gap + k * (earlier.error_bar + later.error_bar)
            for earlier, later in zip(self.rows, self.rows[1:])
        )

    @property
    def final_gap(self) -> float:
        return self.rows[-1].gap


@dataclass(frozen=True)
class CoverageResult:
    frequency: float
    expected: float
    stderr: float
    trials: int
    half_width: float


def _as_interval(iv: LatticeInterval | tuple[float, float], dev: MeasurementDevice):
    if isinstance(iv, LatticeInterval):
        if iv.step != dev.step:
            raise PreconditionError(f"Interval step {iv.step} differs from device step {dev.step}")
        return iv
    a, b = iv
    return LatticeInterval.from_endpoints(a, b, dev.step)


def _fresh_draws(
    dev: MeasurementDevice, x_true: float, n_fresh: int, seed: np.random.SeedSequence
) -> SampleSet:
    rng = np.random.default_rng(seed)
    values = x_true + dev.systematic_offset + dev.sigma_syst * rng.standard_normal(n_fresh)
    return SampleSet(quantize_array(values, dev.step), dev.step)


def _trial(
    dev: MeasurementDevice,
    x_true: float,
    n: int,
    iv: LatticeInterval,
    n_fresh: int,
    seed: np.random.SeedSequence,
) -> tuple[float, float]:
    estimate_seed, fresh_seed = seed.spawn(2)
    result = estimate(sample_measurements(dev, x_true, n, estimate_seed), dev.sigma_syst)
    probability = interval_probability(rho_infinity(result.mean_est, dev.sigma_syst), iv)
    frequency = frequency_in_interval(_fresh_draws(dev, x_true, n_fresh, fresh_seed), iv)
    return probability, frequency


def convergence_experiment(
    dev: MeasurementDevice,
    x_true: float,
    n_schedule: Sequence[int],
    trials: int,
    seed: int,
    iv: LatticeInterval | tuple[float, float],
    n_fresh: int = DEFAULT_FRESH_DRAWS,
    workers: int | None = None,
) -> ConvergenceReport:
    """|fresh in-interval frequency - integral of rho_infinity over [a, b]| for each n."""
    iv = _as_interval(iv, dev)
    schedule = [int(n) for n in n_schedule]
    if not schedule or any(n < 2 for n in schedule):
        raise PreconditionError(f"n_schedule needs sample sizes >= 2, got {schedule}")
    if any(later <= earlier for earlier, later in zip(schedule, schedule[1:])):
        raise PreconditionError(f"n_schedule must be strictly increasing, got {schedule}")
    if trials < 1:
        raise PreconditionError(f"trials must be >= 1, got {trials}")
    if n_fresh < 1:
        raise PreconditionError(f"n_fresh must be >= 1, got {n_fresh}")
    if not dev.sigma_syst > 0:
        raise ZeroVarianceError("convergence_experiment needs sigma_syst > 0")

    jobs = [(k, j) for k in range(len(schedule)) for j in range(trials)]

    def run(job: tuple[int, int]) -> tuple[float, float]:
        k, j = job
        ss = np.random.SeedSequence(seed, spawn_key=(k, j))
        return _trial(dev, x_true, schedule[k], iv, n_fresh, ss)

    logger.info(
        "convergence: %d sample sizes x %d trials, %d fresh draws each",
        len(schedule), trials, n_fresh,
    )
    with ThreadPoolExecutor(max_workers=workers or settings.ENSEMBLE_SHARDS) as pool:
        outcomes = list(pool.map(run, jobs))

    rows = []
    for k, n in enumerate(schedule):
        chunk = np.array(outcomes[k * trials : (k + 1) * trials])
        probability = float(chunk[:, 0].mean())
        frequency = float(chunk[:, 1].mean())
        gaps = np.abs(chunk[:, 1] - chunk[:, 0])
        mc_error = math.sqrt(probability * (1.0 - probability) / n_fresh)
        if trials > 1:
            gap_stderr = float(gaps.std(ddof=1)) / math.sqrt(trials)
        else:
            gap_stderr = mc_error
        rows.append(
            ConvergenceRow(
                n=n,
                probability=probability,
                frequency=frequency,
                gap=float(gaps.mean()),
                gap_stderr=gap_stderr,
                mc_error=mc_error,
            )
        )
        logger.debug("convergence: n=%d gap=%.3g", n, rows[-1].gap)
    return ConvergenceReport(rows=rows, interval=iv, trials=trials, n_fresh=n_fresh, seed=seed)


def repeated_estimates(
    dev: MeasurementDevice,
    x_true: float,
    n: int,
    trials: int,
    seed: int,
    workers: int | None = None,
) -> list[EstimateResult]:
    """``trials`` independent n-sample estimates; trial j uses spawn key (j,)."""
    if trials < 1:
        raise PreconditionError(f"trials must be >= 1, got {trials}")

    def run(j: int) -> EstimateResult:
        ss = np.random.SeedSequence(seed, spawn_key=(j,))
        return estimate(sample_measurements(dev, x_true, n, ss), dev.sigma_syst)

    with ThreadPoolExecutor(max_workers=workers or settings.ENSEMBLE_SHARDS) as pool:
        return list(pool.map(run, range(trials)))


def standardized_mean_coverage(
    dev: MeasurementDevice,
    x_true: float,
    n: int,
    trials: int,
    seed: int,
    half_width: float = 1.96,
) -> CoverageResult:
    """How often (X̄ - x_true - offset) / sqrt(S²_rand / n) lands in (-half_width, half_width).

    The expected frequency is the standard normal mass of that interval, so n
    should be large enough for the normal approximation to hold.
    """
    if not half_width > 0:
        raise PreconditionError(f"half_width must be positive, got {half_width}")
    center = x_true + dev.systematic_offset
    hits = 0
    for result in repeated_estimates(dev, x_true, n, trials, seed):
        if result.s2_rand <= 0:
            raise ZeroVarianceError(
                "S²_rand is zero in a trial; the standardized mean is undefined"
            )
        z = (result.mean_est - center) / math.sqrt(result.s2_rand / n)
        hits += abs(z) < half_width
    frequency = hits / trials
    expected = float(norm.cdf(half_width) - norm.cdf(-half_width))
    return CoverageResult(
        frequency=frequency,
        expected=expected,
        stderr=math.sqrt(expected * (1.0 - expected) / trials),
        trials=trials,
        half_width=half_width,
    )
