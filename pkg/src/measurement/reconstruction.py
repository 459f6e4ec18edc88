import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.stats import norm

from core.errors import (
    InsufficientSamplesError,
    InvariantError,
    PreconditionError,
    WindowTooSmallError,
    ZeroVarianceError,
)
from measurement.lattice import LatticeInterval, RationalStep, SampleSet
from scenario_schema.models import ReconstructionKind

# Largest probability mass allowed outside a cell window.
MAX_TAIL_MASS = 1e-6


@dataclass(frozen=True)
class ReconstructionDensity:
    """Normal density with the given mean and variance (no delta reconstructions)."""

    mean: float
    variance: float
    kind: ReconstructionKind = ReconstructionKind.MODEL

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mean) and math.isfinite(self.variance)):
            raise InvariantError(f"ReconstructionDensity fields must be finite: {self}")
        if self.variance <= 0:
            raise ZeroVarianceError(
                f"Reconstruction variance must be positive, got {self.variance}"
            )
        object.__setattr__(self, "kind", ReconstructionKind(self.kind))

    @property
    def sigma(self) -> float:
        return math.sqrt(self.variance)

    def pdf(self, x):
        return norm.pdf(x, loc=self.mean, scale=self.sigma)

    def mass_between(self, lo, hi):
        """P(lo < X < hi), taken from whichever tail keeps the subtraction accurate."""
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        upper_side = lo > self.mean
        via_sf = norm.sf(lo, self.mean, self.sigma) - norm.sf(hi, self.mean, self.sigma)
        via_cdf = norm.cdf(hi, self.mean, self.sigma) - norm.cdf(lo, self.mean, self.sigma)
        return np.where(upper_side, via_sf, via_cdf)


@dataclass(frozen=True)
class DiscreteDistribution:
    """Probabilities of lattice indices; ``tail_mass`` is what the window leaves out."""

    step: RationalStep
    probs: dict[int, float]
    tail_mass: float = 0.0
    counts: dict[int, int] | None = None

    def __post_init__(self) -> None:
        if any(p < 0 for p in self.probs.values()):
            raise InvariantError("Cell probabilities must be nonnegative")

    def total(self) -> float:
        return math.fsum(self.probs.values())

    def get(self, m: int) -> float:
        return self.probs.get(m, 0.0)


@dataclass(frozen=True)
class EstimateResult:
    mean_est: float
    s2_rand: float
    s2_total: float
    density: ReconstructionDensity
    n: int


def window_around(density: ReconstructionDensity, step: RationalStep, n_sigma: float = 8.0):
    """Index window whose cells cover mean +/- n_sigma standard deviations."""
    lo = math.floor((density.mean - n_sigma * density.sigma) / step.value) - 1
    hi = math.ceil((density.mean + n_sigma * density.sigma) / step.value) + 1
    return lo, hi


def cell_probabilities(
    density: ReconstructionDensity, step: RationalStep, window: tuple[int, int] | None = None
) -> DiscreteDistribution:
    """p_m = integral of the density over [step (m - 1/2), step (m + 1/2)] for m in window."""
    lo, hi = window or window_around(density, step)
    if lo > hi:
        raise PreconditionError(f"Empty index window ({lo}, {hi})")
    m = np.arange(lo, hi + 1)
    lower = step.half_point(m)
    upper = step.half_point(m + 1)
    probs = density.mass_between(lower, upper)
    tail = float(
        norm.cdf(lower[0], density.mean, density.sigma)
        + norm.sf(upper[-1], density.mean, density.sigma)
    )
    if tail > MAX_TAIL_MASS:
        raise WindowTooSmallError(
            f"Window ({lo}, {hi}) leaves tail mass {tail:.3g} > {MAX_TAIL_MASS}; widen it"
        )
    return DiscreteDistribution(
        step=step,
        probs={int(k): float(max(v, 0.0)) for k, v in zip(m, probs)},
        tail_mass=tail,
    )


def estimate(s: SampleSet, sigma_syst: float) -> EstimateResult:
    """Sample mean, random-error dispersion and the finite-n reconstruction Normal(X̄, S²).

    Sums run over the exact integer lattice indices in Python ints, so X̄ and
    S²_rand are exact rationals rounded once to floating point.
    """
    n = s.n
    if n < 2:
        raise InsufficientSamplesError(f"Estimation needs n >= 2 samples, got {n}")
    step = s.step.fraction
    # Python ints: int64 squares of large indices overflow
    ref = int(s.indices[0])
    shifted = [int(m) - ref for m in s.indices.tolist()]
    sum_m = sum(shifted)
    sum_m2 = sum(d * d for d in shifted)
    mean_est = float((ref + Fraction(sum_m, n)) * step)
    s2_rand = float(Fraction(n * sum_m2 - sum_m * sum_m, n * (n - 1)) * step * step)
    s2_total = s2_rand / n + sigma_syst**2
    if s2_total <= 0:
        raise ZeroVarianceError(
            "Total error dispersion S^2 is zero: the data define a delta reconstruction"
        )
    return EstimateResult(
        mean_est=mean_est,
        s2_rand=s2_rand,
        s2_total=s2_total,
        density=ReconstructionDensity(mean_est, s2_total, ReconstructionKind.FINITE_N),
        n=n,
    )


def rho_infinity(mean_est: float, sigma_syst: float) -> ReconstructionDensity:
    """Large-n limit Normal(X̄, sigma_syst^2) of the reconstruction."""
    if not sigma_syst > 0:
        raise ZeroVarianceError(f"rho_infinity needs sigma_syst > 0, got {sigma_syst}")
    return ReconstructionDensity(mean_est, sigma_syst**2, ReconstructionKind.LIMIT)


def interval_probability(density: ReconstructionDensity, iv: LatticeInterval) -> float:
    if iv.lower == iv.upper:
        return 0.0
    return float(density.mass_between(iv.a, iv.b))


def empirical_cell_frequencies(s: SampleSet) -> DiscreteDistribution:
    """Relative frequencies n_m / n over the indices present in the sample."""
    indices, counts = np.unique(s.indices, return_counts=True)
    return DiscreteDistribution(
        step=s.step,
        probs={int(m): int(c) / s.n for m, c in zip(indices, counts)},
        counts={int(m): int(c) for m, c in zip(indices, counts)},
    )


def frequency_in_interval(s: SampleSet, iv: LatticeInterval) -> float:
    """k{X in [a, b]} / n."""
    return int(np.count_nonzero(iv.contains(s.indices))) / s.n
