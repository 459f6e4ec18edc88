import math
from dataclasses import dataclass

import numpy as np

from core.errors import InvariantError, PreconditionError
from measurement.lattice import RationalStep, SampleSet, quantize_array

SeedLike = int | np.random.SeedSequence


@dataclass(frozen=True)
class MeasurementDevice:
    """Instrument with lattice sensitivity ``step`` and two error sources.

    ``systematic_offset`` is one fixed realization of the systematic error; it
    is the same for every reading. ``sigma_syst`` is the dispersion the
    instrument certificate states for it.
    """

    step: RationalStep
    sigma_syst: float
    sigma_rand: float
    systematic_offset: float = 0.0

    def __post_init__(self) -> None:
        values = (self.sigma_syst, self.sigma_rand, self.systematic_offset)
        if not all(math.isfinite(v) for v in values):
            raise InvariantError(f"MeasurementDevice fields must be finite: {self}")
        if self.sigma_syst < 0 or self.sigma_rand < 0:
            raise InvariantError(f"Error dispersions must be nonnegative: {self}")
        if self.sigma_syst**2 + self.sigma_rand**2 <= 0:
            raise InvariantError("sigma_syst^2 + sigma_rand^2 must be positive")

    @classmethod
    def with_drawn_offset(
        cls, step: RationalStep, sigma_syst: float, sigma_rand: float, seed: SeedLike
    ) -> "MeasurementDevice":
        """Draw the systematic offset once from Normal(0, sigma_syst^2)."""
        offset = float(np.random.default_rng(seed).normal(0.0, sigma_syst)) if sigma_syst else 0.0
        return cls(step, sigma_syst, sigma_rand, offset)

    @property
    def variance(self) -> float:
        """sigma^2 = sigma_syst^2 + sigma_rand^2."""
        return self.sigma_syst**2 + self.sigma_rand**2


def sample_measurements(dev: MeasurementDevice, x_true: float, n: int, seed: SeedLike) -> SampleSet:
    """n readings quantize(x_true + offset + eps_i), eps_i ~ Normal(0, sigma_rand^2)."""
    if n < 1:
        raise PreconditionError(f"Need at least one measurement, got n={n}")
    rng = np.random.default_rng(seed)
    noise = dev.sigma_rand * rng.standard_normal(n)
    return SampleSet(quantize_array(x_true + dev.systematic_offset + noise, dev.step), dev.step)
