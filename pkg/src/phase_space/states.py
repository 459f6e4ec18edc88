import math
from dataclasses import astuple, dataclass

import numpy as np

from core.errors import InvariantError

# Relative slack allowed on cov^2 <= var_q * var_p before a MomentState is rejected.
COVARIANCE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PhasePoint:
    q: float
    p: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.q) and math.isfinite(self.p)):
            raise InvariantError(f"Phase point must be finite, got ({self.q}, {self.p})")


@dataclass(frozen=True)
class GaussianState:
    """Product Gaussian (1/(pi a b)) exp(-(q-q0)^2/a^2) exp(-(p-p0)^2/b^2).

    Both widths must be strictly positive: a point (delta) state is not a state.
    """

    q0: float
    p0: float
    a: float
    b: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.q0, self.p0, self.a, self.b)):
            raise InvariantError(f"GaussianState fields must be finite: {self}")
        if self.a <= 0 or self.b <= 0:
            raise InvariantError(
                f"GaussianState widths must be positive (a={self.a}, b={self.b})"
            )

    @classmethod
    def from_moments(cls, mean_q: float, mean_p: float, var_q: float, var_p: float):
        return cls(mean_q, mean_p, math.sqrt(2.0 * var_q), math.sqrt(2.0 * var_p))

    def density(self, q, p):
        """Vectorized density on arrays of q and p."""
        return (
            np.exp(-((q - self.q0) ** 2) / self.a**2)
            * np.exp(-((p - self.p0) ** 2) / self.b**2)
            / (np.pi * self.a * self.b)
        )


@dataclass(frozen=True)
class MomentState:
    mean_q: float
    mean_p: float
    var_q: float
    var_p: float
    cov_qp: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in astuple(self)):
            raise InvariantError(f"MomentState fields must be finite: {self}")
        if self.var_q < 0 or self.var_p < 0:
            raise InvariantError(f"Variances must be nonnegative: {self}")
        if self.covariance_excess() > COVARIANCE_TOLERANCE:
            raise InvariantError(f"cov_qp^2 exceeds var_q * var_p: {self}")

    def covariance_excess(self) -> float:
        """Relative amount by which cov^2 exceeds var_q * var_p (<= 0 when valid)."""
        bound = self.var_q * self.var_p
        excess = self.cov_qp**2 - bound
        return excess / bound if bound > 0 else excess

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)


def gaussian_density_at(state: GaussianState, point: PhasePoint) -> float:
    return float(state.density(point.q, point.p))


def moments_of_gaussian(state: GaussianState) -> MomentState:
    return MomentState(
        mean_q=state.q0,
        mean_p=state.p0,
        var_q=0.5 * state.a**2,
        var_p=0.5 * state.b**2,
        cov_qp=0.0,
    )
