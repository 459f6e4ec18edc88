from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from core.errors import DomainTooSmallError, InvariantError
from core.settings import settings
from phase_space import observables
from phase_space.observables import Observable
from phase_space.states import GaussianState, MomentState

logger = logging.getLogger(__name__)

# Pre-renormalization mass below this means the domain truncates the state.
MIN_SAMPLED_MASS = 0.99


@dataclass(frozen=True)
class GridSpec:
    """Rectangular phase-space domain and its resolution (cells per axis)."""

    q_min: float
    q_max: float
    p_min: float
    p_max: float
    nq: int = 512
    np: int = 512

    def __post_init__(self) -> None:
        if not (self.q_min < self.q_max and self.p_min < self.p_max):
            raise InvariantError(f"Grid bounds must be ordered: {self}")
        if self.nq < 2 or self.np < 2:
            raise InvariantError(f"Grid needs at least 2 cells per axis: {self}")

    @classmethod
    def around(cls, state: GaussianState, widths: float | None = None, n: int = 256):
        """Square-celled domain covering ``widths`` Gaussian widths on each side."""
        widths = widths or settings.GRID_MIN_WIDTHS
        return cls(
            q_min=state.q0 - widths * state.a,
            q_max=state.q0 + widths * state.a,
            p_min=state.p0 - widths * state.b,
            p_max=state.p0 + widths * state.b,
            nq=n,
            np=n,
        )

    @property
    def dq(self) -> float:
        return (self.q_max - self.q_min) / self.nq

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / self.np

    def q_centers(self) -> np.ndarray:
        return self.q_min + (np.arange(self.nq) + 0.5) * self.dq

    def p_centers(self) -> np.ndarray:
        return self.p_min + (np.arange(self.np) + 0.5) * self.dp

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Cell-center coordinates, indexed [iq, ip]."""
        return np.meshgrid(self.q_centers(), self.p_centers(), indexing="ij")

    def to_index(self, q, p) -> np.ndarray:
        """Fractional (iq, ip) indices of phase points, cell centers at integers."""
        iq = (np.asarray(q, dtype=float) - self.q_min) / self.dq - 0.5
        ip = (np.asarray(p, dtype=float) - self.p_min) / self.dp - 0.5
        return np.stack([iq, ip])


@dataclass(frozen=True, eq=False)
class GridDensity:
    """Density samples at the cell centers of ``spec``; values[iq, ip] >= 0."""

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.shape != (self.spec.nq, self.spec.np):
            raise InvariantError(
                f"values shape {values.shape} does not match grid {self.spec.nq}x{self.spec.np}"
            )
        if not np.all(np.isfinite(values)):
            raise InvariantError("GridDensity values must be finite")
        if np.any(values < 0):
            raise InvariantError("GridDensity values must be nonnegative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def nq(self) -> int:
        return self.spec.nq

    @property
    def np(self) -> int:
        return self.spec.np

    def with_values(self, values: np.ndarray) -> GridDensity:
        return GridDensity(self.spec, values)

    def density_at(self, q, p, order: int = 3) -> np.ndarray:
        """Interpolated density at arbitrary points; zero outside the domain."""
        coords = self.spec.to_index(np.atleast_1d(q), np.atleast_1d(p))
        out = ndimage.map_coordinates(
            self.values, coords, order=order, mode="grid-constant", cval=0.0
        )
        return np.clip(out, 0.0, None)


def grid_from_state(
    state: GaussianState, spec: GridSpec | None = None, *, min_mass: float = MIN_SAMPLED_MASS
) -> GridDensity:
    """Sample ``state`` at cell centers and renormalize to unit midpoint mass."""
    spec = spec or GridSpec.around(state)
    q, p = spec.mesh()
    values = state.density(q, p)
    mass = float(values.sum() * spec.dq * spec.dp)
    if mass < min_mass:
        raise DomainTooSmallError(
            f"Sampled mass {mass:.6g} < {min_mass}: domain {spec} truncates the state"
        )
    logger.debug("sampled mass before renormalization: %.12g", mass)
    return GridDensity(spec, values / mass)


def total_mass(d: GridDensity) -> float:
    return float(d.values.sum() * d.spec.dq * d.spec.dp)


def integrate_observable(d: GridDensity, f: Observable) -> float:
    """Midpoint-rule value of the integral of f * rho over the domain."""
    q, p = d.spec.mesh()
    return float(np.sum(f(q, p) * d.values) * d.spec.dq * d.spec.dp)


def grid_moments(d: GridDensity) -> MomentState:
    """Mean and central second moments; normalized by the grid mass."""
    mass = total_mass(d)
    if mass <= 0:
        raise InvariantError("Cannot take moments of a density with zero mass")
    mean_q = integrate_observable(d, observables.Q) / mass
    mean_p = integrate_observable(d, observables.P) / mass
    return MomentState(
        mean_q=mean_q,
        mean_p=mean_p,
        var_q=integrate_observable(d, observables.centered_q2(mean_q)) / mass,
        var_p=integrate_observable(d, observables.centered_p2(mean_p)) / mass,
        cov_qp=integrate_observable(d, observables.centered_qp(mean_q, mean_p)) / mass,
    )


def l1_distance(d1: GridDensity, d2: GridDensity) -> float:
    if d1.spec != d2.spec:
        raise InvariantError("L1 distance needs densities on the same grid")
    return float(np.abs(d1.values - d2.values).sum() * d1.spec.dq * d1.spec.dp)
