"""Semi-Lagrangian solver for the single-particle Liouville equation.

The density is constant along Hamilton's characteristics, so one step of
length tau sets rho_new(z) = rho_old(Phi_{-tau}(z)) at every cell center z.
The foot points Phi_{-tau}(z) depend only on the grid and the (time
independent) Hamiltonian, so they are traced once per distinct tau and reused.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from core.errors import InvariantError, MassLeakError
from dynamics.integrators import IntegratorConfig, flow_arrays, step_sizes
from phase_space.grid import GridDensity, grid_moments
from phase_space.potentials import Hamiltonian
from phase_space.states import MomentState
from scenario_schema.models import Interpolation

logger = logging.getLogger(__name__)

# Per-run renormalization corrections above this are reported.
RENORMALIZATION_WARNING = 1e-6


@dataclass(frozen=True)
class SolverConfig:
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    interpolation: Interpolation = Interpolation.CUBIC_CLAMPED
    renormalize_each_step: bool = True
    mass_leak_tolerance: float = 1e-3

    def __post_init__(self) -> None:
        object.__setattr__(self, "interpolation", Interpolation(self.interpolation))
        if not 0 < self.mass_leak_tolerance <= 0.1:
            raise InvariantError(
                f"mass_leak_tolerance must lie in (0, 0.1], got {self.mass_leak_tolerance}"
            )


@dataclass(frozen=True)
class MomentSample:
    t: float
    moments: MomentState
    mass_raw: float


@dataclass(frozen=True, eq=False)
class EvolutionResult:
    density: GridDensity
    times: np.ndarray
    # mass retained from d0 after each step: the product of the per-step raw
    # masses, so renormalization does not hide a steady leak
    mass_raw: np.ndarray
    samples: list[MomentSample]
    snapshots: list[tuple[float, GridDensity]]

    @property
    def max_mass_deviation(self) -> float:
        if self.mass_raw.size == 0:
            return 0.0
        return float(np.max(np.abs(self.mass_raw - 1.0)))


def _foot_coordinates(d: GridDensity, h: Hamiltonian, tau: float, cfg: IntegratorConfig):
    q, p = d.spec.mesh()
    one_step = IntegratorConfig(dt=abs(tau), scheme=cfg.scheme)
    q_foot, p_foot = flow_arrays(q, p, h, -tau, one_step)
    return d.spec.to_index(q_foot, p_foot)


def evolve_semilagrangian(
    d0: GridDensity,
    h: Hamiltonian,
    t: float,
    cfg: SolverConfig,
    *,
    sample_every: int = 0,
    snapshot_times: Sequence[float] = (),
) -> EvolutionResult:
    """Advance ``d0`` by time t.

    ``sample_every`` > 0 records grid moments every that many steps (plus the
    initial and final states); ``snapshot_times`` keeps copies of the density
    at the first step reaching each requested time.
    """
    cfg.integrator.check_resolution(h)
    spec = d0.spec
    cell = spec.dq * spec.dp
    order = cfg.interpolation.spline_order
    steps = step_sizes(t, cfg.integrator.dt)

    values = np.array(d0.values)
    samples: list[MomentSample] = []
    if sample_every > 0:
        samples.append(MomentSample(0.0, grid_moments(d0), float(values.sum() * cell)))
    pending = sorted(s for s in snapshot_times if 0 <= s <= abs(t))
    snapshots: list[tuple[float, GridDensity]] = []
    while pending and pending[0] <= 0:
        snapshots.append((0.0, d0))
        pending.pop(0)

    feet: dict[float, np.ndarray] = {}
    times = np.empty(len(steps))
    masses = np.empty(len(steps))
    elapsed = 0.0
    retained = 1.0
    for i, tau in enumerate(steps):
        if tau not in feet:
            feet[tau] = _foot_coordinates(d0, h, tau, cfg.integrator)
        values = ndimage.map_coordinates(
            values, feet[tau], order=order, mode="grid-constant", cval=0.0
        )
        # cubic overshoots go negative in the tails
        np.clip(values, 0.0, None, out=values)
        step_mass = float(values.sum() * cell)
        mass = retained * step_mass
        elapsed = t if i == len(steps) - 1 else elapsed + tau
        times[i], masses[i] = elapsed, mass
        logger.debug("step %d t=%.6g raw mass %.12g", i + 1, elapsed, mass)
        if not math.isfinite(mass) or abs(mass - 1.0) > cfg.mass_leak_tolerance:
            raise MassLeakError(
                f"Raw mass {mass:.6g} at t={elapsed:.6g} left 1 +/- {cfg.mass_leak_tolerance}; "
                "the flow carries density out of the domain"
            )
        if cfg.renormalize_each_step:
            values /= step_mass
            retained = mass
        last = i == len(steps) - 1
        if sample_every > 0 and ((i + 1) % sample_every == 0 or last):
            samples.append(MomentSample(elapsed, grid_moments(d0.with_values(values)), mass))
        while pending and (abs(elapsed) >= pending[0] - 1e-12 or last):
            snapshots.append((pending.pop(0), d0.with_values(values)))

    result = EvolutionResult(
        density=d0.with_values(values) if steps else d0,
        times=times,
        mass_raw=masses,
        samples=samples,
        snapshots=snapshots,
    )
    if steps:
        logger.info(
            "evolved %d steps to t=%g: final raw mass %.12g, max deviation %.3g",
            len(steps),
            t,
            masses[-1],
            result.max_mass_deviation,
        )
        if cfg.renormalize_each_step and result.max_mass_deviation > RENORMALIZATION_WARNING:
            logger.warning(
                "renormalization corrected the mass by up to %.3g", result.max_mass_deviation
            )
    return result
