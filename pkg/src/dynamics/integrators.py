import logging
import math
from dataclasses import dataclass

import numpy as np

from core.errors import InvariantError
from phase_space.potentials import Hamiltonian
from phase_space.states import PhasePoint
from scenario_schema.models import Scheme

logger = logging.getLogger(__name__)

# Fraction of the harmonic period above which a time step draws a warning.
MAX_PERIOD_FRACTION = 0.1


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 1e-3
    scheme: Scheme = Scheme.LEAPFROG

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise InvariantError(f"Integrator dt must be positive, got {self.dt}")
        object.__setattr__(self, "scheme", Scheme(self.scheme))

    def check_resolution(self, h: Hamiltonian) -> bool:
        """Warn when dt resolves a harmonic period too coarsely."""
        period = h.harmonic_period()
        if period is not None and self.dt > MAX_PERIOD_FRACTION * period:
            logger.warning(
                "dt=%g exceeds %.0f%% of the harmonic period %.4g",
                self.dt,
                100 * MAX_PERIOD_FRACTION,
                period,
            )
            return False
        return True


def _leapfrog(q, p, h: Hamiltonian, dt: float):
    # kick-drift-kick; symmetric, hence time-reversible
    p_half = p + 0.5 * dt * h.force(q)
    q_new = q + dt * p_half / h.mass
    return q_new, p_half + 0.5 * dt * h.force(q_new)


def _rk4(q, p, h: Hamiltonian, dt: float):
    m = h.mass
    k1q, k1p = p / m, h.force(q)
    k2q, k2p = (p + 0.5 * dt * k1p) / m, h.force(q + 0.5 * dt * k1q)
    k3q, k3p = (p + 0.5 * dt * k2p) / m, h.force(q + 0.5 * dt * k2q)
    k4q, k4p = (p + dt * k3p) / m, h.force(q + dt * k3q)
    q_new = q + dt * (k1q + 2 * k2q + 2 * k3q + k4q) / 6
    p_new = p + dt * (k1p + 2 * k2p + 2 * k3p + k4p) / 6
    return q_new, p_new


_STEPPERS = {Scheme.LEAPFROG: _leapfrog, Scheme.RK4: _rk4}


def step_arrays(q, p, h: Hamiltonian, dt: float, scheme: Scheme = Scheme.LEAPFROG):
    """One step of q' = p/m, p' = -V'(q) on scalars or arrays; dt may be negative."""
    return _STEPPERS[Scheme(scheme)](q, p, h, dt)


def step_sizes(t: float, dt: float) -> list[float]:
    """Signed step sequence covering t: whole steps of dt then one exact partial step.

    For negative t the sequence is the reverse of the one for |t|, so a backward
    flow undoes the forward flow step by step.
    """
    span = abs(t)
    n = int(math.floor(span / dt + 1e-9))
    remainder = span - n * dt
    steps = [dt] * n
    if remainder > 1e-12 * max(1.0, span):
        steps.append(remainder)
    if t < 0:
        return [-s for s in reversed(steps)]
    return steps


def flow_arrays(q, p, h: Hamiltonian, t: float, cfg: IntegratorConfig):
    for tau in step_sizes(t, cfg.dt):
        q, p = step_arrays(q, p, h, tau, cfg.scheme)
    return q, p


def hamilton_step(z: PhasePoint, h: Hamiltonian, dt: float, scheme: Scheme) -> PhasePoint:
    q, p = step_arrays(z.q, z.p, h, dt, scheme)
    return PhasePoint(float(q), float(p))


def hamilton_flow(z: PhasePoint, h: Hamiltonian, t: float, cfg: IntegratorConfig) -> PhasePoint:
    """Flow z for time t (negative t flows backward)."""
    q, p = flow_arrays(z.q, z.p, h, t, cfg)
    return PhasePoint(float(q), float(p))


def trajectory_arrays(q, p, h: Hamiltonian, t: float, cfg: IntegratorConfig):
    """Times and states after every step of ``flow_arrays``, starting at t=0."""
    steps = step_sizes(t, cfg.dt)
    times = np.concatenate([[0.0], np.cumsum(steps)])
    if steps:
        times[-1] = t
    qs, ps = [q], [p]
    for tau in steps:
        q, p = step_arrays(q, p, h, tau, cfg.scheme)
        qs.append(q)
        ps.append(p)
    return np.array(times), np.array(qs), np.array(ps)
