"""Gaussian moment closure for the single-particle Liouville dynamics.

Averaging Hamilton's equations over the density gives exact equations for
the first moments,

    d<q>/dt = <p>/m,   d<p>/dt = -<V'(q)>,

but <V'(q)> couples to every higher moment. Closing the hierarchy by setting
the third and higher cumulants to zero (the density stays Gaussian) and
expanding the mean force about <q> gives

    d mean_q/dt = mean_p / m
    d mean_p/dt = -[V'(mean_q) + V'''(mean_q) var_q / 2]
    d var_q/dt  = 2 cov / m
    d cov/dt    = var_p / m - V''(mean_q) var_q
    d var_p/dt  = -2 V''(mean_q) cov

For degree <= 2 potentials the closure is exact and the means follow
Newton's equation; for quartic V the V''' var_q term is the leading
correction to the Newtonian mean trajectory.
"""

import math
from dataclasses import astuple, dataclass

import numpy as np

from core.errors import ClosureBreakdownError, DegreeTooHighError, PreconditionError
from dynamics.integrators import IntegratorConfig, step_sizes, trajectory_arrays
from phase_space.potentials import Hamiltonian
from phase_space.states import (
    COVARIANCE_TOLERANCE,
    GaussianState,
    MomentState,
    PhasePoint,
    moments_of_gaussian,
)
from scenario_schema.models import Scheme

MAX_CLOSURE_DEGREE = 4


@dataclass(frozen=True)
class MomentRates:
    mean_q: float
    mean_p: float
    var_q: float
    var_p: float
    cov_qp: float

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)


@dataclass(frozen=True, eq=False)
class MomentTrajectory:
    times: np.ndarray
    states: list[MomentState]

    def __post_init__(self) -> None:
        if len(self.times) != len(self.states):
            raise PreconditionError("MomentTrajectory times and states differ in length")
        if np.any(np.diff(self.times) <= 0):
            raise PreconditionError("MomentTrajectory times must be strictly increasing")

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(state, name) for state in self.states])


@dataclass(frozen=True, eq=False)
class NewtonTrajectory:
    times: np.ndarray
    points: list[PhasePoint]

    def __post_init__(self) -> None:
        if np.any(np.diff(self.times) <= 0):
            raise PreconditionError("NewtonTrajectory times must be strictly increasing")

    @property
    def q(self) -> np.ndarray:
        return np.array([z.q for z in self.points])

    @property
    def p(self) -> np.ndarray:
        return np.array([z.p for z in self.points])


@dataclass(frozen=True, eq=False)
class CorrectionSeries:
    times: np.ndarray
    mean_q: np.ndarray
    q_newton: np.ndarray

    @property
    def correction(self) -> np.ndarray:
        return self.mean_q - self.q_newton


def _check_degree(h: Hamiltonian) -> None:
    if h.potential.degree > MAX_CLOSURE_DEGREE:
        raise DegreeTooHighError(
            f"Gaussian closure supports potentials up to degree {MAX_CLOSURE_DEGREE}, "
            f"got {h.potential.degree}"
        )


def _rates(y: np.ndarray, h: Hamiltonian) -> np.ndarray:
    mean_q, mean_p, var_q, var_p, cov = y
    v1 = h.potential.derivative(mean_q, 1)
    v2 = h.potential.derivative(mean_q, 2)
    v3 = h.potential.derivative(mean_q, 3)
    return np.array(
        [
            mean_p / h.mass,
            -(v1 + 0.5 * v3 * var_q),
            2.0 * cov / h.mass,
            -2.0 * v2 * cov,
            var_p / h.mass - v2 * var_q,
        ]
    )


def moment_rhs(ms: MomentState, h: Hamiltonian) -> MomentRates:
    _check_degree(h)
    y = ms.as_array()
    # internal order is (mean_q, mean_p, var_q, var_p, cov_qp), same as MomentState
    return MomentRates(*(float(v) for v in _rates(y, h)))


def _rk4_step(y: np.ndarray, h: Hamiltonian, dt: float) -> np.ndarray:
    k1 = _rates(y, h)
    k2 = _rates(y + 0.5 * dt * k1, h)
    k3 = _rates(y + 0.5 * dt * k2, h)
    k4 = _rates(y + dt * k3, h)
    return y + dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6


def _checked_state(y: np.ndarray, t: float) -> MomentState:
    mean_q, mean_p, var_q, var_p, cov = (float(v) for v in y)
    if not all(math.isfinite(v) for v in (mean_q, mean_p, var_q, var_p, cov)):
        raise ClosureBreakdownError(f"Moment closure diverged at t={t:.6g}")
    bound = var_q * var_p
    if var_q < 0 or var_p < 0 or cov**2 - bound > COVARIANCE_TOLERANCE * max(bound, 1e-300):
        raise ClosureBreakdownError(
            f"Closure broke down at t={t:.6g}: var_q={var_q:.6g}, var_p={var_p:.6g}, "
            f"cov_qp={cov:.6g} violate cov^2 <= var_q var_p"
        )
    return MomentState(mean_q, mean_p, var_q, var_p, cov)


def evolve_moments(ms0: MomentState, h: Hamiltonian, t: float, dt: float) -> MomentTrajectory:
    """RK4 integration of the closed moment equations, sampled after every step."""
    _check_degree(h)
    if not dt > 0:
        raise PreconditionError(f"dt must be positive, got {dt}")
    if t < 0:
        raise PreconditionError(f"Moment trajectories run forward in time, got t={t}")
    steps = step_sizes(t, dt)
    times = np.concatenate([[0.0], np.cumsum(steps)])
    if steps:
        times[-1] = t
    y = ms0.as_array()
    states = [ms0]
    for tau, now in zip(steps, times[1:]):
        y = _rk4_step(y, h, tau)
        states.append(_checked_state(y, now))
    return MomentTrajectory(times=times, states=states)


def newton_trajectory(
    z0: PhasePoint, h: Hamiltonian, t: float, dt: float, scheme: Scheme = Scheme.RK4
) -> NewtonTrajectory:
    """The classical point trajectory, sampled after every step.

    RK4 by default so that it shares its discretization with ``evolve_moments``.
    """
    if not dt > 0:
        raise PreconditionError(f"dt must be positive, got {dt}")
    if t < 0:
        raise PreconditionError(f"Newton trajectories run forward in time, got t={t}")
    times, qs, ps = trajectory_arrays(z0.q, z0.p, h, t, IntegratorConfig(dt=dt, scheme=scheme))
    return NewtonTrajectory(
        times=times, points=[PhasePoint(float(q), float(p)) for q, p in zip(qs, ps)]
    )


def newton_correction(s: GaussianState, h: Hamiltonian, t: float, dt: float) -> CorrectionSeries:
    """mean_q of the closure minus the Newtonian q started from (q0, p0)."""
    moments = evolve_moments(moments_of_gaussian(s), h, t, dt)
    newton = newton_trajectory(PhasePoint(s.q0, s.p0), h, t, dt)
    return CorrectionSeries(
        times=moments.times, mean_q=moments.column("mean_q"), q_newton=newton.q
    )
