import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from core.errors import InvariantError
from dynamics.analytic import characteristic_density
from dynamics.integrators import (
    IntegratorConfig,
    hamilton_flow,
    hamilton_step,
    step_sizes,
    trajectory_arrays,
)
from phase_space.states import GaussianState, PhasePoint
from scenario_schema.models import Scheme


def test_step_sizes_end_with_exact_partial_step():
    steps = step_sizes(1.0, 0.3)
    assert steps[:3] == [0.3, 0.3, 0.3]
    assert steps[3] == pytest.approx(0.1)
    assert math.fsum(steps) == pytest.approx(1.0, abs=1e-15)


def test_step_sizes_backward_mirror_forward():
    assert step_sizes(-1.0, 0.3) == [-s for s in reversed(step_sizes(1.0, 0.3))]
    assert step_sizes(0.0, 0.1) == []
    assert step_sizes(1.0, 0.1) == [0.1] * 10


def test_integrator_config_validates_dt():
    with pytest.raises(InvariantError):
        IntegratorConfig(dt=0.0)
    assert IntegratorConfig(scheme="rk4").scheme is Scheme.RK4


def test_coarse_dt_is_flagged(harmonic_h):
    assert not IntegratorConfig(dt=1.0).check_resolution(harmonic_h)
    assert IntegratorConfig(dt=0.01).check_resolution(harmonic_h)


@pytest.mark.parametrize("scheme", list(Scheme))
def test_free_flow_is_exact(free_h, scheme):
    z = hamilton_flow(PhasePoint(0.5, 1.5), free_h, 2.0, IntegratorConfig(dt=0.1, scheme=scheme))
    assert z.q == pytest.approx(0.5 + 1.5 * 2.0, abs=1e-12)
    assert z.p == 1.5


def test_rk4_tracks_harmonic_solution(harmonic_h):
    z = hamilton_flow(PhasePoint(1.0, 0.0), harmonic_h, 1.0, IntegratorConfig(0.01, Scheme.RK4))
    assert z.q == pytest.approx(math.cos(1.0), abs=1e-9)
    assert z.p == pytest.approx(-math.sin(1.0), abs=1e-9)


def test_leapfrog_energy_error_stays_bounded(harmonic_h):
    cfg = IntegratorConfig(dt=0.01)
    _, qs, ps = trajectory_arrays(1.0, 0.0, harmonic_h, 20 * math.pi, cfg)
    energy = harmonic_h.energy(qs, ps)
    assert np.max(np.abs(energy - 0.5)) < 1e-4


def test_trajectory_times(quartic_h):
    times, qs, ps = trajectory_arrays(1.0, 0.0, quartic_h, 0.35, IntegratorConfig(dt=0.1))
    assert times[0] == 0.0 and times[-1] == 0.35
    assert len(times) == len(qs) == len(ps) == 5


def test_hamilton_step_matches_one_step_flow(quartic_h):
    z = PhasePoint(0.3, -0.2)
    stepped = hamilton_step(z, quartic_h, 0.05, Scheme.LEAPFROG)
    flowed = hamilton_flow(z, quartic_h, 0.05, IntegratorConfig(dt=0.05))
    assert stepped == flowed


@settings(
    max_examples=25, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture]
)
@given(
    q=st.floats(-2.0, 2.0),
    p=st.floats(-2.0, 2.0),
    t=st.floats(0.0, 2.0),
)
def test_leapfrog_backward_flow_undoes_forward_flow(quartic_h, q, p, t):
    cfg = IntegratorConfig(dt=1e-2)
    s = GaussianState(0.0, 0.0, 1.0, 1.0)
    forward = hamilton_flow(PhasePoint(q, p), quartic_h, t, cfg)
    back = hamilton_flow(forward, quartic_h, -t, cfg)
    assert abs(s.density(q, p) - s.density(back.q, back.p)) <= 1e-10


def test_characteristic_density_free_motion(free_h):
    s = GaussianState(0.0, 1.0, 1.0, 1.0)
    z = PhasePoint(2.5, 0.7)
    got = characteristic_density(s, free_h, z, 2.0, IntegratorConfig(dt=0.1))
    assert got == pytest.approx(s.density(2.5 - 0.7 * 2.0, 0.7), rel=1e-12)
