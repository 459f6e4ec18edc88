import math

import numpy as np
import pytest

from core.errors import ClosureBreakdownError, DegreeTooHighError, PreconditionError
from dynamics.analytic import analytic_gaussian_free, analytic_gaussian_linear
from moments.closure import (
    evolve_moments,
    moment_rhs,
    newton_correction,
    newton_trajectory,
)
from phase_space.potentials import Hamiltonian, Potential
from phase_space.states import GaussianState, MomentState, PhasePoint, moments_of_gaussian


def test_rates_for_quartic_include_variance_force(quartic_h):
    ms = MomentState(mean_q=1.0, mean_p=0.5, var_q=0.02, var_p=0.03, cov_qp=0.01)
    rates = moment_rhs(ms, quartic_h)
    assert rates.mean_q == 0.5
    # -(V'(1) + V'''(1) var_q / 2) = -(1 + 6 * 0.01)
    assert rates.mean_p == pytest.approx(-1.06)
    assert rates.var_q == pytest.approx(0.02)
    assert rates.cov_qp == pytest.approx(0.03 - 3.0 * 0.02)
    assert rates.var_p == pytest.approx(-2 * 3.0 * 0.01)


def test_free_closure_matches_analytic(moving_state, free_h):
    traj = evolve_moments(moments_of_gaussian(moving_state), free_h, 2.0, 1e-3)
    expected = analytic_gaussian_free(moving_state, 1.0, 2.0)
    final = traj.states[-1]
    assert traj.times[-1] == 2.0
    np.testing.assert_allclose(final.as_array(), expected.as_array(), atol=1e-8)


def test_harmonic_closure_recurs(harmonic_h):
    s = GaussianState(1.0, 0.0, 1.0, 1.0)
    traj = evolve_moments(moments_of_gaussian(s), harmonic_h, 2 * math.pi, 1e-2)
    np.testing.assert_allclose(
        traj.states[-1].as_array(), moments_of_gaussian(s).as_array(), atol=1e-6
    )


def test_quadratic_potential_has_no_correction():
    h = Hamiltonian(1.0, Potential((0.3, -0.2, 0.7)))
    series = newton_correction(GaussianState(1.0, 0.5, 0.4, 0.3), h, 2.0, 1e-2)
    assert np.max(np.abs(series.correction)) <= 1e-8


def test_quartic_correction_pulls_mean_inward(quartic_h):
    series = newton_correction(GaussianState(1.0, 0.0, 0.2, 0.2), quartic_h, 0.5, 1e-3)
    # the extra V''' var_q / 2 force points toward the origin
    assert series.correction[-1] < 0
    assert series.correction[0] == 0.0


def test_newton_trajectory_is_sampled_each_step(quartic_h):
    traj = newton_trajectory(PhasePoint(1.0, 0.0), quartic_h, 0.1, 0.01)
    assert len(traj.points) == len(traj.times) == 11
    assert traj.q[0] == 1.0


def test_high_degree_potential_is_rejected(moving_state):
    h = Hamiltonian(1.0, Potential((0.0,) * 6 + (1.0,)))
    with pytest.raises(DegreeTooHighError):
        moment_rhs(moments_of_gaussian(moving_state), h)
    with pytest.raises(DegreeTooHighError):
        evolve_moments(moments_of_gaussian(moving_state), h, 1.0, 0.1)


def test_preconditions(moving_state, free_h):
    ms = moments_of_gaussian(moving_state)
    with pytest.raises(PreconditionError):
        evolve_moments(ms, free_h, -1.0, 0.1)
    with pytest.raises(PreconditionError):
        evolve_moments(ms, free_h, 1.0, 0.0)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_runaway_closure_reports_breakdown():
    inverted = Hamiltonian(1.0, Potential((0.0, 0.0, 0.0, 0.0, -1.0)))
    s = GaussianState(1.0, 0.0, 0.3, 0.3)
    with pytest.raises(ClosureBreakdownError):
        evolve_moments(moments_of_gaussian(s), inverted, 10.0, 1e-2)


@pytest.mark.parametrize(
    "potential",
    [(0.0,), (0.0, 0.0, 0.5), (0.3, -0.4, 0.8)],
    ids=["free", "harmonic", "shifted-quadratic"],
)
def test_closure_is_exact_for_linear_forces_at_every_step(potential):
    h = Hamiltonian(1.3, Potential(potential))
    s = GaussianState(0.7, -0.4, 0.6, 0.9)
    traj = evolve_moments(moments_of_gaussian(s), h, 2.0, 1e-2)
    for t, state in zip(traj.times, traj.states):
        expected = analytic_gaussian_linear(s, h, float(t))
        np.testing.assert_allclose(state.as_array(), expected.as_array(), atol=1e-8)


def test_correction_shrinks_as_the_packet_narrows(quartic_h):
    corrections = [
        abs(newton_correction(GaussianState(1.0, 0.0, w, w), quartic_h, 1.0, 1e-2).correction[-1])
        for w in (0.4, 0.2, 0.1, 0.05)
    ]
    assert all(narrow < wide for wide, narrow in zip(corrections, corrections[1:]))
    assert corrections[-1] > 0
