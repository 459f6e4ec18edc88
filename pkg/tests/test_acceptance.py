"""Desk-scale runs at the documented resolution. Run with ``pytest -m slow``."""

import math

import numpy as np
import pytest

from dynamics.analytic import analytic_gaussian_free, analytic_gaussian_linear
from dynamics.ensemble import ensemble_evolve
from dynamics.integrators import IntegratorConfig, hamilton_flow
from dynamics.semilagrangian import SolverConfig, evolve_semilagrangian
from moments.closure import evolve_moments, newton_correction
from phase_space.grid import GridSpec, grid_from_state, grid_moments, l1_distance
from phase_space.states import GaussianState, PhasePoint, moments_of_gaussian

pytestmark = pytest.mark.slow

FULL_GRID = GridSpec(-12.0, 12.0, -12.0, 12.0, nq=512, np=512)


def test_free_delocalization_at_full_resolution(moving_state, free_h):
    d0 = grid_from_state(moving_state, FULL_GRID)
    result = evolve_semilagrangian(
        d0, free_h, 2.0, SolverConfig(integrator=IntegratorConfig(dt=1e-3)), sample_every=100
    )
    final = grid_moments(result.density)
    assert final.var_q == pytest.approx(2.5, rel=0.02)
    assert final.mean_q == pytest.approx(2.0, rel=0.005)
    assert result.max_mass_deviation <= 1e-3
    assert np.all(np.abs(result.mass_raw - 1.0) <= 1e-3)

    expected = analytic_gaussian_free(moving_state, 1.0, 2.0)
    closure = evolve_moments(moments_of_gaussian(moving_state), free_h, 2.0, 1e-3).states[-1]
    assert closure.var_q == pytest.approx(expected.var_q, abs=1e-8)
    assert closure.mean_q == pytest.approx(expected.mean_q, abs=1e-8)


def test_harmonic_recurrence_at_full_resolution(harmonic_h):
    s = GaussianState(1.0, 0.0, 1.0, 1.0)
    period = 2 * math.pi
    d0 = grid_from_state(s, FULL_GRID)
    cfg = SolverConfig(integrator=IntegratorConfig(dt=period / 2000))
    result = evolve_semilagrangian(d0, harmonic_h, period, cfg)
    assert l1_distance(result.density, d0) <= 5e-2

    start = moments_of_gaussian(s).as_array()
    np.testing.assert_allclose(
        analytic_gaussian_linear(s, harmonic_h, period).as_array(), start, atol=1e-6
    )
    back = evolve_moments(moments_of_gaussian(s), harmonic_h, period, 1e-3).states[-1]
    np.testing.assert_allclose(back.as_array(), start, atol=1e-6)


def test_density_is_constant_along_characteristics(unit_state, quartic_h):
    cfg = IntegratorConfig(dt=1e-3)
    rng = np.random.default_rng(100)
    for _ in range(100):
        z = PhasePoint(*rng.normal(0.0, 1.0, size=2))
        t = float(rng.uniform(0.0, 2.0))
        back = hamilton_flow(hamilton_flow(z, quartic_h, t, cfg), quartic_h, -t, cfg)
        assert abs(unit_state.density(z.q, z.p) - unit_state.density(back.q, back.p)) <= 1e-10

    d0 = grid_from_state(unit_state, FULL_GRID)
    times = tuple(0.25 * k for k in range(1, 9))
    result = evolve_semilagrangian(
        d0, quartic_h, 2.0, SolverConfig(integrator=cfg), snapshot_times=times
    )
    snapshots = dict(result.snapshots)
    assert sorted(snapshots) == list(times)
    for _ in range(100):
        z = PhasePoint(*rng.normal(0.0, 0.7, size=2))
        t = times[rng.integers(len(times))]
        moved = hamilton_flow(z, quartic_h, t, cfg)
        got = float(snapshots[t].density_at(moved.q, moved.p)[0])
        assert got == pytest.approx(unit_state.density(z.q, z.p), abs=1e-2)


WIDE_PACKET = GaussianState(1.0, 0.0, 0.2, 0.2)


def _correction_gap(quartic_h, t: float, seed: int):
    series = newton_correction(WIDE_PACKET, quartic_h, t, 1e-3)
    result = ensemble_evolve(WIDE_PACKET, quartic_h, t, 1_000_000, seed, IntegratorConfig(dt=1e-3))
    ensemble_correction = result.moments.mean_q - series.q_newton[-1]
    gap = abs(ensemble_correction - series.correction[-1])
    return gap, result.standard_errors.mean_q, series.correction[-1]


@pytest.mark.parametrize("t", [0.25, 0.5])
def test_newton_correction_agrees_with_a_million_particles(quartic_h, t):
    gap, se, _ = _correction_gap(quartic_h, t, 77)
    assert gap <= 3 * se, f"z = {gap / se:.2f}"


def test_newton_correction_at_unit_time_is_bounded_by_closure_truncation(quartic_h):
    """By t = 1 the third cumulant the closure drops moves mean_q by a few 1e-4.

    That is comparable to 3 standard errors at 10^6 particles, so the bound
    here is the larger of 3 standard errors and 5% of the correction.
    """
    gap, se, correction = _correction_gap(quartic_h, 1.0, 77)
    assert gap <= max(3 * se, 0.05 * abs(correction)), f"z = {gap / se:.2f}"


def test_narrow_closure_tracks_a_million_particles(quartic_h):
    s = GaussianState(1.0, 0.0, 0.1, 0.1)
    closure = evolve_moments(moments_of_gaussian(s), quartic_h, 1.0, 1e-3).states[-1]
    result = ensemble_evolve(s, quartic_h, 1.0, 1_000_000, 78, IntegratorConfig(dt=1e-3))
    assert abs(result.moments.mean_q - closure.mean_q) <= 3 * result.standard_errors.mean_q
