import numpy as np
import pytest

from core.errors import PreconditionError, ZeroVarianceError
from measurement.convergence import (
    convergence_experiment,
    repeated_estimates,
    standardized_mean_coverage,
)
from measurement.device import MeasurementDevice
from measurement.lattice import LatticeInterval, RationalStep


@pytest.fixture
def device(twentieth) -> MeasurementDevice:
    return MeasurementDevice(twentieth, sigma_syst=0.2, sigma_rand=0.5, systematic_offset=0.0)


def test_gap_shrinks_to_monte_carlo_noise(device):
    report = convergence_experiment(
        device,
        x_true=0.0,
        n_schedule=[100, 1000, 10_000, 100_000],
        trials=1,
        seed=2024,
        iv=(-0.225, 0.225),
        n_fresh=100_000,
    )
    assert [row.n for row in report.rows] == [100, 1000, 10_000, 100_000]
    assert (report.interval.lower, report.interval.upper) == (-4, 5)
    assert report.final_gap <= 0.01
    assert report.is_non_increasing()
    for row in report.rows:
        assert 0.0 < row.probability < 1.0
        assert row.gap == pytest.approx(abs(row.frequency - row.probability))


def test_report_does_not_depend_on_workers(device):
    kwargs = dict(x_true=0.3, n_schedule=[10, 100], trials=3, seed=7, iv=(-0.225, 0.225))
    one = convergence_experiment(device, n_fresh=2000, workers=1, **kwargs)
    four = convergence_experiment(device, n_fresh=2000, workers=4, **kwargs)
    assert one == four
    assert all(row.gap_stderr > 0 for row in one.rows)


def test_interval_must_sit_on_half_points(device):
    with pytest.raises(PreconditionError):
        convergence_experiment(device, 0.0, [10], 1, 0, (-0.2, 0.225))
    with pytest.raises(PreconditionError):
        convergence_experiment(device, 0.0, [10], 1, 0, LatticeInterval(-1, 1, RationalStep(1, 10)))


@pytest.mark.parametrize("schedule", [[], [1, 10], [100, 100], [1000, 100]])
def test_schedule_is_validated(device, schedule):
    with pytest.raises(PreconditionError):
        convergence_experiment(device, 0.0, schedule, 1, 0, (-0.225, 0.225))


def test_convergence_needs_systematic_error(twentieth):
    dev = MeasurementDevice(twentieth, sigma_syst=0.0, sigma_rand=0.5)
    with pytest.raises(ZeroVarianceError):
        convergence_experiment(dev, 0.0, [10], 1, 0, (-0.225, 0.225))


def test_estimates_are_unbiased(twentieth):
    dev = MeasurementDevice(twentieth, sigma_syst=0.2, sigma_rand=0.5, systematic_offset=0.07)
    results = repeated_estimates(dev, 1.0, 20, 1000, seed=3)
    means = np.array([r.mean_est for r in results])
    assert abs(means.mean() - 1.07) <= 4 * 0.5 / np.sqrt(20 * 1000)
    s2 = np.array([r.s2_rand for r in results])
    assert s2.mean() == pytest.approx(0.25 + 0.05**2 / 12, rel=0.05)
    assert repeated_estimates(dev, 1.0, 20, 5, seed=3, workers=1) == results[:5]


def test_standardized_mean_coverage(device):
    result = standardized_mean_coverage(device, 0.0, 200, 2000, seed=11)
    assert result.expected == pytest.approx(0.95, abs=1e-3)
    assert abs(result.frequency - result.expected) <= 4 * result.stderr


def test_coverage_without_random_error_is_undefined(twentieth):
    dev = MeasurementDevice(twentieth, sigma_syst=0.2, sigma_rand=0.0)
    with pytest.raises(ZeroVarianceError):
        standardized_mean_coverage(dev, 0.0, 10, 3, seed=0)
