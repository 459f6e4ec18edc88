from measurement.convergence import (
    ConvergenceReport,
    ConvergenceRow,
    CoverageResult,
    convergence_experiment,
    repeated_estimates,
    standardized_mean_coverage,
)
from measurement.device import MeasurementDevice, sample_measurements
from measurement.lattice import (
    LatticeInterval,
    RationalStep,
    SampleSet,
    quantize,
    quantize_array,
)
from measurement.reconstruction import (
    DiscreteDistribution,
    EstimateResult,
    ReconstructionDensity,
    cell_probabilities,
    empirical_cell_frequencies,
    estimate,
    frequency_in_interval,
    interval_probability,
    rho_infinity,
    window_around,
)

__all__ = [
    "ConvergenceReport",
    "ConvergenceRow",
    "CoverageResult",
    "DiscreteDistribution",
    "EstimateResult",
    "LatticeInterval",
    "MeasurementDevice",
    "RationalStep",
    "ReconstructionDensity",
    "SampleSet",
    "cell_probabilities",
    "convergence_experiment",
    "empirical_cell_frequencies",
    "estimate",
    "frequency_in_interval",
    "interval_probability",
    "quantize",
    "quantize_array",
    "repeated_estimates",
    "rho_infinity",
    "sample_measurements",
    "standardized_mean_coverage",
    "window_around",
]
