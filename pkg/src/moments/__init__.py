from moments.closure import (
    CorrectionSeries,
    MomentRates,
    MomentTrajectory,
    NewtonTrajectory,
    evolve_moments,
    moment_rhs,
    newton_correction,
    newton_trajectory,
)

__all__ = [
    "CorrectionSeries",
    "MomentRates",
    "MomentTrajectory",
    "NewtonTrajectory",
    "evolve_moments",
    "moment_rhs",
    "newton_correction",
    "newton_trajectory",
]
