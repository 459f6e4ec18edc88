from dynamics.analytic import (
    analytic_gaussian_free,
    analytic_gaussian_linear,
    characteristic_density,
)
from dynamics.ensemble import EnsembleResult, MomentErrors, ensemble_evolve
from dynamics.integrators import IntegratorConfig, hamilton_flow, hamilton_step
from dynamics.semilagrangian import EvolutionResult, SolverConfig, evolve_semilagrangian

__all__ = [
    "EnsembleResult",
    "EvolutionResult",
    "IntegratorConfig",
    "MomentErrors",
    "SolverConfig",
    "analytic_gaussian_free",
    "analytic_gaussian_linear",
    "characteristic_density",
    "ensemble_evolve",
    "evolve_semilagrangian",
    "hamilton_flow",
    "hamilton_step",
]
