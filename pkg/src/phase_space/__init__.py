from phase_space.grid import (
    GridDensity,
    GridSpec,
    grid_from_state,
    grid_moments,
    integrate_observable,
    l1_distance,
    total_mass,
)
from phase_space.observables import Observable, expression_observable
from phase_space.potentials import Hamiltonian, Potential, potential_derivative
from phase_space.states import (
    GaussianState,
    MomentState,
    PhasePoint,
    gaussian_density_at,
    moments_of_gaussian,
)

__all__ = [
    "GaussianState",
    "GridDensity",
    "GridSpec",
    "Hamiltonian",
    "MomentState",
    "Observable",
    "PhasePoint",
    "Potential",
    "expression_observable",
    "gaussian_density_at",
    "grid_from_state",
    "grid_moments",
    "integrate_observable",
    "l1_distance",
    "moments_of_gaussian",
    "potential_derivative",
    "total_mass",
]
