import pytest

from measurement.lattice import RationalStep
from phase_space.grid import GridSpec
from phase_space.potentials import Hamiltonian, Potential
from phase_space.states import GaussianState


@pytest.fixture
def free_h() -> Hamiltonian:
    return Hamiltonian(mass=1.0, potential=Potential.free())


@pytest.fixture
def harmonic_h() -> Hamiltonian:
    return Hamiltonian(mass=1.0, potential=Potential.harmonic())


@pytest.fixture
def quartic_h() -> Hamiltonian:
    return Hamiltonian(mass=1.0, potential=Potential.quartic())


@pytest.fixture
def moving_state() -> GaussianState:
    """a = b = 1 packet at the origin moving with p0 = 1."""
    return GaussianState(q0=0.0, p0=1.0, a=1.0, b=1.0)


@pytest.fixture
def unit_state() -> GaussianState:
    return GaussianState(q0=0.0, p0=0.0, a=1.0, b=1.0)


@pytest.fixture
def wide_grid() -> GridSpec:
    return GridSpec(-12.0, 12.0, -12.0, 12.0, nq=256, np=256)


@pytest.fixture
def tenth() -> RationalStep:
    return RationalStep(1, 10)


@pytest.fixture
def twentieth() -> RationalStep:
    return RationalStep(1, 20)

