import numpy as np
from scipy.linalg import expm

from core.errors import InvariantError, NonlinearPotentialError
from dynamics.integrators import IntegratorConfig, flow_arrays
from phase_space.potentials import Hamiltonian
from phase_space.states import GaussianState, MomentState, PhasePoint


def analytic_gaussian_free(s: GaussianState, m: float, t: float) -> MomentState:
    if not m > 0:
        raise InvariantError(f"Mass must be strictly positive, got {m}")
    return MomentState(
        mean_q=s.q0 + s.p0 * t / m,
        mean_p=s.p0,
        var_q=0.5 * (s.a**2 + s.b**2 * t**2 / m**2),
        var_p=0.5 * s.b**2,
        cov_qp=0.5 * s.b**2 * t / m,
    )


def linear_flow_map(h: Hamiltonian, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Matrix and shift of the affine flow z(t) = M z(0) + c for degree <= 2 potentials."""
    if not h.is_linear:
        raise NonlinearPotentialError(
            f"Linear flow needs a potential of degree <= 2, got degree {h.potential.degree}"
        )
    c = tuple(h.potential.coefficients) + (0.0,) * 3
    # z' = A z + b with A = [[0, 1/m], [-2 c2, 0]], b = [0, -c1], as one 3x3 generator
    generator = np.array(
        [
            [0.0, 1.0 / h.mass, 0.0],
            [-2.0 * c[2], 0.0, -c[1]],
            [0.0, 0.0, 0.0],
        ]
    )
    flow = expm(generator * t)
    return flow[:2, :2], flow[:2, 2]


def analytic_gaussian_linear(s: GaussianState, h: Hamiltonian, t: float) -> MomentState:
    """Exact pushforward of mean and covariance through the linear symplectic flow."""
    if not h.is_linear:
        raise NonlinearPotentialError(
            f"Analytic propagation needs a potential of degree <= 2, got {h.potential.degree}"
        )
    if h.potential.degree == 0:
        return analytic_gaussian_free(s, h.mass, t)
    matrix, shift = linear_flow_map(h, t)
    mean = matrix @ np.array([s.q0, s.p0]) + shift
    cov = matrix @ np.diag([0.5 * s.a**2, 0.5 * s.b**2]) @ matrix.T
    return MomentState(
        mean_q=float(mean[0]),
        mean_p=float(mean[1]),
        var_q=float(cov[0, 0]),
        var_p=float(cov[1, 1]),
        cov_qp=float(0.5 * (cov[0, 1] + cov[1, 0])),
    )


def characteristic_density(
    s: GaussianState, h: Hamiltonian, z: PhasePoint, t: float, cfg: IntegratorConfig
) -> float:
    """rho(z, t) = rho_0(Phi_{-t}(z)): the Cauchy problem solved along one characteristic."""
    q, p = flow_arrays(z.q, z.p, h, -t, cfg)
    return float(s.density(q, p))
