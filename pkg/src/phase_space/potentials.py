from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import Polynomial

from core.errors import InvariantError, UnsupportedOrderError
from core.settings import settings

MAX_DERIVATIVE_ORDER = 3


@dataclass(frozen=True)
class Potential:
    """Polynomial potential V(q) = sum_k coefficients[k] * q**k."""

    coefficients: tuple[float, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs:
            raise InvariantError("Potential needs at least one coefficient")
        if not all(np.isfinite(coeffs)):
            raise InvariantError(f"Potential coefficients must be finite: {coeffs}")
        # trailing zeros do not raise the degree
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)
        if self.degree > settings.MAX_POTENTIAL_DEGREE:
            raise InvariantError(
                f"Potential degree {self.degree} exceeds the configured cap "
                f"{settings.MAX_POTENTIAL_DEGREE}"
            )

    @classmethod
    def free(cls) -> "Potential":
        return cls((0.0,))

    @classmethod
    def harmonic(cls, k: float = 1.0) -> "Potential":
        """V = k q^2 / 2."""
        return cls((0.0, 0.0, 0.5 * k))

    @classmethod
    def quartic(cls, g: float = 1.0) -> "Potential":
        """V = g q^4 / 4."""
        return cls((0.0, 0.0, 0.0, 0.0, 0.25 * g))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @cached_property
    def _derivatives(self) -> tuple[Polynomial, ...]:
        poly = Polynomial(self.coefficients)
        return tuple(poly.deriv(k) if k else poly for k in range(MAX_DERIVATIVE_ORDER + 1))

    def derivative(self, q, order: int = 0):
        """Exact derivative of the given order at q (scalar or array)."""
        if not 0 <= order <= MAX_DERIVATIVE_ORDER:
            raise UnsupportedOrderError(
                f"Potential derivatives of order {order} are not supported "
                f"(0..{MAX_DERIVATIVE_ORDER})"
            )
        return self._derivatives[order](q)


def potential_derivative(pot: Potential, q: float, order: int) -> float:
    return float(pot.derivative(q, order))


@dataclass(frozen=True)
class Hamiltonian:
    """H = p^2 / 2m + V(q)."""

    mass: float
    potential: Potential

    def __post_init__(self) -> None:
        if not (np.isfinite(self.mass) and self.mass > 0):
            raise InvariantError(f"Mass must be strictly positive, got {self.mass}")

    def energy(self, q, p):
        return p * p / (2.0 * self.mass) + self.potential.derivative(q, 0)

    def force(self, q):
        return -self.potential.derivative(q, 1)

    @property
    def is_linear(self) -> bool:
        """Force is affine in q (potential degree <= 2)."""
        return self.potential.degree <= 2

    def harmonic_period(self) -> float | None:
        """Period 2*pi*sqrt(m / V'') for a confining quadratic potential, else None."""
        if self.potential.degree != 2:
            return None
        stiffness = 2.0 * self.potential.coefficients[2]
        if stiffness <= 0:
            return None
        return 2.0 * np.pi * np.sqrt(self.mass / stiffness)
