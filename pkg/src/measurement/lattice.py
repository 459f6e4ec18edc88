import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from core.errors import InvariantError, PreconditionError

# Distance (in index units) from a half-point below which the float fast path
# hands a value over to exact rational rounding.
TIE_GUARD = 1e-9


@dataclass(frozen=True)
class RationalStep:
    """Instrument sensitivity numerator/denominator; readings live on step * Z."""

    numerator: int
    denominator: int

    def __post_init__(self) -> None:
        if not (isinstance(self.numerator, int) and isinstance(self.denominator, int)):
            raise InvariantError(
                f"RationalStep needs integers, got {self.numerator!r}/{self.denominator!r}"
            )
        if self.numerator <= 0 or self.denominator <= 0:
            raise InvariantError(
                f"RationalStep must be positive, got {self.numerator}/{self.denominator}"
            )
        g = math.gcd(self.numerator, self.denominator)
        object.__setattr__(self, "numerator", self.numerator // g)
        object.__setattr__(self, "denominator", self.denominator // g)

    @classmethod
    def parse(cls, text: str) -> "RationalStep":
        """Parse "num/den" (or a bare integer)."""
        num, sep, den = str(text).strip().partition("/")
        try:
            return cls(int(num), int(den) if sep else 1)
        except ValueError as e:
            raise InvariantError(f"Cannot parse lattice step {text!r}: expected 'num/den'") from e

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def value(self) -> float:
        return self.numerator / self.denominator

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"

    def lattice_value(self, m):
        return m * self.numerator / self.denominator

    def half_point(self, m: int) -> float:
        """step * (m - 1/2), the lower edge of cell m."""
        return (2 * m - 1) * self.numerator / (2 * self.denominator)


def quantize(x: float, step: RationalStep) -> int:
    """Index of the nearest lattice point; exact half-points round half-even."""
    if not math.isfinite(x):
        raise InvariantError(f"Cannot quantize non-finite value {x}")
    return round(Fraction(x) / step.fraction)


def quantize_array(x, step: RationalStep) -> np.ndarray:
    """Vectorized ``quantize``; values within TIE_GUARD of a half-point are rounded exactly."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise InvariantError("Cannot quantize non-finite values")
    scaled = x * step.denominator / step.numerator
    indices = np.rint(scaled).astype(np.int64)
    near_tie = np.abs(np.abs(scaled - np.floor(scaled)) - 0.5) < TIE_GUARD
    for i in np.flatnonzero(near_tie):
        indices.flat[i] = quantize(float(x.flat[i]), step)
    return indices


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Measurement results as exact lattice indices sharing one step."""

    indices: np.ndarray
    step: RationalStep

    def __post_init__(self) -> None:
        indices = np.array(self.indices, dtype=np.int64).ravel()
        if indices.size < 1:
            raise InvariantError("SampleSet needs at least one sample")
        indices.setflags(write=False)
        object.__setattr__(self, "indices", indices)

    @property
    def n(self) -> int:
        return int(self.indices.size)

    def values(self) -> np.ndarray:
        return self.step.lattice_value(self.indices.astype(float))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SampleSet):
            return NotImplemented
        return self.step == other.step and np.array_equal(self.indices, other.indices)


@dataclass(frozen=True)
class LatticeInterval:
    """[step (m - 1/2), step (l - 1/2)]: a union of whole lattice cells m .. l-1."""

    lower: int
    upper: int
    step: RationalStep

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise PreconditionError(
                f"Interval indices must satisfy m <= l, got {self.lower} > {self.upper}"
            )

    @classmethod
    def from_endpoints(cls, a: float, b: float, step: RationalStep) -> "LatticeInterval":
        """Snap a, b to half-point indices; raise if either is off the half-point lattice."""
        indices = []
        for end in (a, b):
            shifted = end / step.value + 0.5
            m = round(shifted)
            if abs(shifted - m) > TIE_GUARD * max(1.0, abs(shifted)):
                raise PreconditionError(
                    f"Interval endpoint {end} is not on the half-point lattice {step} * (Z - 1/2)"
                )
            indices.append(int(m))
        return cls(indices[0], indices[1], step)

    @property
    def a(self) -> float:
        return self.step.half_point(self.lower)

    @property
    def b(self) -> float:
        return self.step.half_point(self.upper)

    def contains(self, indices) -> np.ndarray:
        indices = np.asarray(indices)
        return (indices >= self.lower) & (indices < self.upper)
