from enum import StrEnum


class Scheme(StrEnum):
    """Time-stepping schemes for Hamilton's equations."""

    LEAPFROG = "leapfrog"
    RK4 = "rk4"


class Interpolation(StrEnum):
    """Foot-point interpolation used by the semi-Lagrangian solver."""

    BILINEAR = "bilinear"
    CUBIC_CLAMPED = "cubic-clamped"

    @property
    def spline_order(self) -> int:
        return 1 if self is Interpolation.BILINEAR else 3


class ScenarioKind(StrEnum):
    EVOLVE = "evolve"
    MOMENTS = "moments"
    ENSEMBLE = "ensemble"
    MEASURE = "measure"
    CONVERGE = "converge"
    COMPOSE = "compose"


class ReconstructionKind(StrEnum):
    MODEL = "model"
    FINITE_N = "finite-n"
    LIMIT = "limit"
