from typing import Self

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from measurement.lattice import RationalStep
from scenario_schema.models import Interpolation, ScenarioKind, Scheme


class Section(BaseModel):
    """Base for every config table: unknown keys are errors, values are immutable."""

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)


class ScenarioSection(Section):
    kind: ScenarioKind = Field(
        description="Which scenario to run.",
        examples=["evolve", "converge"],
    )
    seed: int | None = Field(
        description="Root seed for every random stream. Defaults to DEFAULT_SEED.",
        default=None,
        ge=0,
    )
    output_dir: str | None = Field(
        description="Directory for emitted files. Defaults to OUTPUT_DIR.",
        default=None,
    )
    t: float = Field(description="Time horizon.", default=1.0)
    dt: float = Field(description="Integrator time step.", default=1e-3, gt=0)
    sample_every: int = Field(
        description="Record moments every this many steps (0 keeps only the endpoints).",
        default=10,
        ge=0,
    )


class StateSection(Section):
    """Gaussian initial state (q0, p0, a, b)."""

    q0: float = 0.0
    p0: float = 0.0
    a: float = Field(default=1.0, gt=0)
    b: float = Field(default=1.0, gt=0)


class HamiltonianSection(Section):
    mass: float = Field(default=1.0, gt=0)
    potential: list[float] = Field(
        description="Coefficients c0..cd of V(q) = sum c_k q^k.",
        default=[],
        examples=[[0.0, 0.0, 0.5], [0.0, 0.0, 0.0, 0.0, 0.25]],
    )


class GridSection(Section):
    q_min: float = -12.0
    q_max: float = 12.0
    p_min: float = -12.0
    p_max: float = 12.0
    nq: int = Field(default=512, ge=2)
    np: int = Field(default=512, ge=2)

    @model_validator(mode="after")
    def check_bounds(self) -> Self:
        if not (self.q_min < self.q_max and self.p_min < self.p_max):
            raise ValueError("grid bounds must satisfy q_min < q_max and p_min < p_max")
        return self


class SolverSection(Section):
    scheme: Scheme = Scheme.LEAPFROG
    interpolation: Interpolation = Interpolation.CUBIC_CLAMPED
    renormalize_each_step: bool = True
    mass_leak_tolerance: float = Field(default=1e-3, gt=0, le=0.1)
    snapshot_times: list[float] = Field(
        description="Times at which the density grid is written out.",
        default=[],
    )


class EnsembleSection(Section):
    n: int = Field(default=100_000, ge=100)
    shards: int | None = Field(
        description="Worker threads. Results do not depend on it.",
        default=None,
        ge=1,
    )


class DeviceSection(Section):
    step: str = Field(
        description="Instrument sensitivity as an exact fraction.",
        default="1/10",
        examples=["1/10", "1/20"],
    )
    sigma_syst: float = Field(default=0.0, ge=0)
    sigma_rand: float = Field(default=1.0, ge=0)
    systematic_offset: float | None = Field(
        description="Fixed systematic error; drawn once from Normal(0, sigma_syst^2) if absent.",
        default=None,
    )
    x_true: float = 0.0
    n: int = Field(default=1000, ge=1)

    @field_validator("step")
    @classmethod
    def normalize_step(cls, v: str) -> str:
        return str(RationalStep.parse(v))

    @model_validator(mode="after")
    def check_dispersion(self) -> Self:
        if self.sigma_syst**2 + self.sigma_rand**2 <= 0:
            raise ValueError("sigma_syst^2 + sigma_rand^2 must be positive")
        return self

    @property
    def rational_step(self) -> RationalStep:
        return RationalStep.parse(self.step)


class ConvergenceSection(Section):
    n_schedule: list[int] = Field(default=[100, 1000, 10_000, 100_000])
    trials: int = Field(default=1, ge=1)
    n_fresh: int = Field(default=100_000, ge=1)
    lower_index: int = Field(
        description="Interval lower end a = step * (lower_index - 1/2).",
        default=-4,
    )
    upper_index: int = Field(
        description="Interval upper end b = step * (upper_index - 1/2).",
        default=5,
    )

    @model_validator(mode="after")
    def check_schedule(self) -> Self:
        schedule = self.n_schedule
        if not schedule or min(schedule) < 2:
            raise ValueError("n_schedule needs sample sizes >= 2")
        if any(later <= earlier for earlier, later in zip(schedule, schedule[1:])):
            raise ValueError("n_schedule must be strictly increasing")
        if self.lower_index > self.upper_index:
            raise ValueError("lower_index must not exceed upper_index")
        return self


class MomentumSection(Section):
    """Momentum model paired with a measured position marginal in ``compose``."""

    mean: float = 0.0
    variance: float = Field(default=0.5, gt=0)


class PlotSection(Section):
    enabled: bool = True


class ScenarioConfig(Section):
    scenario: ScenarioSection
    state: StateSection = StateSection()
    hamiltonian: HamiltonianSection = HamiltonianSection()
    grid: GridSection = GridSection()
    solver: SolverSection = SolverSection()
    ensemble: EnsembleSection = EnsembleSection()
    device: DeviceSection = DeviceSection()
    convergence: ConvergenceSection = ConvergenceSection()
    momentum: MomentumSection = MomentumSection()
    observables: dict[str, str] = Field(
        description="Extra observables for evolve, as numexpr expressions in q and p.",
        default={},
        examples=[{"q4": "q**4", "kinetic": "p**2 / 2"}],
    )
    plot: PlotSection = PlotSection()

    @model_validator(mode="after")
    def check_kind(self) -> Self:
        kind = self.scenario.kind
        if kind in (ScenarioKind.MOMENTS, ScenarioKind.COMPOSE) and self.scenario.t < 0:
            raise ValueError(f"{kind} runs forward in time; scenario.t must be >= 0")
        if kind is ScenarioKind.MEASURE and self.device.n < 2:
            raise ValueError("measure needs device.n >= 2 to estimate the dispersion")
        if kind is ScenarioKind.CONVERGE and not self.device.sigma_syst > 0:
            raise ValueError("converge needs device.sigma_syst > 0")
        return self


class EmittedFile(BaseModel):
    path: str = Field(description="Path of the file, relative to the output directory.")
    role: str = Field(
        description="What the file holds.",
        examples=["moments", "snapshot", "plot"],
    )
    size: int = Field(description="Size in bytes.", ge=1)


class RunReport(BaseModel):
    """Summary of one scenario run."""

    kind: ScenarioKind
    seed: int
    output_dir: str
    files: list[EmittedFile] = []
    duration_s: float = Field(description="Wall-clock duration in seconds.", default=0.0)
    diagnostics: dict[str, float] = Field(
        description="Scalar checks such as final raw mass or the largest invariant residual.",
        default={},
    )
