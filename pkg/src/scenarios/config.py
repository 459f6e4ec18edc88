"""TOML scenario documents: parsing, rendering and translation to domain objects."""

import tomllib
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import tomli_w
from pydantic import ValidationError

from core.errors import ConfigError, FuncMechError
from core.settings import settings
from dynamics.integrators import IntegratorConfig
from dynamics.semilagrangian import SolverConfig
from measurement.device import MeasurementDevice
from measurement.lattice import LatticeInterval
from phase_space.grid import GridSpec
from phase_space.observables import Observable, expression_observable
from phase_space.potentials import Hamiltonian, Potential
from phase_space.states import GaussianState
from scenario_schema.schema import ScenarioConfig

# Substream keys derived from the scenario seed.
OFFSET_STREAM = 0
SAMPLE_STREAM = 1


def _describe(error: ValidationError) -> str:
    problems = []
    for err in error.errors():
        loc = ".".join(str(part) for part in err["loc"]) or "<root>"
        if err["type"] == "extra_forbidden":
            problems.append(f"unknown key '{loc}'")
        else:
            problems.append(f"{loc}: {err['msg']}")
    return "; ".join(problems)


def parse_config(text: str) -> ScenarioConfig:
    try:
        document = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        # the decoder message already carries "(at line L, column C)"
        raise ConfigError(f"Malformed config: {e}") from e
    try:
        return ScenarioConfig.model_validate(document)
    except ValidationError as e:
        raise ConfigError(f"Invalid config: {_describe(e)}") from e


def load_config(path: str | Path) -> ScenarioConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e
    return parse_config(text)


def render_config(cfg: ScenarioConfig) -> str:
    """TOML text that ``parse_config`` turns back into ``cfg``."""
    return tomli_w.dumps(cfg.model_dump(mode="json", exclude_none=True))


@contextmanager
def _section(name: str):
    """Re-raise domain errors from building ``name`` as config errors naming the section."""
    try:
        yield
    except ConfigError:
        raise
    except FuncMechError as e:
        raise ConfigError(f"[{name}] {e}") from e


def build_state(cfg: ScenarioConfig) -> GaussianState:
    s = cfg.state
    with _section("state"):
        return GaussianState(q0=s.q0, p0=s.p0, a=s.a, b=s.b)


def build_hamiltonian(cfg: ScenarioConfig) -> Hamiltonian:
    h = cfg.hamiltonian
    with _section("hamiltonian"):
        return Hamiltonian(mass=h.mass, potential=Potential(tuple(h.potential) or (0.0,)))


def build_grid_spec(cfg: ScenarioConfig) -> GridSpec:
    g = cfg.grid
    with _section("grid"):
        return GridSpec(g.q_min, g.q_max, g.p_min, g.p_max, nq=g.nq, np=g.np)


def build_integrator(cfg: ScenarioConfig) -> IntegratorConfig:
    with _section("solver"):
        return IntegratorConfig(dt=cfg.scenario.dt, scheme=cfg.solver.scheme)


def build_solver(cfg: ScenarioConfig) -> SolverConfig:
    s = cfg.solver
    with _section("solver"):
        return SolverConfig(
            integrator=build_integrator(cfg),
            interpolation=s.interpolation,
            renormalize_each_step=s.renormalize_each_step,
            mass_leak_tolerance=s.mass_leak_tolerance,
        )


def build_device(cfg: ScenarioConfig, seed: int) -> MeasurementDevice:
    """Device from ``[device]``; a missing offset is drawn once from the seed."""
    d = cfg.device
    with _section("device"):
        step = d.rational_step
        if d.systematic_offset is not None:
            return MeasurementDevice(step, d.sigma_syst, d.sigma_rand, d.systematic_offset)
        offset_seed = np.random.SeedSequence(seed, spawn_key=(OFFSET_STREAM,))
        return MeasurementDevice.with_drawn_offset(step, d.sigma_syst, d.sigma_rand, offset_seed)


def build_interval(cfg: ScenarioConfig) -> LatticeInterval:
    c = cfg.convergence
    with _section("convergence"):
        return LatticeInterval(c.lower_index, c.upper_index, cfg.device.rational_step)


def build_observables(cfg: ScenarioConfig) -> list[Observable]:
    with _section("observables"):
        return [expression_observable(name, expr) for name, expr in cfg.observables.items()]


def resolve_seed(cfg: ScenarioConfig) -> int:
    return settings.DEFAULT_SEED if cfg.scenario.seed is None else cfg.scenario.seed


def resolve_output_dir(cfg: ScenarioConfig) -> Path:
    return Path(cfg.scenario.output_dir) if cfg.scenario.output_dir else settings.OUTPUT_DIR
