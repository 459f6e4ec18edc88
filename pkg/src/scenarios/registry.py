import logging
import time
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path

from core.errors import ConfigError, FuncMechError, OutputError
from scenario_schema.models import ScenarioKind
from scenario_schema.schema import RunReport, ScenarioConfig
from scenarios import runners
from scenarios.config import resolve_output_dir, resolve_seed
from scenarios.outputs import OutputWriter

logger = logging.getLogger(__name__)


@dataclass
class Scenario:
    description: str
    runner: Callable[[runners.RunContext], None]


all_scenarios: dict[ScenarioKind, Scenario] = {
    ScenarioKind.EVOLVE: Scenario(
        description="Semi-Lagrangian grid evolution of a Gaussian state.",
        runner=runners.run_evolve,
    ),
    ScenarioKind.MOMENTS: Scenario(
        description="Gaussian moment closure against the Newton trajectory.",
        runner=runners.run_moments,
    ),
    ScenarioKind.ENSEMBLE: Scenario(
        description="Monte Carlo particle ensemble moments with standard errors.",
        runner=runners.run_ensemble,
    ),
    ScenarioKind.MEASURE: Scenario(
        description="Lattice measurements, estimate and density reconstruction.",
        runner=runners.run_measure,
    ),
    ScenarioKind.CONVERGE: Scenario(
        description="Convergence of interval frequencies to the limit density.",
        runner=runners.run_converge,
    ),
    ScenarioKind.COMPOSE: Scenario(
        description="Reconstructed position marginal evolved under the Hamiltonian.",
        runner=runners.run_compose,
    ),
}


def with_overrides(
    cfg: ScenarioConfig, output_dir: str | Path | None = None, seed: int | None = None
) -> ScenarioConfig:
    """Copy of ``cfg`` with command-line overrides applied to ``[scenario]``."""
    update: dict[str, object] = {}
    if output_dir is not None:
        update["output_dir"] = str(output_dir)
    if seed is not None:
        if seed < 0:
            raise ConfigError(f"seed must be nonnegative, got {seed}")
        update["seed"] = seed
    if not update:
        return cfg
    return cfg.model_copy(update={"scenario": cfg.scenario.model_copy(update=update)})


def run_scenario(cfg: ScenarioConfig) -> RunReport:
    kind = cfg.scenario.kind
    seed = resolve_seed(cfg)
    output_dir = resolve_output_dir(cfg)
    logger.info("starting %s scenario (seed %d) into %s", kind, seed, output_dir)

    started = time.perf_counter()
    ctx = runners.RunContext(cfg=cfg, seed=seed, writer=OutputWriter(output_dir))
    try:
        all_scenarios[kind].runner(ctx)
    except (ConfigError, OutputError):
        raise
    except FuncMechError as e:
        raise type(e)(f"[{kind}] {e}") from e
    except OSError as e:
        raise OutputError(f"[{kind}] {e}") from e

    report = RunReport(
        kind=kind,
        seed=seed,
        output_dir=str(output_dir),
        files=ctx.writer.files,
        duration_s=time.perf_counter() - started,
        diagnostics=ctx.diagnostics,
    )
    ctx.writer.write_report(report)
    logger.info("finished %s in %.2fs, %d files", kind, report.duration_s, len(report.files))
    return report
