"""One runner per scenario kind.

Each runner reads its sections of the config, calls into the numerical
packages and hands frames to the ``OutputWriter``. Scalar checks go into
``ctx.diagnostics`` and end up in report.json.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from dynamics.ensemble import ensemble_evolve
from dynamics.integrators import step_sizes
from dynamics.semilagrangian import EvolutionResult, evolve_semilagrangian
from measurement.convergence import convergence_experiment
from measurement.device import MeasurementDevice, sample_measurements
from measurement.lattice import SampleSet
from measurement.reconstruction import (
    EstimateResult,
    ReconstructionDensity,
    cell_probabilities,
    empirical_cell_frequencies,
    estimate,
    rho_infinity,
    window_around,
)
from moments.closure import MAX_CLOSURE_DEGREE, evolve_moments, newton_correction
from phase_space import observables
from phase_space.grid import GridDensity, grid_from_state, integrate_observable
from phase_space.potentials import Hamiltonian
from phase_space.states import GaussianState, MomentState, moments_of_gaussian
from scenario_schema.models import ReconstructionKind
from scenario_schema.schema import ScenarioConfig
from scenarios import config as builders
from scenarios.outputs import OutputWriter
from scenarios.plotting import PlotSpec

logger = logging.getLogger(__name__)

MOMENT_COLUMNS = ["mean_q", "mean_p", "var_q", "var_p", "cov_qp"]


@dataclass
class RunContext:
    cfg: ScenarioConfig
    seed: int
    writer: OutputWriter
    diagnostics: dict[str, float] = field(default_factory=dict)

    @property
    def plots(self) -> bool:
        return self.cfg.plot.enabled


def _thin(count: int, every: int) -> list[int]:
    """Indices 0, every, 2 every, ... of ``count`` points, always keeping the last one.

    ``every`` = 0 keeps only the endpoints.
    """
    if count == 0:
        return []
    keep = list(range(0, count, every or count))
    if keep[-1] != count - 1:
        keep.append(count - 1)
    return keep


def _moment_row(t: float, ms: MomentState) -> dict[str, float]:
    return {"t": t, **{name: getattr(ms, name) for name in MOMENT_COLUMNS}}


def _evolve_on_grid(
    ctx: RunContext, state: GaussianState, h: Hamiltonian
) -> tuple[GridDensity, EvolutionResult]:
    """Sample ``state`` on the ``[grid]`` mesh, run the solver, write moments and snapshots."""
    cfg = ctx.cfg
    solver = builders.build_solver(cfg)
    t = cfg.scenario.t
    d0 = grid_from_state(state, builders.build_grid_spec(cfg))
    every = cfg.scenario.sample_every or max(len(step_sizes(t, solver.integrator.dt)), 1)
    result = evolve_semilagrangian(
        d0, h, t, solver, sample_every=every, snapshot_times=cfg.solver.snapshot_times
    )
    moments = pd.DataFrame(
        [{**_moment_row(s.t, s.moments), "mass_raw": s.mass_raw} for s in result.samples],
        columns=["t", *MOMENT_COLUMNS, "mass_raw"],
    )
    ctx.writer.write_csv("moments.csv", moments, "moments")
    for i, (ts, snapshot) in enumerate(result.snapshots):
        ctx.writer.write_snapshot(f"density_{i:03d}.csv", snapshot, ts)
    if ctx.plots:
        ctx.writer.write_plot(
            "var_q.svg", moments, PlotSpec(x="t", y=("var_q",), title="Position dispersion")
        )
    ctx.diagnostics.update(
        final_mass_raw=float(result.mass_raw[-1]) if result.mass_raw.size else 1.0,
        max_mass_deviation=result.max_mass_deviation,
        final_var_q=float(moments["var_q"].iloc[-1]),
    )
    return d0, result


def run_evolve(ctx: RunContext) -> None:
    """Grid Liouville evolution: moments.csv, observables.csv and density snapshots."""
    cfg = ctx.cfg
    h = builders.build_hamiltonian(cfg)
    extra = builders.build_observables(cfg)
    t = cfg.scenario.t
    d0, result = _evolve_on_grid(ctx, builders.build_state(cfg), h)

    tracked = [observables.energy(h), *extra]
    checkpoints = [(0.0, d0), *result.snapshots]
    if not checkpoints or checkpoints[-1][0] != t:
        checkpoints.append((t, result.density))
    checkpoints = list(dict(checkpoints).items())
    rows = [
        {"t": ts, **{f.name: integrate_observable(d, f) for f in tracked}}
        for ts, d in checkpoints
    ]
    ctx.writer.write_csv(
        "observables.csv",
        pd.DataFrame(rows, columns=["t", *(f.name for f in tracked)]),
        "observables",
    )

    energies = [row[tracked[0].name] for row in rows]
    ctx.diagnostics["energy_drift"] = abs(energies[-1] - energies[0])


def run_moments(ctx: RunContext) -> None:
    """Gaussian closure against the Newton trajectory, plus the delocalization series."""
    cfg = ctx.cfg
    state = builders.build_state(cfg)
    h = builders.build_hamiltonian(cfg)
    t, dt = cfg.scenario.t, cfg.scenario.dt

    series = newton_correction(state, h, t, dt)
    trajectory = evolve_moments(moments_of_gaussian(state), h, t, dt)
    keep = _thin(len(series.times), cfg.scenario.sample_every)

    closure = pd.DataFrame(
        {
            "t": series.times[keep],
            "mean_q": series.mean_q[keep],
            "q_newton": series.q_newton[keep],
            "correction": series.correction[keep],
        }
    )
    ctx.writer.write_csv("closure.csv", closure, "closure")

    spread = pd.DataFrame(
        {
            "t": trajectory.times[keep],
            "var_q": trajectory.column("var_q")[keep],
            "var_p": trajectory.column("var_p")[keep],
            "cov_qp": trajectory.column("cov_qp")[keep],
        }
    )
    if h.potential.degree == 0:
        times = spread["t"].to_numpy()
        spread["var_q_free"] = 0.5 * (state.a**2 + state.b**2 * times**2 / h.mass**2)
    ctx.writer.write_csv("delocalization.csv", spread, "delocalization")

    if ctx.plots:
        ctx.writer.write_plot(
            "correction.svg",
            closure,
            PlotSpec(x="t", y=("correction",), title="Closure mean minus Newton trajectory"),
        )
        columns = ("var_q", "var_q_free") if "var_q_free" in spread else ("var_q",)
        ctx.writer.write_plot(
            "delocalization.svg", spread, PlotSpec(x="t", y=columns, title="Delocalization")
        )
    ctx.diagnostics["max_abs_correction"] = float(np.max(np.abs(series.correction)))


def run_ensemble(ctx: RunContext) -> None:
    """Monte Carlo moments at the horizon, next to the closure prediction when it applies."""
    cfg = ctx.cfg
    state = builders.build_state(cfg)
    h = builders.build_hamiltonian(cfg)
    t = cfg.scenario.t
    result = ensemble_evolve(
        state,
        h,
        t,
        cfg.ensemble.n,
        ctx.seed,
        builders.build_integrator(cfg),
        shards=cfg.ensemble.shards,
    )
    row: dict[str, float] = {"t": t, "n": result.n}
    for name in MOMENT_COLUMNS:
        row[name] = getattr(result.moments, name)
        row[f"{name}_se"] = getattr(result.standard_errors, name)
    if t >= 0 and h.potential.degree <= MAX_CLOSURE_DEGREE:
        closure = evolve_moments(moments_of_gaussian(state), h, t, cfg.scenario.dt).states[-1]
        row["closure_mean_q"] = closure.mean_q
        row["closure_var_q"] = closure.var_q
        z = abs(result.moments.mean_q - closure.mean_q) / result.standard_errors.mean_q
        ctx.diagnostics["closure_mean_q_z"] = float(z)
    ctx.writer.write_csv("ensemble.csv", pd.DataFrame([row]), "ensemble")


def _measure(ctx: RunContext) -> tuple[MeasurementDevice, SampleSet, EstimateResult]:
    cfg = ctx.cfg
    dev = builders.build_device(cfg, ctx.seed)
    sample_seed = np.random.SeedSequence(ctx.seed, spawn_key=(builders.SAMPLE_STREAM,))
    samples = sample_measurements(dev, cfg.device.x_true, cfg.device.n, sample_seed)
    return dev, samples, estimate(samples, dev.sigma_syst)


def _write_estimate(ctx: RunContext, dev: MeasurementDevice, est: EstimateResult) -> None:
    frame = pd.DataFrame(
        [
            {
                "n": est.n,
                "mean_est": est.mean_est,
                "s2_rand": est.s2_rand,
                "s2_total": est.s2_total,
                "sigma_syst": dev.sigma_syst,
                "systematic_offset": dev.systematic_offset,
                "step": str(dev.step),
            }
        ]
    )
    ctx.writer.write_csv("estimate.csv", frame, "estimate")


def run_measure(ctx: RunContext) -> None:
    """Samples, the estimate, reconstruction parameters and cell frequencies."""
    cfg = ctx.cfg
    dev, samples, est = _measure(ctx)
    ctx.writer.write_csv(
        "samples.csv",
        pd.DataFrame({"index": samples.indices, "value": samples.values()}),
        "samples",
    )
    _write_estimate(ctx, dev, est)

    model = ReconstructionDensity(cfg.device.x_true, dev.variance, ReconstructionKind.MODEL)
    densities = [model, est.density]
    if dev.sigma_syst > 0:
        densities.append(rho_infinity(est.mean_est, dev.sigma_syst))
    ctx.writer.write_csv(
        "reconstruction.csv",
        pd.DataFrame(
            [{"kind": str(d.kind), "mean": d.mean, "variance": d.variance} for d in densities]
        ),
        "reconstruction",
    )

    ctx.diagnostics.update(mean_est=est.mean_est, s2_total=est.s2_total)
    if dev.sigma_rand == 0:
        return

    # readings scatter around x_true + offset with the random dispersion only
    readings = ReconstructionDensity(cfg.device.x_true + dev.systematic_offset, dev.sigma_rand**2)
    frequencies = empirical_cell_frequencies(samples)
    lo, hi = window_around(readings, dev.step)
    lo = min(lo, int(samples.indices.min()))
    hi = max(hi, int(samples.indices.max()))
    expected = cell_probabilities(readings, dev.step, (lo, hi))
    indices = np.arange(lo, hi + 1)
    cells = pd.DataFrame(
        {
            "index": indices,
            "value": dev.step.lattice_value(indices.astype(float)),
            "frequency": [frequencies.get(int(m)) for m in indices],
            "p_readings": [expected.get(int(m)) for m in indices],
        }
    )
    ctx.writer.write_csv("cells.csv", cells, "cells")
    if ctx.plots:
        ctx.writer.write_plot(
            "cells.svg",
            cells,
            PlotSpec(x="value", y=("frequency", "p_readings"), title="Cell frequencies"),
        )
    ctx.diagnostics["max_cell_gap"] = float(
        np.max(np.abs(cells["frequency"] - cells["p_readings"]))
    )


def run_converge(ctx: RunContext) -> None:
    """Gap between fresh in-interval frequency and the limit-density integral, per n."""
    cfg = ctx.cfg
    conv = cfg.convergence
    dev = builders.build_device(cfg, ctx.seed)
    report = convergence_experiment(
        dev,
        cfg.device.x_true,
        conv.n_schedule,
        conv.trials,
        ctx.seed,
        builders.build_interval(cfg),
        n_fresh=conv.n_fresh,
        workers=cfg.ensemble.shards,
    )
    frame = pd.DataFrame(
        [
            {
                "n": row.n,
                "probability": row.probability,
                "frequency": row.frequency,
                "gap": row.gap,
                "gap_stderr": row.gap_stderr,
                "mc_error": row.mc_error,
            }
            for row in report.rows
        ]
    )
    ctx.writer.write_csv("convergence.csv", frame, "convergence")
    if ctx.plots:
        ctx.writer.write_plot(
            "convergence.svg",
            frame,
            PlotSpec(x="n", y=("gap",), title="Interval probability gap", logx=True),
        )
    ctx.diagnostics.update(
        final_gap=report.final_gap, non_increasing=float(report.is_non_increasing())
    )


def run_compose(ctx: RunContext) -> None:
    """Reconstruct the position marginal from measurements and evolve it on the grid.

    The closure prediction is written next to the grid series when the
    potential is within the closure's degree.
    """
    cfg = ctx.cfg
    dev, _, est = _measure(ctx)
    _write_estimate(ctx, dev, est)
    h = builders.build_hamiltonian(cfg)
    state = GaussianState.from_moments(
        mean_q=est.mean_est,
        mean_p=cfg.momentum.mean,
        var_q=est.s2_total,
        var_p=cfg.momentum.variance,
    )
    _evolve_on_grid(ctx, state, h)
    ctx.diagnostics["initial_var_q"] = est.s2_total
    if h.potential.degree > MAX_CLOSURE_DEGREE:
        return

    trajectory = evolve_moments(moments_of_gaussian(state), h, cfg.scenario.t, cfg.scenario.dt)
    keep = _thin(len(trajectory.times), cfg.scenario.sample_every)
    frame = pd.DataFrame(
        [_moment_row(float(trajectory.times[i]), trajectory.states[i]) for i in keep],
        columns=["t", *MOMENT_COLUMNS],
    )
    ctx.writer.write_csv("prediction.csv", frame, "prediction")
    if ctx.plots:
        ctx.writer.write_plot(
            "prediction.svg",
            frame,
            PlotSpec(x="t", y=("var_q",), title="Closure prediction dispersion"),
        )
    ctx.diagnostics["closure_final_var_q"] = float(frame["var_q"].iloc[-1])
