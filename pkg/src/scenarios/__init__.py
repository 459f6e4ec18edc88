from scenarios.config import load_config, parse_config, render_config
from scenarios.plotting import PlotSpec, emit_plot
from scenarios.registry import Scenario, all_scenarios, run_scenario, with_overrides

__all__ = [
    "PlotSpec",
    "Scenario",
    "all_scenarios",
    "emit_plot",
    "load_config",
    "parse_config",
    "render_config",
    "run_scenario",
    "with_overrides",
]
