from scenario_schema.models import Interpolation, ReconstructionKind, ScenarioKind, Scheme
from scenario_schema.schema import (
    ConvergenceSection,
    DeviceSection,
    EmittedFile,
    EnsembleSection,
    GridSection,
    HamiltonianSection,
    MomentumSection,
    PlotSection,
    RunReport,
    ScenarioConfig,
    ScenarioSection,
    SolverSection,
    StateSection,
)

__all__ = [
    "ConvergenceSection",
    "DeviceSection",
    "EmittedFile",
    "EnsembleSection",
    "GridSection",
    "HamiltonianSection",
    "Interpolation",
    "MomentumSection",
    "PlotSection",
    "ReconstructionKind",
    "RunReport",
    "ScenarioConfig",
    "ScenarioKind",
    "ScenarioSection",
    "Scheme",
    "SolverSection",
    "StateSection",
]
