import logging
from pathlib import Path

import numpy as np
import pandas as pd

from core.errors import OutputError
from phase_space.grid import GridDensity
from scenario_schema.schema import EmittedFile, RunReport
from scenarios.plotting import PlotSpec, emit_plot

logger = logging.getLogger(__name__)


class OutputWriter:
    """Writes run artifacts under one directory and keeps the list of what it wrote."""

    def __init__(self, output_dir: Path):
        self.output_dir = Path(output_dir)
        self.files: list[EmittedFile] = []
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise OutputError(f"Cannot create output directory {self.output_dir}: {e}") from e

    def _record(self, name: str, role: str) -> Path:
        path = self.output_dir / name
        self.files.append(EmittedFile(path=name, role=role, size=path.stat().st_size))
        logger.info("wrote %s (%s)", path, role)
        return path

    def write_csv(self, name: str, frame: pd.DataFrame, role: str) -> Path:
        """CSV with a header row; floats use the shortest round-trip repr."""
        try:
            frame.to_csv(self.output_dir / name, index=False, lineterminator="\n")
            return self._record(name, role)
        except OSError as e:
            raise OutputError(f"Cannot write {name}: {e}") from e

    def write_snapshot(self, name: str, density: GridDensity, t: float) -> Path:
        """Density matrix (rows iq, columns ip) under a 4-line bounds/resolution header."""
        spec = density.spec
        header = "\n".join(
            [
                f"t={t!r}",
                f"q_min={spec.q_min!r},q_max={spec.q_max!r}",
                f"p_min={spec.p_min!r},p_max={spec.p_max!r}",
                f"nq={spec.nq},np={spec.np}",
            ]
        )
        try:
            np.savetxt(
                self.output_dir / name, density.values, fmt="%.17g", delimiter=",", header=header
            )
            return self._record(name, "snapshot")
        except OSError as e:
            raise OutputError(f"Cannot write {name}: {e}") from e

    def write_plot(self, name: str, frame: pd.DataFrame, spec: PlotSpec) -> Path:
        try:
            emit_plot(frame, spec, self.output_dir / name)
            return self._record(name, "plot")
        except OSError as e:
            raise OutputError(f"Cannot write {name}: {e}") from e

    def write_report(self, report: RunReport) -> Path:
        path = self.output_dir / "report.json"
        try:
            path.write_text(report.model_dump_json(indent=2) + "\n")
        except OSError as e:
            raise OutputError(f"Cannot write {path}: {e}") from e
        return path
