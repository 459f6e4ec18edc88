from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import pandas as pd  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from core.errors import MissingColumnError  # noqa: E402
from core.settings import settings  # noqa: E402

FIGSIZE = (6.4, 4.0)


@dataclass(frozen=True)
class PlotSpec:
    """One polyline per column in ``y`` against column ``x``."""

    x: str
    y: tuple[str, ...]
    title: str = ""
    xlabel: str | None = None
    ylabel: str | None = None
    logx: bool = False


def emit_plot(frame: pd.DataFrame, spec: PlotSpec, path: Path) -> Path:
    """Render ``spec`` from ``frame`` as SVG; identical input gives identical bytes."""
    missing = [c for c in (spec.x, *spec.y) if c not in frame.columns]
    if missing:
        raise MissingColumnError(
            f"Plot columns {missing} not in series (have {list(frame.columns)})"
        )
    fig = Figure(figsize=FIGSIZE)
    ax = fig.add_subplot()
    for column in spec.y:
        ax.plot(frame[spec.x].to_numpy(), frame[column].to_numpy(), label=column, linewidth=1.2)
    ax.set_xlabel(spec.xlabel or spec.x)
    ax.set_ylabel(spec.ylabel or ", ".join(spec.y))
    if spec.title:
        ax.set_title(spec.title)
    if len(frame) and len(spec.y) > 1:
        ax.legend()
    if spec.logx and len(frame):
        ax.set_xscale("log")
    ax.grid(True, linewidth=0.3)
    with matplotlib.rc_context({"svg.hashsalt": settings.PLOT_HASH_SALT, "svg.fonttype": "path"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    return path
