"""SVG figures of a simulated scenario: actuator powers and revolute joint forces."""
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .constants import PLOT_QUANTITIES  # noqa: E402
from .exceptions import SimIOError  # noqa: E402
from .model import LEGS  # noqa: E402

plt.rcParams["svg.hashsalt"] = "prpsim"

TITLES = {
    "powers": "Actuator powers p10",
    "f21y": "Revolute joint force f21y",
    "f21z": "Revolute joint force f21z",
}


def make_figure(series, figure):
    quantity, unit = PLOT_QUANTITIES[figure]
    times = series.times()
    fig, ax = plt.subplots(figsize=(8, 5))
    for leg in LEGS:
        values = [getattr(sample.dynamics.legs[leg], quantity) for sample in series.samples]
        line, = ax.plot(times, values, label=f"leg {leg.name}")
        line.set_gid(f"series-{leg.name}")
    ax.set_xlim(0.0, series.scenario.duration)
    ax.set_xlabel("t [s]")
    ax.set_ylabel(f"{quantity} [{unit}]")
    ax.set_title(f"{TITLES[figure]} ({series.scenario.name})")
    ax.grid(True)
    ax.legend()
    fig.tight_layout()
    return fig


def write_plots(series, directory):
    """Write powers.svg, f21y.svg and f21z.svg under ``directory``; returns the paths."""
    paths = []
    try:
        os.makedirs(directory, exist_ok=True)
        for figure in PLOT_QUANTITIES:
            path = os.path.join(directory, f"{figure}.svg")
            fig = make_figure(series, figure)
            try:
                fig.savefig(path, format="svg", metadata={"Date": None})
            finally:
                plt.close(fig)
            paths.append(path)
    except OSError as error:
        raise SimIOError(directory, error) from error
    return paths
