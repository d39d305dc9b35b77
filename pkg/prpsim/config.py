import json
import math
import os
from dataclasses import dataclass

from .constants import LAW_HOLD, LAW_RAISED_COSINE
from .exceptions import ConfigError, SimIOError
from .model import RobotParams, params_from_dict
from .structs import Scenario

CONFIG = {
  "scenarios": [
    {
      "name": "vertical",
      "x": 0.0,
      "y": 0.025,
      "phi": 0.0,
      "duration": 3.0,
      "law": LAW_RAISED_COSINE
    },
    {
      "name": "rotation",
      "x": 0.0,
      "y": 0.0,
      "phi": math.pi / 12.0,
      "duration": 3.0,
      "law": LAW_RAISED_COSINE
    }
  ],
  "defaults": {
    "scenario": "vertical",
    "dt": 0.01,
    "params": {},
    "oracle": True,
    "plots": False,
    "out": os.environ.get("PRPSIM_OUT", "prpsim_out"),
    "plots_dir": None,
    "workers": 1,
    "bench_n": 100000
  },
  # sampling step of the energy-integral check, s
  "check_dt": 0.001,
}

SCENARIO_NAMES = [s["name"] for s in CONFIG["scenarios"]]
ALL_SCENARIOS = "all"


def get_scenario_config(name):  # -> Dict[str, Any]
    try:
        scenario_config = next(s for s in CONFIG["scenarios"] if s["name"] == name)
    except StopIteration:
        raise LookupError(f"Scenario {name} not found, expected one of {', '.join(SCENARIO_NAMES)}")
    return scenario_config


@dataclass
class RunConfig:
    scenarios: list
    params: RobotParams
    dt: float
    oracle: bool
    plots: bool
    out: str
    plots_dir: str
    workers: int
    bench_n: int


def _default_plots_dir(out):
    base = os.path.dirname(out) if out.endswith(".csv") else out
    return os.path.join(base, "plots")


def build_scenario(entry, dt) -> Scenario:
    if isinstance(entry, str):
        entry = get_scenario_config(entry)
    if not isinstance(entry, dict):
        raise ConfigError(f"scenario must be a name or an object, got {entry!r}")
    unknown = set(entry) - {"name", "x", "y", "phi", "duration", "law"}
    if unknown:
        raise ConfigError(f"unknown scenario key(s): {', '.join(sorted(unknown))}")
    law = entry.get("law", LAW_RAISED_COSINE)
    if law not in (LAW_RAISED_COSINE, LAW_HOLD):
        raise ConfigError(f"unknown trajectory law {law!r}")
    try:
        return Scenario(name=str(entry.get("name", "custom")),
                        x_amp=float(entry.get("x", 0.0)),
                        y_amp=float(entry.get("y", 0.0)),
                        phi_amp=float(entry.get("phi", 0.0)),
                        duration=float(entry.get("duration", 3.0)),
                        sample_dt=float(dt),
                        law=law)
    except (TypeError, ValueError) as error:
        raise ConfigError(f"invalid scenario: {error}") from error


def read_config_file(path):
    try:
        with open(path, "r", encoding="utf-8") as file:
            return json.load(file)
    except json.JSONDecodeError as error:
        raise ConfigError(f"{path}: not valid JSON ({error})") from error
    except OSError as error:
        raise SimIOError(path, error) from error


def load_config(path=None, **overrides) -> RunConfig:
    """Defaults, then the JSON document at ``path``, then non-None overrides."""
    settings = dict(CONFIG["defaults"])
    if path is not None:
        document = read_config_file(path)
        if not isinstance(document, dict):
            raise ConfigError(f"{path}: top level must be a JSON object")
        unknown = set(document) - set(settings)
        if unknown:
            raise ConfigError(f"{path}: unknown key(s): {', '.join(sorted(unknown))}")
        settings.update(document)
    settings.update({k: v for k, v in overrides.items() if v is not None})

    dt = settings["dt"]
    if not isinstance(dt, (int, float)) or not dt > 0:
        raise ConfigError(f"dt must be a positive number, got {dt!r}")
    if not isinstance(settings["params"], dict):
        raise ConfigError("params must be a JSON object")
    workers = settings["workers"]
    if not isinstance(workers, int) or workers < 1:
        raise ConfigError(f"workers must be a positive integer, got {workers!r}")
    bench_n = settings["bench_n"]
    if not isinstance(bench_n, int) or bench_n < 0:
        raise ConfigError(f"bench_n must be a non-negative integer, got {bench_n!r}")

    entry = settings["scenario"]
    entries = SCENARIO_NAMES if entry == ALL_SCENARIOS else [entry]
    return RunConfig(
        scenarios=[build_scenario(s, dt) for s in entries],
        params=params_from_dict(settings["params"]),
        dt=float(dt),
        oracle=bool(settings["oracle"]),
        plots=bool(settings["plots"]),
        out=str(settings["out"]),
        plots_dir=settings["plots_dir"] or _default_plots_dir(str(settings["out"])),
        workers=workers,
        bench_n=bench_n,
    )
