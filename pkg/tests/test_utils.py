import math
import os
import pickle

import pytest

from prpsim.exceptions import OracleMismatch, SimIOError, SingularConfiguration
from prpsim.print_colors import print_green, print_red
from prpsim.structs import PlatformState
from prpsim.utils import format_float, stopwatch


@pytest.mark.parametrize("value", [0.1, 1.0 / 3.0, -2.5e-17, 80.9325, math.pi, 1e300])
def test_format_float_round_trips(value):
    assert float(format_float(value)) == value


def test_format_float_zero_and_non_finite():
    assert format_float(-0.0) == "0.0"
    for value in (math.nan, math.inf):
        with pytest.raises(ValueError):
            format_float(value)


def test_stopwatch():
    with stopwatch() as elapsed:
        sum(range(1000))
    assert elapsed["seconds"] >= 0.0


def test_plain_output_when_not_a_terminal(capsys, monkeypatch):
    monkeypatch.setenv("NO_COLOR", "1")
    print_green("done")
    print_red("failed")
    captured = capsys.readouterr()
    assert captured.out == "done\n"
    assert captured.err == "failed\n"


def test_singular_configuration_keeps_orientation():
    error = SingularConfiguration("axes parallel", phi=1.0).at_time(0.5)
    assert (error.phi, error.t) == (1.0, 0.5)
    assert str(error) == "t = 0.5 s: axes parallel"


@pytest.mark.parametrize("error", [
    SingularConfiguration("axes parallel", phi=1.0, t=0.25),
    OracleMismatch("energy balance", 2e-3, 1e-6),
    SimIOError("out/run.csv", "unexpected header"),
])
def test_errors_survive_pickling(error):
    copy = pickle.loads(pickle.dumps(error))
    assert type(copy) is type(error)
    assert str(copy) == str(error)
    assert vars(copy) == vars(error)


@pytest.mark.parametrize("field", ["x", "phi", "ydd"])
@pytest.mark.parametrize("value", [math.nan, math.inf, -math.inf])
def test_platform_state_must_be_finite(field, value):
    with pytest.raises(ValueError, match=field):
        PlatformState(**{field: value})


def test_release_requirements_are_runtime_only():
    path = os.path.join(os.path.dirname(__file__), os.pardir, "requirements.txt")
    with open(path, encoding="utf-8") as file:
        assert file.read().split() == ["numpy", "matplotlib"]
