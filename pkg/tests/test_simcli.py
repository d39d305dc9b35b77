import json
import math
from dataclasses import replace

import numpy as np
import pytest

from prpsim import simcli
from prpsim.config import build_scenario
from prpsim.constants import CSV_COLUMNS, EXIT_IO, EXIT_OK, EXIT_ORACLE, EXIT_SINGULAR, LAW_HOLD
from prpsim.exceptions import SingularConfiguration
from prpsim.model import standard_params
from prpsim.oracle import energy_series_check
from prpsim.simcli import (CheckResult, _differentiation_gaps, _relative_gap, csv_path, evaluate_sample,
                           read_csv, run, sample_row, sample_times, scenario_eval, simulate, static_gaps,
                           symmetry_gap, verify_series, write_csv)
from prpsim.structs import Scenario

W = math.pi / 3.0


@pytest.fixture(scope="module")
def vertical():
    return simulate(standard_params(), build_scenario("vertical", 0.01))


def test_scenario_start():
    pose = scenario_eval(build_scenario("vertical", 0.01), 0.0)
    assert pose.as_tuple()[:6] == (0.0,) * 6
    assert pose.ydd == pytest.approx(0.025 * W * W)


def test_scenario_end_and_middle():
    scenario = build_scenario("vertical", 0.01)
    end = scenario_eval(scenario, 3.0)
    assert end.y == pytest.approx(0.05)
    assert end.yd == pytest.approx(0.0, abs=1e-15)
    middle = scenario_eval(scenario, 1.5)
    assert middle.yd == pytest.approx(0.0261799, abs=1e-7)
    assert middle.ydd == pytest.approx(0.0, abs=1e-15)


def test_scenario_rejects_times_outside_the_run():
    scenario = build_scenario("rotation", 0.01)
    for t in (-1e-9, 3.0 + 1e-9):
        with pytest.raises(ValueError):
            scenario_eval(scenario, t)


def test_hold_law():
    scenario = Scenario("still", x_amp=0.01, phi_amp=0.2, law=LAW_HOLD)
    pose = scenario_eval(scenario, 2.0)
    assert (pose.x, pose.y, pose.phi) == (0.01, 0.0, 0.2)
    assert pose.as_tuple()[3:] == (0.0,) * 6


def test_sample_times():
    times = sample_times(build_scenario("vertical", 0.01))
    assert len(times) == 301
    assert times[0] == 0.0 and times[-1] == 3.0
    assert all(b > a for a, b in zip(times, times[1:]))


@pytest.mark.parametrize("dt, expected", [
    (0.7, [0.0, 0.7, 1.4, 2.1, 2.8, 3.0]),
    (5.0, [0.0, 3.0]),
])
def test_sample_times_end_at_the_duration(dt, expected):
    assert sample_times(build_scenario("vertical", dt)) == pytest.approx(expected)
    assert len(sample_times(build_scenario("vertical", 0.001))) == 3001


def test_vertical_run(vertical):
    assert len(vertical) == 301
    rows = np.array([sample_row(s) for s in vertical.samples])
    assert rows.shape == (301, len(CSV_COLUMNS))
    assert np.all(np.isfinite(rows))
    assert max(abs(s.energy.balance_residual) for s in vertical.samples) < 1e-6
    assert max(s.ne_residual for s in vertical.samples) < 1e-8
    verify_series(vertical)


def test_rotation_powers_start_and_end_at_zero(params):
    series = simulate(params, build_scenario("rotation", 0.1))
    for sample in (series.samples[0], series.samples[-1]):
        for forces in sample.dynamics.legs:
            assert forces.p10 == pytest.approx(0.0, abs=1e-12)


def test_csv_round_trip(tmp_path, vertical):
    path = str(tmp_path / "vertical.csv")
    write_csv(path, vertical)
    columns = read_csv(path)
    assert list(columns) == CSV_COLUMNS
    expected = np.array([sample_row(s) for s in vertical.samples])
    for i, name in enumerate(CSV_COLUMNS):
        assert np.array_equal(columns[name], expected[:, i])
    with open(path, "rb") as file:
        content = file.read()
    assert b"\r" not in content
    assert content.startswith(b"t,x,y,phi,xd,yd,phid,xdd,ydd,phidd,lam10_A,")


def test_csv_is_deterministic(tmp_path, params):
    scenario = build_scenario("rotation", 0.1)
    first, second = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    write_csv(first, simulate(params, scenario))
    write_csv(second, simulate(params, scenario, oracle=False))
    columns_a, columns_b = read_csv(first), read_csv(second)
    for name in CSV_COLUMNS[:-1]:
        assert np.array_equal(columns_a[name], columns_b[name])
    write_csv(second, simulate(params, scenario))
    with open(first, "rb") as a, open(second, "rb") as b:
        assert a.read() == b.read()


def test_csv_path():
    assert csv_path("out", "vertical", True) == "out/vertical.csv"
    assert csv_path("out/run.csv", "vertical", True) == "out/run.csv"
    assert csv_path("out/run.csv", "rotation", False) == "out/rotation.csv"


def test_singular_sample_reports_time(params):
    scenario = Scenario("tilt", phi_amp=math.pi / 3.0, law=LAW_HOLD)
    with pytest.raises(SingularConfiguration) as info:
        evaluate_sample(params, scenario, 1.0)
    assert info.value.t == 1.0
    assert "t = 1.0" in str(info.value)


def test_static_and_symmetry_checks(params):
    assert max(static_gaps(params)) < 1e-6
    scenario = build_scenario("rotation", 0.01)
    assert symmetry_gap(params, scenario_eval(scenario, 1.2)) < 1e-9


def test_sim_command(tmp_path, capsys):
    out = tmp_path / "run"
    code = run(["sim", "--scenario", "all", "--dt", "0.1", "--out", str(out), "--no-oracle"])
    assert code == EXIT_OK
    assert len(read_csv(str(out / "vertical.csv"))["t"]) == 31
    assert len(read_csv(str(out / "rotation.csv"))["t"]) == 31
    assert "vertical" in capsys.readouterr().out


def test_ik_command(capsys):
    assert run(["ik", "--y", "0.05"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["legs"]["A"]["lambda10"] == pytest.approx(0.05 * 2.0 / math.sqrt(3.0))
    assert report["legs"]["B"]["lambda32"] == pytest.approx(0.05 * 2.0 / math.sqrt(3.0))


def test_exit_codes(tmp_path, capsys):
    assert run(["ik", "--phi", str(math.pi / 3.0)]) == EXIT_SINGULAR
    assert run(["sim", "--config", str(tmp_path / "missing.json")]) == EXIT_IO
    assert run(["sim", "--scenario", "circle"]) == EXIT_IO
    bad = tmp_path / "bad.json"
    bad.write_text('{"dt": ', encoding="utf-8")
    assert run(["ik", "--config", str(bad)]) == EXIT_IO
    assert "Error" in capsys.readouterr().err


def test_check_command_fails_with_oracle_code(monkeypatch, capsys):
    monkeypatch.setattr(simcli, "run_checks", lambda params: [CheckResult("energy balance", 1.0, 1e-6)])
    assert run(["check"]) == EXIT_ORACLE
    assert "FAIL" in capsys.readouterr().err


def test_check_command_passes(monkeypatch, capsys):
    monkeypatch.setattr(simcli, "run_checks", lambda params: [CheckResult("loop closure", 0.0, 1e-12)])
    assert run(["check"]) == EXIT_OK
    assert "PASS" in capsys.readouterr().out


def test_bench_command(capsys):
    assert run(["bench", "--n", "0"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["n"] == 0
    assert report["recursive_flops"] < report["dense_flops"]


@pytest.mark.parametrize("name", ["vertical", "rotation"])
def test_integrated_power_matches_energy_change(params, name):
    scenario = replace(build_scenario(name, 0.01), sample_dt=0.001)
    series = simulate(params, scenario, oracle=False)
    assert series.samples[-1].t == 3.0
    assert energy_series_check(series.samples) < 1e-6


@pytest.mark.parametrize("name", ["vertical", "rotation"])
def test_rates_follow_finite_differences_along_the_scenario(params, name):
    scenario = build_scenario(name, 0.01)
    gaps = np.array([_differentiation_gaps(params, scenario, t) for t in sample_times(scenario)])
    assert gaps[:, 0].max() < 1e-6
    assert gaps[:, 1].max() < 1e-5
    assert gaps.max() > 0.0


def test_relative_gap():
    assert _relative_gap(1.0 + 1e-12, 1.0, 1e-3) > 0.0
    assert _relative_gap(30.0, 20.0, 1e-3) == pytest.approx(0.5)
    # below the scale the gap is measured against the scale
    assert _relative_gap(1e-9, 0.0, 1e-3) == pytest.approx(1e-6)


def test_uneven_step_reaches_the_end(tmp_path):
    out = tmp_path / "vertical.csv"
    assert run(["sim", "--dt", "0.7", "--out", str(out), "--no-oracle"]) == EXIT_OK
    assert read_csv(str(out))["t"][-1] == 3.0


@pytest.mark.parametrize("argv", [
    ["sim", "--dt", "abc"],
    ["sim", "--colour"],
    ["bench", "--n", "many"],
    [],
])
def test_usage_errors_use_the_config_code(capsys, argv):
    assert run(argv) == EXIT_IO
    assert "usage:" in capsys.readouterr().err


def test_bench_time_outside_the_run(capsys):
    assert run(["bench", "--n", "0", "--t", "-1"]) == EXIT_IO
    assert run(["bench", "--n", "0", "--t", "3.5"]) == EXIT_IO
    assert "--t must lie in [0, 3.0]" in capsys.readouterr().err


def test_ik_rejects_non_finite_pose(capsys):
    assert run(["ik", "--x", "nan"]) == EXIT_IO
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "x = nan" in captured.err
