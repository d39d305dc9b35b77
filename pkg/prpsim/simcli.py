import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from itertools import repeat

import numpy as np

from .bench import bench
from .config import ALL_SCENARIOS, CONFIG, SCENARIO_NAMES, build_scenario, load_config
from .constants import (CSV_COLUMNS, EXIT_IO, EXIT_OK, EXIT_ORACLE, EXIT_SINGULAR,
                        LAW_HOLD, OMEGA_LAW, PHI_SINGULAR)
from .dynamics import evaluate_state, forces_array, static_hold
from .exceptions import ConfigError, OracleMismatch, PrpsimError, SimIOError, SingularConfiguration
from .kinematics import (connectivity_residual, inverse_geometry, leg_connectivity_matrix,
                         loop_closure_residual, solve_kinematics, virtual_rate_sets)
from .model import LEGS, with_gravity
from .oracle import energy_report, energy_series_check, newton_euler_solve, reactions_array
from .plots import write_plots
from .print_colors import print_green, print_red, print_yellow
from .smallmat import rot_z
from .structs import PlatformState, Sample, TimeSeries
from .utils import format_float, stopwatch

NE_TOLERANCE = 1e-8
NE_RESIDUAL_TOLERANCE = 1e-10
BALANCE_TOLERANCE = 1e-6
FD_STEP = 1e-6
# floor / tolerance of both finite-difference checks: 1e-9 / 1e-6 and 1e-8 / 1e-5
FD_SCALE = 1e-3


def _law(scenario, t):
    """Trajectory factor and its first two time derivatives."""
    if scenario.law == LAW_HOLD:
        return 1.0, 0.0, 0.0
    w = OMEGA_LAW
    return 1.0 - math.cos(w * t), w * math.sin(w * t), w * w * math.cos(w * t)


def _pose_at(scenario, t):
    s, sd, sdd = _law(scenario, t)
    amps = (scenario.x_amp, scenario.y_amp, scenario.phi_amp)
    return PlatformState(*(a * s for a in amps), *(a * sd for a in amps), *(a * sdd for a in amps))


def scenario_eval(scenario, t) -> PlatformState:
    if not 0.0 <= t <= scenario.duration:
        raise ValueError(f"t = {t} outside [0, {scenario.duration}] of scenario {scenario.name}")
    return _pose_at(scenario, t)


def sample_times(scenario):
    """Uniform grid from 0 with the last time clamped to the duration."""
    count = max(1, math.ceil(scenario.duration / scenario.sample_dt - 1e-9))
    return [min(k * scenario.sample_dt, scenario.duration) for k in range(count + 1)]


def evaluate_sample(params, scenario, t, oracle=True) -> Sample:
    pose = scenario_eval(scenario, t)
    try:
        legs, states, _, result = evaluate_state(params, pose, t=t)
        constraint = newton_euler_solve(params, pose, legs, states) if oracle else None
    except SingularConfiguration as error:
        raise error.at_time(t) from error
    ne_residual = 0.0
    if constraint is not None:
        ne_residual = float(np.abs(forces_array(result) - reactions_array(constraint)).max())
    return Sample(t=t, pose=pose, legs=legs, dynamics=result,
                  energy=energy_report(params, states, result),
                  ne_residual=ne_residual, constraint=constraint)


def simulate(params, scenario, oracle=True, workers=1) -> TimeSeries:
    times = sample_times(scenario)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            samples = list(executor.map(evaluate_sample, repeat(params), repeat(scenario),
                                        times, repeat(oracle), chunksize=32))
    else:
        samples = [evaluate_sample(params, scenario, t, oracle) for t in times]
    return TimeSeries(scenario=scenario, samples=tuple(samples))


def verify_series(series):
    """Raise OracleMismatch when a sample breaks the energy or free-body checks."""
    for sample in series.samples:
        scale = max(1.0, abs(sample.energy.sum_power))
        balance = abs(sample.energy.balance_residual)
        if balance > BALANCE_TOLERANCE * scale:
            raise OracleMismatch(f"energy balance at t = {sample.t}", balance, BALANCE_TOLERANCE * scale)
        if sample.ne_residual > NE_TOLERANCE:
            raise OracleMismatch(f"virtual work vs Newton-Euler at t = {sample.t}",
                                 sample.ne_residual, NE_TOLERANCE)
        if sample.constraint is not None and sample.constraint.residual > NE_RESIDUAL_TOLERANCE:
            raise OracleMismatch(f"free-body residual at t = {sample.t}",
                                 sample.constraint.residual, NE_RESIDUAL_TOLERANCE)


def sample_row(sample):
    row = [sample.t, *sample.pose.as_tuple()]
    for sol, forces in zip(sample.legs, sample.dynamics.legs):
        row += [sol.lambda10, sol.lambda32, sol.lambda10d, sol.lambda32d,
                sol.lambda10dd, sol.lambda32dd,
                forces.f10, forces.f21y, forces.f21z, forces.p10]
    energy = sample.energy
    row += [energy.T, energy.V, energy.dEdt, energy.sum_power, sample.ne_residual]
    return row


def write_csv(path, series):
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as file:
            writer = csv.writer(file, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for sample in series.samples:
                writer.writerow([format_float(v) for v in sample_row(sample)])
    except OSError as error:
        raise SimIOError(path, error) from error


def read_csv(path):
    """Column name -> numpy array of an emitted CSV."""
    try:
        with open(path, "r", newline="", encoding="utf-8") as file:
            rows = list(csv.reader(file))
    except OSError as error:
        raise SimIOError(path, error) from error
    if not rows or rows[0] != CSV_COLUMNS:
        raise SimIOError(path, "unexpected header")
    values = np.array([[float(v) for v in row] for row in rows[1:]]).reshape(-1, len(CSV_COLUMNS))
    return {name: values[:, i] for i, name in enumerate(CSV_COLUMNS)}


def csv_path(out, scenario_name, single):
    if out.endswith(".csv"):
        if single:
            return out
        out = os.path.dirname(out)
    return os.path.join(out, f"{scenario_name}.csv")


def run_sim(config):
    """Simulate every configured scenario and write its CSV (and plots)."""
    results = []
    single = len(config.scenarios) == 1
    for scenario in config.scenarios:
        print_yellow(f"Simulating {scenario.name}: {len(sample_times(scenario))} samples")
        with stopwatch() as elapsed:
            series = simulate(config.params, scenario, oracle=config.oracle, workers=config.workers)
        if config.oracle:
            verify_series(series)
        path = csv_path(config.out, scenario.name, single)
        write_csv(path, series)
        print_green(f"{scenario.name}: wrote {path} ({elapsed['seconds']:.2f} s)")
        if config.plots:
            for figure in write_plots(series, os.path.join(config.plots_dir, scenario.name)):
                print_green(f"{scenario.name}: wrote {figure}")
        results.append(series)
    return results


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self):
        return self.value <= self.tolerance


def _relative_gap(estimate, exact, scale):
    return abs(estimate - exact) / max(abs(exact), scale)


def _differentiation_gaps(params, scenario, t):
    legs = solve_kinematics(params, _pose_at(scenario, t))
    plus = solve_kinematics(params, _pose_at(scenario, t + FD_STEP))
    minus = solve_kinematics(params, _pose_at(scenario, t - FD_STEP))
    rate_gap = accel_gap = 0.0
    for sol, p, m in zip(legs, plus, minus):
        for name in ("lambda10", "lambda32"):
            fd = (getattr(p, name) - getattr(m, name)) / (2.0 * FD_STEP)
            rate_gap = max(rate_gap, _relative_gap(fd, getattr(sol, name + "d"), FD_SCALE))
            fd = (getattr(p, name + "d") - getattr(m, name + "d")) / (2.0 * FD_STEP)
            accel_gap = max(accel_gap, _relative_gap(fd, getattr(sol, name + "dd"), FD_SCALE))
    return rate_gap, accel_gap


def _rotated(pose, angle):
    R = rot_z(angle).T
    x, y, _ = R @ pose.position()
    xd, yd, _ = R @ pose.velocity()
    xdd, ydd, _ = R @ pose.acceleration()
    return PlatformState(x, y, pose.phi, xd, yd, pose.phid, xdd, ydd, pose.phidd)


def symmetry_gap(params, pose):
    """Largest leg-permutation mismatch after turning the trajectory and
    gravity by 2*pi/3 about the base origin."""
    angle = 2.0 * math.pi / 3.0
    turned = with_gravity(params, rot_z(angle).T @ params.gravity)
    _, _, _, base = evaluate_state(params, pose)
    _, _, _, moved = evaluate_state(turned, _rotated(pose, angle))
    gap = 0.0
    for leg in LEGS:
        a, b = base.legs[leg], moved.legs[leg.next()]
        gap = max(gap, abs(a.f10 - b.f10), abs(a.f21y - b.f21y), abs(a.f21z - b.f21z), abs(a.p10 - b.p10))
    return gap


def static_gaps(params):
    g = float(np.linalg.norm(params.gravity))
    fA, fB, fC = forces_array(static_hold(params, PlatformState()))[:, 0]
    m12 = params.m1 + params.m2
    return (abs(fA + fB + fC),
            abs(fC - fB + g * m12 * math.sqrt(3.0) / 2.0),
            abs((2.0 * fA - fB - fC) / math.sqrt(3.0) - g * (1.5 * m12 + params.m3)))


def run_checks(params, dt=None, seed=0):
    dt = CONFIG["check_dt"] if dt is None else dt
    checks = []
    rng = np.random.default_rng(seed)
    determinant = 0.0
    for phi in rng.uniform(-math.pi / 4.0, math.pi / 4.0, 1000):
        pose = PlatformState(phi=float(phi))
        for leg in LEGS:
            det = np.linalg.det(leg_connectivity_matrix(params, pose, leg))
            determinant = max(determinant, abs(det - math.sin(phi - PHI_SINGULAR)))
    checks.append(CheckResult("determinant law", determinant, 1e-13))

    for name in SCENARIO_NAMES:
        coarse = build_scenario(name, CONFIG["defaults"]["dt"])
        closure = rates = accels = connectivity = symmetry = 0.0
        for t in sample_times(coarse):
            pose = scenario_eval(coarse, t)
            legs = solve_kinematics(params, pose)
            for leg, sol in zip(LEGS, legs):
                closure = max(closure, loop_closure_residual(params, pose, leg, sol))
            rate_gap, accel_gap = _differentiation_gaps(params, coarse, t)
            rates, accels = max(rates, rate_gap), max(accels, accel_gap)
            for motion in virtual_rate_sets(params, pose, legs):
                connectivity = max(connectivity, connectivity_residual(params, pose, legs, motion))
        for t in (0.5, 1.5, 2.5):
            symmetry = max(symmetry, symmetry_gap(params, scenario_eval(coarse, t)))

        series = simulate(params, replace(coarse, sample_dt=dt))
        balance = max(abs(s.energy.balance_residual) / max(1.0, abs(s.energy.sum_power))
                      for s in series.samples)
        checks += [
            CheckResult(f"{name}: loop closure", closure, 1e-12),
            CheckResult(f"{name}: rates vs finite differences", rates, 1e-6),
            CheckResult(f"{name}: accelerations vs finite differences", accels, 1e-5),
            CheckResult(f"{name}: virtual connectivity", connectivity, 1e-11),
            CheckResult(f"{name}: energy balance", balance, BALANCE_TOLERANCE),
            CheckResult(f"{name}: integrated power vs energy change", energy_series_check(series.samples), 1e-6),
            CheckResult(f"{name}: virtual work vs Newton-Euler", max(s.ne_residual for s in series.samples),
                        NE_TOLERANCE),
            CheckResult(f"{name}: free-body residual", max(s.constraint.residual for s in series.samples),
                        NE_RESIDUAL_TOLERANCE),
            CheckResult(f"{name}: rotational covariance", symmetry, 1e-9),
        ]

    moment, lateral, vertical = static_gaps(params)
    checks += [
        CheckResult("static hold: sum of actuator forces", moment, 1e-9),
        CheckResult("static hold: lateral balance", lateral, 1e-9),
        CheckResult("static hold: vertical balance", vertical, 1e-6),
    ]
    return checks


def print_checks(checks):
    width = max(len(c.name) for c in checks)
    for check in checks:
        line = f"{check.name:<{width}}  {check.value:10.3e}  <= {check.tolerance:.0e}"
        if check.passed:
            print_green(f"PASS  {line}")
        else:
            print_red(f"FAIL  {line}")


def ik_report(params, pose):
    legs = inverse_geometry(params, pose)
    return {
        "pose": {"x": pose.x, "y": pose.y, "phi": pose.phi},
        "legs": {leg.name: {"lambda10": sol.lambda10, "lambda32": sol.lambda32, "phi21": sol.phi21}
                 for leg, sol in zip(LEGS, legs)},
    }


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(f"{self.prog}: {message}")


def build_parser():
    parser = _Parser(prog="prpsim",
                                     description="Inverse kinematics and dynamics of a 3-PRP planar parallel robot")
    commands = parser.add_subparsers(dest="command", required=True)

    def common(sub):
        sub.add_argument("--config", "-c", type=str, help="JSON document merged over the defaults")
        sub.add_argument("--scenario", "-s", type=str,
                         help=f"{', '.join(SCENARIO_NAMES)} or {ALL_SCENARIOS}")
        sub.add_argument("--dt", type=float, help="Sampling step in seconds")
        sub.add_argument("--out", "-o", type=str, help="Output directory, or CSV path for one scenario")
        sub.add_argument("--plots-dir", type=str, help="Directory for SVG figures")

    sim = commands.add_parser("sim", help="Run scenarios and write CSV (and SVG) output")
    common(sim)
    sim.add_argument("--plots", action="store_true", default=None, help="Also write SVG figures")
    sim.add_argument("--no-oracle", dest="oracle", action="store_false", default=None,
                     help="Skip the Newton-Euler cross-check")
    sim.add_argument("--workers", type=int, help="Worker processes for sample evaluation")

    ik = commands.add_parser("ik", help="Inverse geometry of one pose, printed as JSON")
    common(ik)
    ik.add_argument("--x", type=float, default=0.0)
    ik.add_argument("--y", type=float, default=0.0)
    ik.add_argument("--phi", type=float, default=0.0)

    check = commands.add_parser("check", help="Run the property and oracle checks")
    common(check)

    bench_cmd = commands.add_parser("bench", help="Time the recursive and the dense inverse dynamics")
    common(bench_cmd)
    bench_cmd.add_argument("--n", type=int, help="Evaluations per path")
    bench_cmd.add_argument("--t", type=float, default=1.5, help="Scenario time of the benchmarked state")
    return parser


def _overrides(args):
    keys = ("scenario", "dt", "out", "plots_dir", "plots", "oracle", "workers")
    values = {key: getattr(args, key, None) for key in keys}
    values["bench_n"] = getattr(args, "n", None)
    return values


def dispatch(args):
    config = load_config(args.config, **_overrides(args))
    if args.command == "sim":
        run_sim(config)
    elif args.command == "ik":
        try:
            pose = PlatformState(x=args.x, y=args.y, phi=args.phi)
        except ValueError as error:
            raise ConfigError(str(error)) from error
        print(json.dumps(ik_report(config.params, pose), indent=2))
    elif args.command == "check":
        checks = run_checks(config.params)
        print_checks(checks)
        failed = [c for c in checks if not c.passed]
        if failed:
            raise OracleMismatch(failed[0].name, failed[0].value, failed[0].tolerance)
    elif args.command == "bench":
        scenario = config.scenarios[0]
        if not 0.0 <= args.t <= scenario.duration:
            raise ConfigError(f"--t must lie in [0, {scenario.duration}], got {args.t}")
        report = bench(config.params, scenario_eval(scenario, args.t), config.bench_n)
        print(json.dumps(report.as_dict(), indent=2))


def run(argv=None):
    try:
        dispatch(build_parser().parse_args(argv))
    except SingularConfiguration as error:
        print_red(f"Singular configuration: {error}")
        return EXIT_SINGULAR
    except OracleMismatch as error:
        print_red(f"Oracle check failed: {error}")
        return EXIT_ORACLE
    except (PrpsimError, LookupError) as error:
        print_red(f"Error: {error}")
        return EXIT_IO
    return EXIT_OK


def main():
    sys.exit(run())
