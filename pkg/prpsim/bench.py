"""Timing and operation counts of the two inverse-dynamics paths.

Both paths start from the same joint solution. The recursive path runs the
link recursion, the 6x6 virtual connectivity solve and the tip-to-base
accumulation; the dense path runs the link recursion and the 21x21
free-body solve. Operation counts are static: every floating point addition,
subtraction, multiplication and division the paths perform, tallied from the
shapes of the primitives they call.
"""
import numpy as np

from .dynamics import forces_array, solve_inverse_dynamics
from .exceptions import OracleMismatch
from .kinematics import all_link_states, solve_kinematics, virtual_rate_sets
from .oracle import SYSTEM_SIZE, newton_euler_solve, reactions_array
from .structs import BenchReport
from .utils import stopwatch

AGREEMENT_TOLERANCE = 1e-8

MATVEC = 15
MATMAT = 45
CROSS = 9
DOT = 5
AXPY = 6

BODIES = 7
MOTIONS = 9


def lu_flops(n):
    return n * (n - 1) // 2 + (n - 1) * n * (2 * n - 1) // 3


def triangular_flops(n, rhs=1):
    return rhs * (2 * n * n - n)


def condition_flops(n):
    # two-sided reduction plus the singular value iteration
    return 8 * n ** 3 // 3


def flop_ledger():
    per_leg_rotations = 4 * MATMAT
    link_step = 3 * MATVEC + 6 * CROSS + 8 * AXPY + MATVEC + 3
    shared = {
        "rotations": 3 * per_leg_rotations,
        "link_states": 9 * link_step,
    }
    source_wrench = (MATVEC + 3 + CROSS) + (3 * CROSS + 9 + 2 * MATVEC + 2 * CROSS + 12)
    recursive = dict(shared)
    recursive.update({
        "virtual_system": 3 * (4 * MATVEC + AXPY),
        "virtual_condition": condition_flops(6),
        "virtual_factor": lu_flops(6),
        "virtual_solves": triangular_flops(6, MOTIONS),
        "source_wrenches": BODIES * (source_wrench + 6),
        "accumulation": 3 * 2 * (2 * MATVEC + CROSS + 6),
        "virtual_powers": MOTIONS * 3 * (MATVEC + 9),
        "actuator_powers": 3,
    })
    body_motion = (MATVEC + 3) + (CROSS + 3 + MATVEC) + (3 * CROSS + 6 + MATVEC) + MATVEC + 2 * DOT
    dense = dict(shared)
    dense.update({
        "body_motions": BODIES * body_motion,
        "leg_axes": 3 * 4 * MATVEC,
        "assembly": 3 * 8 * 5 + BODIES * 8,
        "free_body_condition": condition_flops(SYSTEM_SIZE),
        "free_body_factor": lu_flops(SYSTEM_SIZE),
        "free_body_solve": triangular_flops(SYSTEM_SIZE),
        "free_body_residual": 2 * SYSTEM_SIZE * SYSTEM_SIZE,
        "joint_projections": 3 * 2 * 3,
    })
    return {"recursive": recursive, "dense": dense}


def _recursive(params, pose, legs):
    states = all_link_states(params, legs)
    motions = virtual_rate_sets(params, pose, legs)
    return solve_inverse_dynamics(params, pose, legs, states, motions)


def _dense(params, pose, legs):
    states = all_link_states(params, legs)
    return newton_euler_solve(params, pose, legs, states)


def bench(params, pose, n) -> BenchReport:
    legs = solve_kinematics(params, pose)
    gap = float(np.abs(forces_array(_recursive(params, pose, legs))
                       - reactions_array(_dense(params, pose, legs))).max())
    if gap > AGREEMENT_TOLERANCE:
        raise OracleMismatch("recursive vs dense inverse dynamics", gap, AGREEMENT_TOLERANCE)

    ledger = flop_ledger()
    report = BenchReport(n=n,
                         recursive_flops=sum(ledger["recursive"].values()),
                         dense_flops=sum(ledger["dense"].values()),
                         max_disagreement=gap,
                         flop_ledger=ledger)
    if n == 0:
        return report

    with stopwatch() as recursive:
        for _ in range(n):
            _recursive(params, pose, legs)
    with stopwatch() as dense:
        for _ in range(n):
            _dense(params, pose, legs)
    report.recursive_seconds = recursive["seconds"]
    report.dense_seconds = dense["seconds"]
    report.recursive_mean = recursive["seconds"] / n
    report.dense_mean = dense["seconds"] / n
    return report
