"""Inverse kinematics of the 3-PRP robot.

Positions, rates and accelerations of the joints follow from the per-leg
vector loop, each level a 2x2 linear system sharing the same coefficient
matrix. The per-link recursion then carries rotations, angular and linear
velocities and accelerations from the base outwards along every leg.
"""
import math
from dataclasses import replace

import numpy as np

from .constants import PHI_SINGULAR
from .exceptions import SingularConfiguration
from .model import LEGS, LegIndex, leg_rotations
from .smallmat import IDENTITY, U2, U3, ZERO, cross, perp, skew_u3, solve_small
from .structs import LegSolution, LinkState, VirtualMotion

ACTUATOR = "actuator"
FICTITIOUS_Y = "y"
FICTITIOUS_Z = "z"
MOTION_KINDS = (ACTUATOR, FICTITIOUS_Y, FICTITIOUS_Z)
MOTION_LABELS = {ACTUATOR: "f10", FICTITIOUS_Y: "f21y", FICTITIOUS_Z: "f21z"}

BASE_STATE = LinkState(rotation=IDENTITY, omega=ZERO, epsilon=ZERO,
                       vel=ZERO, acc=ZERO, origin=ZERO)


def check_regular(params, phi):
    margin = abs(math.sin(phi - PHI_SINGULAR))
    if margin < params.singular_tol:
        raise SingularConfiguration(
            f"phi = {phi!r} rad: prismatic axes 1 and 3 are parallel "
            f"(|sin(phi - pi/3)| = {margin:.3e})", phi=phi)


class _LegFrame:
    """Axis directions and platform arm of one leg, base coordinates."""

    __slots__ = ("rotations", "a1", "n1", "a3", "arm")

    def __init__(self, params, leg, phi):
        self.rotations = rots = leg_rotations(params, leg, phi)
        self.a1 = rots.q10.T @ U3
        self.n1 = rots.q10.T @ U2
        self.a3 = rots.q30.T @ U3
        # A3 -> G
        self.arm = rots.q30.T @ params.platform_offset

    def lever(self, lambda32):
        # A2 -> G
        return lambda32 * self.a3 + self.arm

    def matrix(self):
        return np.array(((self.a1[0], self.a3[0]),
                         (self.a1[1], self.a3[1])))


def leg_connectivity_matrix(params, pose, leg):
    return _LegFrame(params, leg, pose.phi).matrix()


def inverse_geometry(params, pose):
    check_regular(params, pose.phi)
    solutions = []
    for leg in LEGS:
        frame = _LegFrame(params, leg, pose.phi)
        rhs = (pose.position() - params.base_anchors[leg]
               - params.piston_offset * frame.a1 - frame.arm)
        lambda10, lambda32 = solve_small(frame.matrix(), rhs[:2])
        solutions.append(LegSolution(lambda10=float(lambda10), lambda32=float(lambda32),
                                     phi21=pose.phi))
    return tuple(solutions)


def inverse_rates(params, pose, legs):
    check_regular(params, pose.phi)
    S = skew_u3()
    solved = []
    for leg, sol in zip(LEGS, legs):
        frame = _LegFrame(params, leg, pose.phi)
        rhs = pose.velocity() - pose.phid * (S @ frame.lever(sol.lambda32))
        lambda10d, lambda32d = solve_small(frame.matrix(), rhs[:2])
        solved.append(replace(sol, lambda10d=float(lambda10d), lambda32d=float(lambda32d),
                              phi21d=pose.phid))
    return tuple(solved)


def inverse_accels(params, pose, legs):
    check_regular(params, pose.phi)
    S = skew_u3()
    solved = []
    for leg, sol in zip(LEGS, legs):
        frame = _LegFrame(params, leg, pose.phi)
        d = frame.lever(sol.lambda32)
        rhs = (pose.acceleration()
               - pose.phidd * (S @ d)
               - pose.phid ** 2 * (S @ (S @ d))
               - 2.0 * sol.lambda32d * pose.phid * (S @ frame.a3))
        lambda10dd, lambda32dd = solve_small(frame.matrix(), rhs[:2])
        solved.append(replace(sol, lambda10dd=float(lambda10dd), lambda32dd=float(lambda32dd),
                              phi21dd=pose.phidd))
    return tuple(solved)


def solve_kinematics(params, pose):
    legs = inverse_geometry(params, pose)
    legs = inverse_rates(params, pose, legs)
    return inverse_accels(params, pose, legs)


def loop_closure_residual(params, pose, leg, solution):
    rots = leg_rotations(params, leg, solution.phi21)
    r10 = params.base_anchors[leg] + (params.piston_offset + solution.lambda10) * (rots.q10.T @ U3)
    r21 = ZERO
    r32 = solution.lambda32 * (rots.q32.T @ U3)
    closure = (r10 + rots.q10.T @ r21 + rots.q20.T @ r32
               + rots.q30.T @ params.platform_offset - pose.position())
    return float(np.linalg.norm(closure))


def _child_state(parent, a, r, rotation, omega_rel=0.0, epsilon_rel=0.0,
                 v_rel=0.0, gamma_rel=0.0, shift=ZERO):
    """One step of the base-to-tip recursion.

    ``a`` turns parent-frame coordinates into child-frame ones, ``r`` runs from
    the parent origin to the child origin in parent coordinates and ``shift``
    is a virtual translation of the child relative to the parent (parent
    coordinates, velocity level only).
    """
    w = a @ parent.omega
    omega = w + omega_rel * U3
    epsilon = a @ parent.epsilon + epsilon_rel * U3 + omega_rel * cross(w, U3)
    vel = a @ (parent.vel + cross(parent.omega, r) + shift) + v_rel * U3
    transport = parent.acc + cross(parent.epsilon, r) + cross(parent.omega, cross(parent.omega, r))
    acc = a @ transport + 2.0 * v_rel * cross(w, U3) + gamma_rel * U3
    origin = parent.origin + parent.rotation.T @ r
    return LinkState(rotation=rotation, omega=omega, epsilon=epsilon, vel=vel, acc=acc,
                     origin=origin)


def link_states(params, leg, solution, fictitious=(0.0, 0.0)):
    """States of links 1, 2, 3 of one leg.

    ``fictitious`` holds the rates (v21y, v21z) of the virtual translation of
    the revolute joint along the frame-1 axes u2 and u3.
    """
    leg = LegIndex(leg)
    rots = leg_rotations(params, leg, solution.phi21)
    r10 = params.base_anchors[leg] + (params.piston_offset + solution.lambda10) * (rots.q10.T @ U3)
    s1 = _child_state(BASE_STATE, rots.q10, r10, rots.q10,
                      v_rel=solution.lambda10d, gamma_rel=solution.lambda10dd)
    shift = fictitious[0] * U2 + fictitious[1] * U3
    s2 = _child_state(s1, rots.q21, ZERO, rots.q20,
                      omega_rel=solution.phi21d, epsilon_rel=solution.phi21dd, shift=shift)
    r32 = solution.lambda32 * (rots.q32.T @ U3)
    s3 = _child_state(s2, rots.q32, r32, rots.q30,
                      v_rel=solution.lambda32d, gamma_rel=solution.lambda32dd)
    return (s1, s2, s3)


def all_link_states(params, legs):
    return tuple(link_states(params, leg, sol) for leg, sol in zip(LEGS, legs))


def body_point_velocity(state, point):
    """Base-frame velocity of a body point given in link-frame coordinates."""
    return state.rotation.T @ (state.vel + cross(state.omega, point))


def body_point_acceleration(state, point):
    return state.rotation.T @ (state.acc + cross(state.epsilon, point)
                               + cross(state.omega, cross(state.omega, point)))


def _virtual_system(params, pose, legs):
    A = np.zeros((6, 6))
    frames = []
    for leg, sol in zip(LEGS, legs):
        frame = _LegFrame(params, leg, pose.phi)
        rows = slice(2 * leg, 2 * leg + 2)
        A[rows, 0:2] = -np.eye(2)
        A[rows, 2] = perp(frame.lever(sol.lambda32))[:2]
        A[rows, 3 + leg] = frame.a3[:2]
        frames.append(frame)
    return A, frames


def _prescribed_direction(frame, kind):
    return {ACTUATOR: frame.a1, FICTITIOUS_Y: frame.n1, FICTITIOUS_Z: frame.a1}[kind]


def virtual_rate_sets(params, pose, legs=None):
    """The nine unit virtual motions: actuators A, B, C, then y and z sets."""
    check_regular(params, pose.phi)
    if legs is None:
        legs = inverse_geometry(params, pose)
    A, frames = _virtual_system(params, pose, legs)
    condition = np.linalg.cond(A)
    if not condition <= params.cond_limit:
        raise SingularConfiguration(
            f"phi = {pose.phi!r} rad: virtual connectivity system is rank deficient "
            f"(cond = {condition:.3e})", phi=pose.phi)
    rhs = np.zeros((6, 9))
    for column, (kind, leg) in enumerate((k, l) for k in MOTION_KINDS for l in LEGS):
        rhs[2 * leg:2 * leg + 2, column] = -_prescribed_direction(frames[leg], kind)[:2]
    unknowns = np.linalg.solve(A, rhs)

    motions = []
    for column, (kind, leg) in enumerate((k, l) for k in MOTION_KINDS for l in LEGS):
        xv, yv, wv, *v32 = (float(u) for u in unknowns[:, column])
        unit = tuple(1.0 if i == leg else 0.0 for i in LEGS)
        none = (0.0, 0.0, 0.0)
        motions.append(VirtualMotion(
            label=f"{MOTION_LABELS[kind]}_{leg.name}",
            kind=kind,
            leg=int(leg),
            platform_twist=(xv, yv, wv),
            v10=unit if kind == ACTUATOR else none,
            omega21=(wv, wv, wv),
            v32=tuple(v32),
            v21y=unit if kind == FICTITIOUS_Y else none,
            v21z=unit if kind == FICTITIOUS_Z else none,
        ))
    return tuple(motions)


def connectivity_residual(params, pose, legs, motion):
    xv, yv, wv = motion.platform_twist
    worst = 0.0
    for leg, sol in zip(LEGS, legs):
        frame = _LegFrame(params, leg, pose.phi)
        lhs = (motion.v10[leg] * frame.a1 + motion.v21y[leg] * frame.n1
               + motion.v21z[leg] * frame.a1 + motion.v32[leg] * frame.a3
               + motion.omega21[leg] * perp(frame.lever(sol.lambda32)))
        residual = lhs[:2] - (xv, yv)
        worst = max(worst, float(np.abs(residual).max()), abs(motion.omega21[leg] - wv))
    return worst


def virtual_solution(solution, motion, leg):
    """LegSolution carrying the virtual rates of ``motion`` and no accelerations."""
    return replace(solution,
                   lambda10d=motion.v10[leg], phi21d=motion.omega21[leg],
                   lambda32d=motion.v32[leg],
                   lambda10dd=0.0, phi21dd=0.0, lambda32dd=0.0)
