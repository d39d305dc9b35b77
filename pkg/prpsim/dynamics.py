"""Inverse dynamics by the principle of virtual work.

Each body contributes a source wrench F_k0 = -(F_in + F_weight) at its frame
origin. Sources are accumulated from the tip of every leg down to the piston,
after which each unknown force is the virtual power of the accumulated
wrenches under its unit virtual motion. The platform belongs to the chain of
leg A only, so every one of the seven bodies is counted once.
"""
import numpy as np

from .kinematics import (all_link_states, link_states, solve_kinematics,
                         virtual_rate_sets, virtual_solution)
from .model import LEGS, LegIndex, leg_rotations
from .smallmat import U3, ZERO, cross
from .structs import DynamicsResult, LegForces, Wrench

PLATFORM_CARRIER = LegIndex.A


def gravity_wrench(params, link, leg, rotation) -> Wrench:
    force = params.mass(link) * (rotation @ params.gravity)
    moment = cross(params.com(link), force)
    return Wrench(force, moment, (int(leg), link))


def inertia_wrench(params, link, leg, state) -> Wrench:
    m = params.mass(link)
    c = params.com(link)
    J = params.origin_inertia(link, leg)
    w, e = state.omega, state.epsilon
    com_acc = state.acc + cross(e, c) + cross(w, cross(w, c))
    force = -m * com_acc
    moment = -m * cross(c, state.acc) - J @ e - cross(w, J @ w)
    return Wrench(force, moment, (int(leg), link))


def platform_load_wrench(params, state, load) -> Wrench:
    """External platform wrench (force and moment at G, base frame) moved to
    the frame-3 origin of the carrier leg."""
    force = state.rotation @ load.force
    moment = state.rotation @ load.moment + cross(params.platform_offset, force)
    return Wrench(force, moment, (int(PLATFORM_CARRIER), 3))


def _zero_wrench(leg, link):
    return Wrench(ZERO.copy(), ZERO.copy(), (int(leg), link))


def leg_sources(params, leg, states, platform_load=None):
    """Source wrenches F_k0, M_k0 of links 1, 2, 3 of one leg."""
    sources = []
    for link, state in zip((1, 2, 3), states):
        if link == 3 and leg != PLATFORM_CARRIER:
            sources.append(_zero_wrench(leg, link))
            continue
        applied = gravity_wrench(params, link, leg, state.rotation) + inertia_wrench(params, link, leg, state)
        if link == 3 and platform_load is not None:
            applied = applied + platform_load_wrench(params, state, platform_load)
        sources.append(-applied)
    return sources


def accumulate_leg(params, leg, solution, sources):
    """Tip-to-base accumulation of the source wrenches of one leg.

    Returns the accumulated wrenches of links 1, 2, 3, each in its own frame.
    """
    rots = leg_rotations(params, leg, solution.phi21)
    # rotation and offset of link k+1 relative to link k, indexed by k+1
    a = {2: rots.q21, 3: rots.q32}
    r = {2: ZERO, 3: solution.lambda32 * (rots.q32.T @ U3)}

    accumulated = {3: sources[2]}
    for k in (2, 1):
        outer = accumulated[k + 1]
        carried = a[k + 1].T @ outer.force
        source = sources[k - 1]
        accumulated[k] = Wrench(
            source.force + carried,
            source.moment + a[k + 1].T @ outer.moment + cross(r[k + 1], carried),
            source.frame)
    return (accumulated[1], accumulated[2], accumulated[3])


def _accumulated_power(accumulated, rotations, motion):
    total = 0.0
    for leg in LEGS:
        F1, F2, F3 = accumulated[leg]
        # link-2 force seen in frame-1 axes
        F2_in_1 = rotations[leg].q21.T @ F2.force
        total += (motion.v10[leg] * F1.force[2]
                  + motion.v21y[leg] * F2_in_1[1]
                  + motion.v21z[leg] * F2_in_1[2]
                  + motion.omega21[leg] * F2.moment[2]
                  + motion.v32[leg] * F3.force[2])
    return float(total)


def solve_inverse_dynamics(params, pose, legs, states, motions, t=0.0, platform_load=None):
    rotations = [leg_rotations(params, leg, sol.phi21) for leg, sol in zip(LEGS, legs)]
    accumulated = [accumulate_leg(params, leg, sol, leg_sources(params, leg, leg_states, platform_load))
                   for leg, sol, leg_states in zip(LEGS, legs, states)]
    unknowns = {motion.label: _accumulated_power(accumulated, rotations, motion) for motion in motions}

    forces = []
    for leg, sol in zip(LEGS, legs):
        f10 = unknowns[f"f10_{leg.name}"]
        forces.append(LegForces(f10=f10,
                                f21y=unknowns[f"f21y_{leg.name}"],
                                f21z=unknowns[f"f21z_{leg.name}"],
                                p10=f10 * sol.lambda10d))
    return DynamicsResult(t=t, pose=pose, legs=tuple(forces))


def virtual_power(params, legs, sources, motion):
    """Virtual power of all source wrenches, body by body.

    Runs the link recursion with the virtual rates of ``motion`` in place of
    the real ones; ``sources[leg]`` are the per-link source wrenches.
    """
    total = 0.0
    for leg, sol in zip(LEGS, legs):
        virtual = virtual_solution(sol, motion, leg)
        states = link_states(params, leg, virtual, fictitious=(motion.v21y[leg], motion.v21z[leg]))
        for wrench, state in zip(sources[leg], states):
            total += float(wrench.force @ state.vel + wrench.moment @ state.omega)
    return total


def evaluate_state(params, pose, t=0.0, platform_load=None):
    """Kinematics, virtual motions and inverse dynamics of one platform state."""
    legs = solve_kinematics(params, pose)
    states = all_link_states(params, legs)
    motions = virtual_rate_sets(params, pose, legs)
    result = solve_inverse_dynamics(params, pose, legs, states, motions, t=t,
                                    platform_load=platform_load)
    return legs, states, motions, result


def static_hold(params, pose, platform_load=None) -> DynamicsResult:
    _, _, _, result = evaluate_state(params, pose.at_rest(), platform_load=platform_load)
    return result


def forces_array(result):
    """(3, 3) array of f10, f21y, f21z per leg."""
    return np.array([(leg.f10, leg.f21y, leg.f21z) for leg in result.legs])
