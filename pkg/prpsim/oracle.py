"""Independent checks of the kinematics and the virtual-work dynamics.

Nothing here imports the dynamics module: energies and the free-body
Newton-Euler system are assembled straight from robot parameters and link
states, in base-frame coordinates.
"""
from dataclasses import dataclass

import numpy as np

from .exceptions import SingularConfiguration
from .kinematics import body_point_acceleration, body_point_velocity
from .model import LEGS, leg_rotations
from .smallmat import U2, U3, ZERO, cross_z, perp
from .structs import ConstraintSolution, EnergyReport, LegReactions

# unknowns per leg, in assembly order
ACTUATOR, BASE_NORMAL, BASE_MOMENT, REV_X, REV_Y, PLATFORM_NORMAL, PLATFORM_MOMENT = range(7)
UNKNOWNS_PER_LEG = 7
SYSTEM_SIZE = 3 * UNKNOWNS_PER_LEG


def fd_derivative(f, t, h):
    if not h > 0.0:
        raise ValueError(f"step must be positive, got {h}")
    return (f(t + h) - f(t - h)) / (2.0 * h)


@dataclass(frozen=True)
class BodyMotion:
    """Base-frame COM motion of one rigid body."""
    mass: float
    inertia: float  # centroidal, about the plane normal
    position: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    omega: float
    epsilon: float


def _body(params, link, state):
    c = params.com(link)
    normal = state.rotation @ U3
    return BodyMotion(
        mass=params.mass(link),
        inertia=float(params.centroidal_inertia(link)[2, 2]),
        position=state.origin + state.rotation.T @ c,
        velocity=body_point_velocity(state, c),
        acceleration=body_point_acceleration(state, c),
        omega=float(state.omega @ normal),
        epsilon=float(state.epsilon @ normal),
    )


def body_motions(params, states):
    """Pistons A, B, C, links 2 A, B, C, then the platform (from leg A)."""
    pistons = [_body(params, 1, leg_states[0]) for leg_states in states]
    links = [_body(params, 2, leg_states[1]) for leg_states in states]
    platform = _body(params, 3, states[0][2])
    return pistons + links + [platform]


def total_energy(params, states):
    T = V = 0.0
    for body in body_motions(params, states):
        T += 0.5 * (body.mass * float(body.velocity @ body.velocity) + body.inertia * body.omega ** 2)
        V -= body.mass * float(params.gravity @ body.position)
    return T, V


def energy_report(params, states, result) -> EnergyReport:
    T = V = dEdt = 0.0
    for body in body_motions(params, states):
        T += 0.5 * (body.mass * float(body.velocity @ body.velocity) + body.inertia * body.omega ** 2)
        V -= body.mass * float(params.gravity @ body.position)
        dEdt += (body.mass * float(body.velocity @ (body.acceleration - params.gravity))
                 + body.inertia * body.omega * body.epsilon)
    return EnergyReport(T=T, V=V, dEdt=dEdt, sum_power=result.sum_power)


class _Assembly:

    def __init__(self):
        self.A = np.zeros((SYSTEM_SIZE, SYSTEM_SIZE))
        self.b = np.zeros(SYSTEM_SIZE)

    def force(self, row, column, direction, point, com, sign=1.0):
        # unknown scalar times ``direction`` acting at ``point`` on the body of ``row``
        self.A[row, column] += sign * direction[0]
        self.A[row + 1, column] += sign * direction[1]
        self.A[row + 2, column] += sign * cross_z(point - com, direction)

    def couple(self, row, column, sign=1.0):
        self.A[row + 2, column] += sign

    def inertial(self, row, params, body, applied_force=ZERO, applied_moment=0.0):
        load = body.mass * (body.acceleration - params.gravity) - applied_force
        self.b[row:row + 2] = load[:2]
        self.b[row + 2] = body.inertia * body.epsilon - applied_moment


def newton_euler_solve(params, pose, legs, states, platform_load=None) -> ConstraintSolution:
    bodies = body_motions(params, states)
    platform = bodies[6]
    system = _Assembly()
    platform_row = 18
    geometry = []
    for leg, sol, leg_states in zip(LEGS, legs, states):
        rots = leg_rotations(params, leg, sol.phi21)
        a1, n1 = rots.q10.T @ U3, rots.q10.T @ U2
        a3 = rots.q30.T @ U3
        n3 = perp(a3)
        A1, A2, A3 = (s.origin for s in leg_states)
        piston, link2 = bodies[leg], bodies[3 + leg]
        column = UNKNOWNS_PER_LEG * leg
        piston_row, link_row = 6 * leg, 6 * leg + 3

        # piston: actuator and normal reaction of the base guide at A1, couple, link 2 at A2
        system.force(piston_row, column + ACTUATOR, a1, A1, piston.position)
        system.force(piston_row, column + BASE_NORMAL, n1, A1, piston.position)
        system.couple(piston_row, column + BASE_MOMENT)
        for axis, unknown in ((0, REV_X), (1, REV_Y)):
            e = np.zeros(3)
            e[axis] = 1.0
            system.force(piston_row, column + unknown, e, A2, piston.position, sign=-1.0)
            system.force(link_row, column + unknown, e, A2, link2.position)
        # platform guide: reaction on the platform at A3, opposite on link 2
        system.force(link_row, column + PLATFORM_NORMAL, n3, A3, link2.position, sign=-1.0)
        system.couple(link_row, column + PLATFORM_MOMENT, sign=-1.0)
        system.force(platform_row, column + PLATFORM_NORMAL, n3, A3, platform.position)
        system.couple(platform_row, column + PLATFORM_MOMENT)

        system.inertial(piston_row, params, piston)
        system.inertial(link_row, params, link2)
        geometry.append((a1, n1))

    if platform_load is None:
        system.inertial(platform_row, params, platform)
    else:
        system.inertial(platform_row, params, platform,
                        applied_force=np.asarray(platform_load.force, dtype=float),
                        applied_moment=float(platform_load.moment[2]))

    condition = np.linalg.cond(system.A)
    if not condition <= params.cond_limit:
        raise SingularConfiguration(
            f"phi = {pose.phi!r} rad: free-body system is rank deficient (cond = {condition:.3e})",
            phi=pose.phi)
    x = np.linalg.solve(system.A, system.b)
    residual = float(np.abs(system.A @ x - system.b).max())

    reactions = []
    for leg, (a1, n1) in zip(LEGS, geometry):
        u = x[UNKNOWNS_PER_LEG * leg:UNKNOWNS_PER_LEG * (leg + 1)]
        revolute = np.array((u[REV_X], u[REV_Y], 0.0))
        reactions.append(LegReactions(
            actuator=float(u[ACTUATOR]),
            base_normal=float(u[BASE_NORMAL]),
            base_moment=float(u[BASE_MOMENT]),
            revolute=(float(u[REV_X]), float(u[REV_Y])),
            f21y=float(revolute @ n1),
            f21z=float(revolute @ a1),
            platform_normal=float(u[PLATFORM_NORMAL]),
            platform_moment=float(u[PLATFORM_MOMENT]),
        ))
    return ConstraintSolution(legs=tuple(reactions), residual=residual, condition=float(condition))


def reactions_array(solution):
    """(3, 3) array of actuator, f21y, f21z per leg."""
    return np.array([(leg.actuator, leg.f21y, leg.f21z) for leg in solution.legs])


def base_reaction(params, legs, solution):
    """Total force of the base guides on the pistons, base frame."""
    total = np.zeros(3)
    for leg, sol, reaction in zip(LEGS, legs, solution.legs):
        rots = leg_rotations(params, leg, sol.phi21)
        total += reaction.actuator * (rots.q10.T @ U3) + reaction.base_normal * (rots.q10.T @ U2)
    return total


def virtual_twist_dense(params, pose, legs, prescribed):
    """Brute-force virtual connectivity: 9 unknowns (twist, v10 x3, v32 x3).

    ``prescribed`` maps a leg to its unit actuator rate; the other actuator
    rates are pinned to zero. Returns the virtual platform twist.
    """
    A = np.zeros((9, 9))
    b = np.zeros(9)
    for leg, sol in zip(LEGS, legs):
        rots = leg_rotations(params, leg, sol.phi21)
        a1 = rots.q10.T @ U3
        a3 = rots.q30.T @ U3
        d = sol.lambda32 * a3 + rots.q30.T @ params.platform_offset
        for j in (0, 1):
            row = 2 * leg + j
            A[row, j] = -1.0
            A[row, 2] = -d[1] if j == 0 else d[0]
            A[row, 3 + leg] = a1[j]
            A[row, 6 + leg] = a3[j]
        A[6 + leg, 3 + leg] = 1.0
        b[6 + leg] = prescribed.get(leg, 0.0)
    x = np.linalg.solve(A, b)
    return tuple(float(v) for v in x[:3])


def energy_series_check(samples):
    """|trapezoid integral of the actuator power - change of total energy|."""
    if len(samples) < 2:
        return 0.0
    t = np.array([s.t for s in samples])
    power = np.array([s.energy.sum_power for s in samples])
    work = float(np.sum(0.5 * (power[1:] + power[:-1]) * np.diff(t)))
    return abs(work - (samples[-1].energy.E - samples[0].energy.E))
