"""Robot parameters and the per-leg chain of frame rotations.

Frames of leg i, base to platform: frame 1 rides on the actuated piston (its z
axis is the actuator axis), frame 2 is the intermediate link (z normal to the
plane, turned by phi21 about the revolute joint), frame 3 is fixed to the
platform with its z axis along the platform-side prismatic joint.
"""
import enum
import math
from dataclasses import dataclass, field, fields, replace
from typing import Tuple

import numpy as np

from .constants import GRAVITY, SQRT3, SINGULAR_TOL, COND_LIMIT
from .exceptions import ConfigError
from .smallmat import THETA_1, THETA_2, rot_z, vec3


class LegIndex(enum.IntEnum):
    A = 0
    B = 1
    C = 2

    def next(self):
        return LegIndex((self + 1) % 3)


LEGS = tuple(LegIndex)


@dataclass(frozen=True)
class LegRotations:
    q10: np.ndarray
    q21: np.ndarray
    q32: np.ndarray
    q20: np.ndarray
    q30: np.ndarray


@dataclass(frozen=True)
class RobotParams:
    l0: float
    alpha: Tuple[float, float, float]
    base_anchors: Tuple[np.ndarray, np.ndarray, np.ndarray]
    platform_offset: np.ndarray
    m1: float
    m2: float
    m3: float
    com1: np.ndarray
    com2: np.ndarray
    com3: np.ndarray
    # centroidal, plane-aligned body axes: frame 2 for link 2, the platform
    # central frame for link 3
    J2: np.ndarray
    J3: np.ndarray
    gravity: np.ndarray
    singular_tol: float = SINGULAR_TOL
    cond_limit: float = COND_LIMIT
    _origin_inertia: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.l0 > 0.0:
            raise ValueError(f"l0 must be positive, got {self.l0}")
        if len(self.alpha) != 3 or len(self.base_anchors) != 3:
            raise ValueError("expected exactly three legs")
        for name in ("m1", "m2", "m3"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("J2", "J3"):
            J = getattr(self, name)
            if J.shape != (3, 3) or not np.allclose(J, J.T, rtol=0.0, atol=1e-15):
                raise ValueError(f"{name} must be a symmetric 3x3 tensor")
            if np.linalg.eigvalsh(J).min() < -1e-12:
                raise ValueError(f"{name} must be positive semidefinite")
        for f in fields(self):
            value = getattr(self, f.name, None)
            if f.init and not np.all(np.isfinite(np.asarray(value, dtype=float))):
                raise ValueError(f"{f.name} has non-finite entries")
        transported = {}
        for leg in LEGS:
            for link in (1, 2, 3):
                transported[(link, leg)] = _transport_inertia(self, link, leg)
        object.__setattr__(self, "_origin_inertia", transported)

    @property
    def l(self):
        return self.l0 * SQRT3

    @property
    def piston_offset(self):
        # distance from the base anchor to the frame-1 origin at lambda10 = 0
        return self.l0 / SQRT3

    @property
    def masses(self):
        return (self.m1, self.m2, self.m3)

    @property
    def total_mass(self):
        return 3.0 * (self.m1 + self.m2) + self.m3

    def mass(self, link):
        return self.masses[link - 1]

    def com(self, link):
        return (self.com1, self.com2, self.com3)[link - 1]

    def centroidal_inertia(self, link):
        return {1: np.zeros((3, 3)), 2: self.J2, 3: self.J3}[link]

    def origin_inertia(self, link, leg):
        """Inertia about the link-frame origin, in link-frame coordinates."""
        return self._origin_inertia[(link, LegIndex(leg))]


def _body_axes(link, leg, alpha):
    # rotation from the plane-aligned body axes to the link frame
    if link == 1:
        return THETA_1
    if link == 2:
        return np.eye(3)
    return THETA_1 @ THETA_2 @ rot_z(alpha[leg])


def _transport_inertia(params, link, leg):
    P = _body_axes(link, leg, params.alpha)
    c = params.com(link)
    m = params.mass(link)
    parallel_axis = m * (float(c @ c) * np.eye(3) - np.outer(c, c))
    return P @ params.centroidal_inertia(link) @ P.T + parallel_axis


def standard_anchors(l0):
    return (vec3(0.0, -l0),
            vec3(0.5 * l0 * SQRT3, 0.5 * l0),
            vec3(-0.5 * l0 * SQRT3, 0.5 * l0))


def standard_platform_offset(l0):
    return vec3(0.0, 0.5 * l0, -0.5 * l0 / SQRT3)


def standard_params(**overrides) -> RobotParams:
    l0 = float(overrides.get("l0", 0.3))
    m3 = float(overrides.get("m3", 3.0))
    offset = np.asarray(overrides.get("platform_offset", standard_platform_offset(l0)), dtype=float)
    l = l0 * SQRT3
    defaults = dict(
        l0=l0,
        alpha=(math.pi / 3.0, math.pi, -math.pi / 3.0),
        base_anchors=standard_anchors(l0),
        platform_offset=offset,
        m1=1.0,
        m2=0.75,
        m3=m3,
        com1=np.zeros(3),
        com2=np.zeros(3),
        # platform COM sits at G
        com3=offset.copy(),
        J2=np.zeros((3, 3)),
        J3=np.diag((0.0, 0.0, m3 * l * l / 12.0)),
        gravity=vec3(0.0, -GRAVITY),
    )
    defaults.update(overrides)
    return RobotParams(**_coerce(defaults))


_VECTOR_FIELDS = ("platform_offset", "com1", "com2", "com3", "gravity")
_MATRIX_FIELDS = ("J2", "J3")


def _coerce(values):
    out = dict(values)
    for name in _VECTOR_FIELDS:
        out[name] = np.array(out[name], dtype=float).reshape(3)
    for name in _MATRIX_FIELDS:
        out[name] = np.array(out[name], dtype=float).reshape(3, 3)
    out["alpha"] = tuple(float(a) for a in out["alpha"])
    out["base_anchors"] = tuple(np.array(a, dtype=float).reshape(3) for a in out["base_anchors"])
    for name in ("l0", "m1", "m2", "m3", "singular_tol", "cond_limit"):
        if name in out:
            out[name] = float(out[name])
    return out


def params_from_dict(overrides) -> RobotParams:
    known = {f.name for f in fields(RobotParams) if f.init}
    unknown = set(overrides) - known
    if unknown:
        raise ConfigError(f"unknown robot parameter(s): {', '.join(sorted(unknown))}")
    try:
        return standard_params(**overrides)
    except (TypeError, ValueError) as error:
        raise ConfigError(f"invalid robot parameters: {error}") from error


def with_gravity(params, gravity) -> RobotParams:
    return replace(params, gravity=np.array(gravity, dtype=float).reshape(3))


def leg_rotations(params: RobotParams, leg, phi21) -> LegRotations:
    theta_alpha = rot_z(params.alpha[leg])
    q10 = THETA_1 @ theta_alpha
    q21 = rot_z(phi21) @ THETA_1.T
    q32 = THETA_1 @ THETA_2
    q20 = q21 @ q10
    q30 = q32 @ q20
    return LegRotations(q10=q10, q21=q21, q32=q32, q20=q20, q30=q30)


def central_rotation(params: RobotParams, leg):
    """q30 of the unrotated platform."""
    return THETA_1 @ THETA_2 @ rot_z(params.alpha[leg])
