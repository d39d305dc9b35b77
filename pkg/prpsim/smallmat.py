"""Fixed-size 3-vectors and 3x3 matrices.

Rotation convention: ``rot_z(a)`` maps the coordinates of a vector in frame
k-1 to its coordinates in frame k, where frame k is frame k-1 turned by ``a``
about z. Its transpose therefore turns a vector actively by ``+a``.
"""
import math

import numpy as np

Vec3 = np.ndarray
Mat3 = np.ndarray


def _frozen(array):
    array.setflags(write=False)
    return array


def vec3(x, y, z=0.0) -> Vec3:
    v = np.array((x, y, z), dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite vector component in {v}")
    return v


U1 = _frozen(np.array((1.0, 0.0, 0.0)))
U2 = _frozen(np.array((0.0, 1.0, 0.0)))
U3 = _frozen(np.array((0.0, 0.0, 1.0)))
ZERO = _frozen(np.zeros(3))
IDENTITY = _frozen(np.eye(3))

THETA_1 = _frozen(np.array(((0.0, 0.0, -1.0),
                            (0.0, 1.0, 0.0),
                            (1.0, 0.0, 0.0))))
THETA_2 = _frozen(0.5 * np.array(((1.0, -math.sqrt(3.0), 0.0),
                                  (math.sqrt(3.0), 1.0, 0.0),
                                  (0.0, 0.0, 2.0))))
_SKEW_U3 = _frozen(np.array(((0.0, -1.0, 0.0),
                             (1.0, 0.0, 0.0),
                             (0.0, 0.0, 0.0))))


def rot_z(angle) -> Mat3:
    c, s = math.cos(angle), math.sin(angle)
    return np.array(((c, s, 0.0),
                     (-s, c, 0.0),
                     (0.0, 0.0, 1.0)))


def rot_z_derivative(angle) -> Mat3:
    # d/da rot_z(a) = -u3~ rot_z(a)
    return -_SKEW_U3 @ rot_z(angle)


def skew_u3() -> Mat3:
    return _SKEW_U3


def skew(v) -> Mat3:
    return np.array(((0.0, -v[2], v[1]),
                     (v[2], 0.0, -v[0]),
                     (-v[1], v[0], 0.0)))


def cross(a, b) -> Vec3:
    return np.array((a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]))


def cross_z(a, b) -> float:
    """z component of a x b for in-plane vectors."""
    return a[0] * b[1] - a[1] * b[0]


def perp(v) -> Vec3:
    """u3~ v: in-plane vector turned by +90 degrees."""
    return np.array((-v[1], v[0], 0.0))


def is_rotation(m, tol=1e-12) -> bool:
    return (np.allclose(m.T @ m, IDENTITY, rtol=0.0, atol=tol)
            and abs(np.linalg.det(m) - 1.0) <= tol)


def solve_small(matrix, rhs, cond_limit=None):
    """Dense solve by LU with partial pivoting (LAPACK gesv).

    Returns None when ``cond_limit`` is given and exceeded, leaving the
    choice of exception to the caller.
    """
    if cond_limit is not None and np.linalg.cond(matrix) > cond_limit:
        return None
    return np.linalg.solve(matrix, rhs)
