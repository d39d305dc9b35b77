import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from prpsim.exceptions import ConfigError
from prpsim.model import (LEGS, LegIndex, central_rotation, leg_rotations, params_from_dict,
                          standard_params, with_gravity)
from prpsim.smallmat import U1, U3, is_rotation


def test_standard_values(params):
    assert params.l0 == 0.3
    assert params.l == pytest.approx(0.3 * math.sqrt(3.0), abs=1e-12)
    assert params.alpha == pytest.approx((math.pi / 3.0, math.pi, -math.pi / 3.0))
    assert params.masses == (1.0, 0.75, 3.0)
    assert params.total_mass == pytest.approx(8.25)
    assert_allclose(params.gravity, (0.0, -9.81, 0.0))


def test_anchors_are_symmetric(params):
    assert_allclose(sum(params.base_anchors), np.zeros(3), atol=1e-15)
    for anchor in params.base_anchors:
        assert np.linalg.norm(anchor) == pytest.approx(params.l0)


def test_leg_index_cycles():
    assert [leg.next() for leg in LEGS] == [LegIndex.B, LegIndex.C, LegIndex.A]


@pytest.mark.parametrize("leg", LEGS)
@pytest.mark.parametrize("phi", [-0.4, 0.0, 0.3])
def test_rotation_chain(params, leg, phi):
    rots = leg_rotations(params, leg, phi)
    for name in ("q10", "q21", "q32", "q20", "q30"):
        assert is_rotation(getattr(rots, name))
    # the plane normal is the z axis of frame 2 and -x of frames 1 and 3
    assert_allclose(rots.q20.T @ U3, U3, atol=1e-15)
    assert_allclose(rots.q10.T @ U1, -U3, atol=1e-15)
    assert_allclose(rots.q30.T @ U1, -U3, atol=1e-15)
    # the platform axis of every leg lies at phi - pi/3 + alpha
    a3 = rots.q30.T @ U3
    angle = phi - math.pi / 3.0 + params.alpha[leg]
    assert_allclose(a3, (math.cos(angle), math.sin(angle), 0.0), atol=1e-15)


@pytest.mark.parametrize("leg", LEGS)
def test_central_rotation(params, leg):
    assert_allclose(central_rotation(params, leg), leg_rotations(params, leg, 0.0).q30, atol=1e-15)


@pytest.mark.parametrize("leg", LEGS)
def test_platform_inertia_about_frame_origin(params, leg):
    # centroidal m3*l^2/12 = 0.0675 plus m3*|r3G|^2 = 0.09, about the plane normal (-x of frame 3)
    J = params.origin_inertia(3, leg)
    assert J[0, 0] == pytest.approx(0.1575, abs=1e-12)
    assert_allclose(J, J.T)


def test_piston_and_link_inertias(params):
    for leg in LEGS:
        assert_allclose(params.origin_inertia(1, leg), np.zeros((3, 3)))
        assert_allclose(params.origin_inertia(2, leg), np.zeros((3, 3)))


def test_derived_geometry_follows_l0():
    params = standard_params(l0=0.2)
    assert_allclose(params.base_anchors[0], (0.0, -0.2, 0.0))
    assert_allclose(params.com3, params.platform_offset)
    assert params.J3[2, 2] == pytest.approx(3.0 * 0.12 / 12.0)


@pytest.mark.parametrize("overrides", [{"m1": -1.0}, {"l0": 0.0}, {"J2": [[1, 2, 0], [0, 1, 0], [0, 0, 1]]}])
def test_invalid_parameters(overrides):
    with pytest.raises(ConfigError):
        params_from_dict(overrides)


def test_unknown_parameter():
    with pytest.raises(ConfigError, match="mass4"):
        params_from_dict({"mass4": 1.0})


def test_with_gravity(params):
    turned = with_gravity(params, (9.81, 0.0, 0.0))
    assert_allclose(turned.gravity, (9.81, 0.0, 0.0))
    assert_allclose(turned.origin_inertia(3, 0), params.origin_inertia(3, 0))
