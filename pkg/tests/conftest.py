import math

import numpy as np
import pytest

from prpsim.model import standard_params
from prpsim.structs import PlatformState


@pytest.fixture
def params():
    return standard_params()


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def random_pose(rng, moving=True):
    """A regular pose well inside the workspace, with random rates."""
    x, y = rng.uniform(-0.05, 0.05, 2)
    phi = rng.uniform(-math.pi / 6.0, math.pi / 6.0)
    if not moving:
        return PlatformState(float(x), float(y), float(phi))
    xd, yd = rng.uniform(-0.1, 0.1, 2)
    phid = rng.uniform(-0.5, 0.5)
    xdd, ydd = rng.uniform(-0.5, 0.5, 2)
    phidd = rng.uniform(-1.0, 1.0)
    return PlatformState(*(float(v) for v in (x, y, phi, xd, yd, phid, xdd, ydd, phidd)))
