import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Tuple

import numpy as np

from .constants import LAW_RAISED_COSINE

POSE_FIELDS = ("x", "y", "phi", "xd", "yd", "phid", "xdd", "ydd", "phidd")


@dataclass(frozen=True)
class PlatformState:
    x: float = 0.0
    y: float = 0.0
    phi: float = 0.0
    xd: float = 0.0
    yd: float = 0.0
    phid: float = 0.0
    xdd: float = 0.0
    ydd: float = 0.0
    phidd: float = 0.0

    def __post_init__(self):
        bad = [f"{name} = {value!r}" for name, value in zip(POSE_FIELDS, self.as_tuple())
               if not math.isfinite(value)]
        if bad:
            raise ValueError(f"platform state must be finite: {', '.join(bad)}")

    def position(self):
        return np.array((self.x, self.y, 0.0))

    def velocity(self):
        return np.array((self.xd, self.yd, 0.0))

    def acceleration(self):
        return np.array((self.xdd, self.ydd, 0.0))

    def at_rest(self):
        return PlatformState(self.x, self.y, self.phi)

    def as_tuple(self):
        return (self.x, self.y, self.phi, self.xd, self.yd, self.phid,
                self.xdd, self.ydd, self.phidd)


@dataclass(frozen=True)
class LegSolution:
    lambda10: float
    lambda32: float
    phi21: float
    lambda10d: float = 0.0
    lambda32d: float = 0.0
    phi21d: float = 0.0
    lambda10dd: float = 0.0
    lambda32dd: float = 0.0
    phi21dd: float = 0.0


@dataclass(frozen=True)
class LinkState:
    # every vector is in link-frame coordinates except origin (base frame)
    rotation: np.ndarray
    omega: np.ndarray
    epsilon: np.ndarray
    vel: np.ndarray
    acc: np.ndarray
    origin: np.ndarray


@dataclass(frozen=True)
class VirtualMotion:
    label: str
    kind: str  # "actuator", "y" or "z"
    leg: int
    platform_twist: Tuple[float, float, float]
    v10: Tuple[float, float, float]
    omega21: Tuple[float, float, float]
    v32: Tuple[float, float, float]
    v21y: Tuple[float, float, float]
    v21z: Tuple[float, float, float]


@dataclass(frozen=True)
class Wrench:
    force: np.ndarray
    moment: np.ndarray
    frame: Tuple[int, int]  # (leg, link); link 0 is the base frame

    def __add__(self, other):
        if other.frame != self.frame:
            raise ValueError(f"cannot add wrenches in frames {self.frame} and {other.frame}")
        return Wrench(self.force + other.force, self.moment + other.moment, self.frame)

    def __neg__(self):
        return Wrench(-self.force, -self.moment, self.frame)


@dataclass(frozen=True)
class LegForces:
    f10: float
    f21y: float
    f21z: float
    p10: float


@dataclass(frozen=True)
class DynamicsResult:
    t: float
    pose: PlatformState
    legs: Tuple[LegForces, LegForces, LegForces]

    @property
    def sum_power(self):
        return sum(leg.p10 for leg in self.legs)


@dataclass(frozen=True)
class EnergyReport:
    T: float
    V: float
    dEdt: float
    sum_power: float

    @property
    def E(self):
        return self.T + self.V

    @property
    def balance_residual(self):
        return self.sum_power - self.dEdt


@dataclass(frozen=True)
class LegReactions:
    actuator: float
    base_normal: float
    base_moment: float
    revolute: Tuple[float, float]  # base-frame components of the force of link 1 on link 2
    f21y: float
    f21z: float
    platform_normal: float
    platform_moment: float


@dataclass(frozen=True)
class ConstraintSolution:
    legs: Tuple[LegReactions, LegReactions, LegReactions]
    residual: float
    condition: float


@dataclass(frozen=True)
class Scenario:
    name: str
    x_amp: float = 0.0
    y_amp: float = 0.0
    phi_amp: float = 0.0
    duration: float = 3.0
    sample_dt: float = 0.01
    law: str = LAW_RAISED_COSINE

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x_amp, self.y_amp, self.phi_amp, self.duration)):
            raise ValueError(f"scenario {self.name}: amplitudes and duration must be finite")
        if not self.duration > 0.0:
            raise ValueError(f"scenario {self.name}: duration must be > 0, got {self.duration}")
        if not self.sample_dt > 0.0:
            raise ValueError(f"scenario {self.name}: sample_dt must be > 0, got {self.sample_dt}")


@dataclass(frozen=True)
class Sample:
    t: float
    pose: PlatformState
    legs: Tuple[LegSolution, LegSolution, LegSolution]
    dynamics: DynamicsResult
    energy: EnergyReport
    ne_residual: float = 0.0
    constraint: Optional[ConstraintSolution] = None


@dataclass
class BenchReport:
    n: int
    recursive_seconds: float = 0.0
    dense_seconds: float = 0.0
    recursive_mean: float = 0.0
    dense_mean: float = 0.0
    recursive_flops: int = 0
    dense_flops: int = 0
    max_disagreement: float = 0.0
    flop_ledger: dict = field(default_factory=dict)

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class TimeSeries:
    scenario: Scenario
    samples: Tuple[Sample, ...]

    def times(self):
        return np.array([s.t for s in self.samples])

    def __len__(self):
        return len(self.samples)
