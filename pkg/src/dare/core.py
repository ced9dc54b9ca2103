"""Domain types and ward geometry shared by the rest of the package.

Coordinates are in feet in the ward frame: the ward spans ``0 <= x <= 40``
and ``0 <= y <= 20``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Union

WARD_WIDTH = 40.0
WARD_HEIGHT = 20.0
PACKET_BITS = 4000
PATIENTS = 8


class ConfigurationError(ValueError):
    """Raised for invalid scenario, layout, or run configuration."""


@dataclass(frozen=True)
class Position:
    x: float
    y: float

    def offset(self, dx: float, dy: float) -> "Position":
        return Position(self.x + dx, self.y + dy)

    def in_ward(self, width: float = WARD_WIDTH, height: float = WARD_HEIGHT) -> bool:
        return 0.0 <= self.x <= width and 0.0 <= self.y <= height


class SensorKind(Enum):
    # Declaration order is the polling order within a patient.
    ECG = "ecg"
    PULSE_RATE = "pulse_rate"
    HEART_RATE = "heart_rate"
    TEMPERATURE = "temperature"
    GLUCOSE = "glucose"
    TOXINS = "toxins"
    MOTION = "motion"

    @property
    def is_threshold(self) -> bool:
        """Temperature and glucose report only on threshold excursions."""
        return self in (SensorKind.TEMPERATURE, SensorKind.GLUCOSE)

    @property
    def index(self) -> int:
        return POLL_ORDER.index(self)


POLL_ORDER = tuple(SensorKind)
THRESHOLD_KINDS = tuple(k for k in POLL_ORDER if k.is_threshold)
CONTINUOUS_KINDS = tuple(k for k in POLL_ORDER if not k.is_threshold)

AGGREGATE = "aggregate"


class Role(Enum):
    BODY_SENSOR = "bs"
    BODY_RELAY = "br"
    MAIN_SENSOR = "ms"
    SINK = "sink"

    @property
    def unlimited(self) -> bool:
        return self in (Role.MAIN_SENSOR, Role.SINK)


@dataclass(eq=False)
class Node:
    """A network node. Main sensors and sinks never lose energy."""

    id: int
    role: Role
    position: Position
    energy: float = math.inf
    initial_energy: float = math.inf
    patient: Optional[int] = None
    kind: Optional[SensorKind] = None
    alive: bool = True

    def __post_init__(self):
        if self.role is Role.BODY_SENSOR and self.kind is None:
            raise ConfigurationError(f"body sensor {self.id} needs a sensor kind")
        if not self.role.unlimited and not 0.0 <= self.energy <= self.initial_energy:
            raise ConfigurationError(
                f"node {self.id}: energy {self.energy} outside [0, {self.initial_energy}]"
            )

    @property
    def unlimited(self) -> bool:
        return self.role.unlimited


@dataclass
class Packet:
    """A fixed-size data unit; ``hops`` records every node it traversed."""

    source: int
    origin_patient: Optional[int]
    round: int
    payload_kind: Union[SensorKind, str]
    size: int = PACKET_BITS
    hops: list = field(default_factory=list)
    fused: int = 1

    def __post_init__(self):
        if self.size <= 0:
            raise ValueError(f"packet size must be positive, got {self.size}")
        if not self.hops:
            self.hops = [self.source]
        elif self.hops[0] != self.source:
            raise ValueError("hop list must begin with the packet source")


def distance(a: Position, b: Position) -> float:
    """Euclidean distance between two ward positions, in feet."""
    return math.hypot(a.x - b.x, a.y - b.y)


def nearest_index(p: Position, positions: Sequence[Position]) -> int:
    """Index of the closest position; ties go to the lowest index."""
    if not positions:
        raise ConfigurationError("no sinks to choose from")
    best, best_d = 0, distance(p, positions[0])
    for i in range(1, len(positions)):
        d = distance(p, positions[i])
        if d < best_d:
            best, best_d = i, d
    return best


def nearest_sink(p: Position, sinks: Sequence[Node]) -> int:
    """Id of the sink closest to ``p`` (lowest list index wins a tie)."""
    if not sinks:
        raise ConfigurationError("no sinks to choose from")
    return sinks[nearest_index(p, [s.position for s in sinks])].id
