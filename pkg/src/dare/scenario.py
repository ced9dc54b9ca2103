"""Ward topologies for the five deployment scenarios and sink trajectories.

Scenario summary:

1. one static sink at the ward centre
2. four static sinks at the mid-points of the walls
3. one static sink at the centre plus a main sensor on every bed
4. one sink moving back and forth along the centre line
5. the four sinks of scenario 2 circling the walls together
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping, Optional, Sequence, Tuple

from .core import (
    PATIENTS,
    POLL_ORDER,
    WARD_HEIGHT,
    WARD_WIDTH,
    ConfigurationError,
    Position,
    SensorKind,
)

Offset = Tuple[float, float]

BED_ANCHORS = tuple(Position(x, y) for y in (5.0, 15.0) for x in (5.0, 15.0, 25.0, 35.0))
WALL_SINKS = (Position(0.0, 10.0), Position(20.0, 20.0), Position(40.0, 10.0), Position(20.0, 0.0))
CENTRE = Position(WARD_WIDTH / 2, WARD_HEIGHT / 2)

# Relative to the chest, where the relay sits.
SENSOR_OFFSETS: Tuple[Tuple[SensorKind, Offset], ...] = (
    (SensorKind.ECG, (0.4, 0.3)),  # chest
    (SensorKind.PULSE_RATE, (-0.6, 1.2)),  # right wrist
    (SensorKind.HEART_RATE, (0.3, -0.5)),  # left chest
    (SensorKind.TEMPERATURE, (1.5, 0.0)),  # forehead
    (SensorKind.GLUCOSE, (-0.6, -1.2)),  # left wrist
    (SensorKind.TOXINS, (-1.0, 0.0)),  # waist
    (SensorKind.MOTION, (-1.5, 0.4)),  # ankle
)
BR_OFFSET: Offset = (0.0, 0.0)
MS_OFFSET: Offset = (0.0, 2.0)  # bedside
DEFAULT_SPEED = 1.0


class Mobility(Enum):
    STATIC = "static"
    CENTER_LINE = "center_line"
    PERIMETER = "perimeter"


class Routing(Enum):
    SINGLE_SINK = "single"
    NEAREST_SINK = "nearest"
    MAIN_SENSOR = "main_sensor"


@dataclass(frozen=True)
class SinkSpec:
    initial: Position
    mobility: Mobility = Mobility.STATIC
    speed: float = 0.0
    wrap: bool = False  # center-line only: wrap at the wall instead of reflecting

    def __post_init__(self):
        if self.mobility is not Mobility.STATIC and not self.speed > 0:
            raise ConfigurationError(f"mobile sink needs speed > 0, got {self.speed}")


@dataclass(frozen=True)
class WardScenario:
    """A full ward topology.

    ``id`` is None for hand-built worlds that are not one of the five
    numbered scenarios; routing is then inferred from the structure.
    """

    id: Optional[int]
    beds: Tuple[Position, ...]
    sinks: Tuple[SinkSpec, ...]
    sensor_offsets: Tuple[Tuple[SensorKind, Offset], ...] = SENSOR_OFFSETS
    br_offset: Offset = BR_OFFSET
    uses_main_sensor: bool = False
    ms_offset: Offset = MS_OFFSET
    width: float = WARD_WIDTH
    height: float = WARD_HEIGHT

    def __post_init__(self):
        if not self.beds:
            raise ConfigurationError("a ward needs at least one bed")
        if not self.sinks:
            raise ConfigurationError("a ward needs at least one sink")
        kinds = [k for k, _ in self.sensor_offsets]
        if len(set(kinds)) != len(kinds):
            raise ConfigurationError("duplicate sensor kind in offsets")
        if kinds != sorted(kinds, key=POLL_ORDER.index):
            raise ConfigurationError("sensor offsets must follow the polling order")
        for bed in self.beds:
            for p in (self.relay_position(bed), *self.sensor_positions(bed).values()):
                if not p.in_ward(self.width, self.height):
                    raise ConfigurationError(f"body node at {p} falls outside the ward")
            if self.uses_main_sensor and not self.main_sensor_position(bed).in_ward(self.width, self.height):
                raise ConfigurationError(f"main sensor of bed {bed} falls outside the ward")
        for s in self.sinks:
            if not s.initial.in_ward(self.width, self.height):
                raise ConfigurationError(f"sink at {s.initial} falls outside the ward")
            if s.mobility is Mobility.PERIMETER:
                _arc_of(s.initial, self.width, self.height)

    @property
    def routing(self) -> Routing:
        if self.uses_main_sensor:
            return Routing.MAIN_SENSOR
        if len(self.sinks) > 1:
            return Routing.NEAREST_SINK
        return Routing.SINGLE_SINK

    @property
    def node_count(self) -> int:
        per_bed = len(self.sensor_offsets) + 1 + (1 if self.uses_main_sensor else 0)
        return per_bed * len(self.beds) + len(self.sinks)

    def relay_position(self, bed: Position) -> Position:
        return bed.offset(*self.br_offset)

    def sensor_positions(self, bed: Position) -> dict:
        return {k: bed.offset(*o) for k, o in self.sensor_offsets}

    def main_sensor_position(self, bed: Position) -> Position:
        return bed.offset(*self.ms_offset)


_LAYOUT_KEYS = {"beds", "offsets", "br_offset", "ms_offset", "sink_speed", "center_line_wrap"}


def build_scenario(id: int, overrides: Optional[Mapping] = None) -> WardScenario:
    """Instantiate scenario ``id`` (1-5), optionally with layout overrides.

    Recognised override keys: ``beds`` (list of [x, y]), ``offsets``
    (sensor kind name -> [dx, dy]), ``br_offset``, ``ms_offset``,
    ``sink_speed`` and ``center_line_wrap``.
    """
    if id not in (1, 2, 3, 4, 5):
        raise ConfigurationError(f"scenario must be 1..5, got {id!r}")
    ov = dict(overrides or {})
    unknown = set(ov) - _LAYOUT_KEYS
    if unknown:
        raise ConfigurationError(f"unknown layout keys: {sorted(unknown)}")

    beds = BED_ANCHORS
    if "beds" in ov:
        beds = tuple(Position(float(x), float(y)) for x, y in ov["beds"])
        if len(beds) != PATIENTS:
            raise ConfigurationError(f"layout must place {PATIENTS} beds, got {len(beds)}")
    offsets = dict(SENSOR_OFFSETS)
    for name, off in ov.get("offsets", {}).items():
        try:
            kind = SensorKind(name)
        except ValueError:
            raise ConfigurationError(f"unknown sensor kind {name!r}") from None
        offsets[kind] = _offset(off)
    speed = float(ov.get("sink_speed", DEFAULT_SPEED))
    wrap = bool(ov.get("center_line_wrap", False))

    if id in (1, 3):
        sinks = (SinkSpec(CENTRE),)
    elif id == 2:
        sinks = tuple(SinkSpec(p) for p in WALL_SINKS)
    elif id == 4:
        sinks = (SinkSpec(CENTRE, Mobility.CENTER_LINE, speed, wrap),)
    else:
        sinks = tuple(SinkSpec(p, Mobility.PERIMETER, speed) for p in WALL_SINKS)

    return WardScenario(
        id=id,
        beds=beds,
        sinks=sinks,
        sensor_offsets=tuple((k, offsets[k]) for k in POLL_ORDER),
        br_offset=_offset(ov.get("br_offset", BR_OFFSET)),
        uses_main_sensor=id == 3,
        ms_offset=_offset(ov.get("ms_offset", MS_OFFSET)),
    )


def _offset(value) -> Offset:
    try:
        dx, dy = value
        return float(dx), float(dy)
    except (TypeError, ValueError):
        raise ConfigurationError(f"offset must be a pair [dx, dy], got {value!r}") from None


def load_layout(path) -> dict:
    """Read a JSON layout-override document."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"malformed layout file {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigurationError(f"layout file {path} must hold a JSON object")
    return data


def sink_positions(scenario: WardScenario, round: int) -> list:
    """Sink positions after ``round`` elapsed rounds (round 0 is the start)."""
    if round < 0:
        raise ValueError(f"round must be >= 0, got {round}")
    return [sink_position(s, round, scenario.width, scenario.height) for s in scenario.sinks]


def sink_position(spec: SinkSpec, round: int, width: float = WARD_WIDTH, height: float = WARD_HEIGHT) -> Position:
    if spec.mobility is Mobility.STATIC:
        return spec.initial
    travel = spec.speed * round
    if spec.mobility is Mobility.CENTER_LINE:
        s = spec.initial.x + travel
        if spec.wrap:
            x = math.fmod(s, width)
        else:
            u = math.fmod(s, 2 * width)
            x = u if u <= width else 2 * width - u
        return Position(x, spec.initial.y)
    perimeter = 2 * (width + height)
    arc = math.fmod(_arc_of(spec.initial, width, height) + travel, perimeter)
    return _point_at(arc, width, height)


# Clockwise arc length from the origin corner: up the left wall, across the
# top, down the right wall, back along the bottom.
def _point_at(arc: float, width: float, height: float) -> Position:
    if arc <= height:
        return Position(0.0, arc)
    if arc <= height + width:
        return Position(arc - height, height)
    if arc <= 2 * height + width:
        return Position(width, 2 * height + width - arc)
    return Position(2 * (width + height) - arc, 0.0)


def _arc_of(p: Position, width: float, height: float) -> float:
    if p.x == 0.0 and 0.0 <= p.y <= height:
        return p.y
    if p.y == height and 0.0 <= p.x <= width:
        return height + p.x
    if p.x == width and 0.0 <= p.y <= height:
        return 2 * height + width - p.y
    if p.y == 0.0 and 0.0 <= p.x <= width:
        return math.fmod(2 * (width + height) - p.x, 2 * (width + height))
    raise ConfigurationError(f"perimeter sink must start on the ward boundary, got {p}")
