"""Per-round communication flow for DARE and the direct-to-sink baseline.

DARE, per patient: each live body sensor (fixed polling order) that has
something to report sends one packet to its body relay, provided the relay
is alive. The relay then fuses whatever it received into a single packet
and forwards it to the sink (scenarios 1/4), the nearest sink (2/5), or the
bed's main sensor which relays it on to the sink (3).

The baseline has no relays: each sensor sends its own packet straight to
the single central sink.

Every transmission attempt yields one :class:`HopOutcome`. An attempt that
fails because the sender or receiver runs out of energy is recorded with
``delivered=False`` and counts as a dropped packet.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Mapping, Optional

from .core import (
    AGGREGATE,
    PACKET_BITS,
    Node,
    Packet,
    Position,
    Role,
    SensorKind,
    distance,
    nearest_index,
)
from .energy import EnergyReport, RadioParams, debit, rx_energy, tx_energy
from .scenario import Routing, WardScenario, sink_positions
from .vitals import (
    DEFAULT_BANDS,
    DEFAULT_SIGNALS,
    SignalModel,
    ThresholdBand,
    VitalStream,
    should_transmit,
)


class ProtocolKind(Enum):
    DARE = "dare"
    BASELINE_DIRECT = "baseline-direct"


@dataclass
class HopOutcome:
    """Result of one transmission attempt.

    ``tx_cost``/``rx_cost`` are the energies actually debited from
    finite-energy nodes. ``hop_delay`` counts links traversed (0 if the
    attempt failed).
    """

    packet: Packet
    sender: int
    receiver: Optional[int]
    tx_cost: float
    rx_cost: float
    delivered: bool
    hop_delay: int
    to_sink: bool = False


class Network:
    """Mutable node state of one run, plus the run's fixed parameters."""

    def __init__(
        self,
        scenario: WardScenario,
        protocol: ProtocolKind = ProtocolKind.DARE,
        *,
        radio: Optional[RadioParams] = None,
        bands: Optional[Mapping[SensorKind, ThresholdBand]] = None,
        signals: Optional[Mapping[SensorKind, SignalModel]] = None,
        seed: int = 42,
        bs_energy: float = 0.3,
        br_energy: float = 1.0,
        packet_bits: int = PACKET_BITS,
        record: bool = False,
    ):
        self.scenario = scenario
        self.protocol = protocol
        self.radio = radio or RadioParams()
        self.bands = dict(DEFAULT_BANDS if bands is None else bands)
        self.signals = dict(DEFAULT_SIGNALS if signals is None else signals)
        self.seed = seed
        self.bits = packet_bits

        self.nodes: List[Node] = []
        self.sensors: List[List[Node]] = []
        self.relays: List[Optional[Node]] = []
        self.mains: List[Optional[Node]] = []
        self.sinks: List[Node] = []
        self.vitals: Dict[int, VitalStream] = {}

        with_relays = protocol is ProtocolKind.DARE
        for patient, bed in enumerate(scenario.beds):
            row = []
            for kind, pos in scenario.sensor_positions(bed).items():
                node = self._add(Role.BODY_SENSOR, pos, bs_energy, patient, kind)
                row.append(node)
                if kind.is_threshold:
                    self.vitals[node.id] = VitalStream(kind, patient, seed, self.signals[kind])
            self.sensors.append(row)
            self.relays.append(
                self._add(Role.BODY_RELAY, scenario.relay_position(bed), br_energy, patient)
                if with_relays
                else None
            )
            self.mains.append(
                self._add(Role.MAIN_SENSOR, scenario.main_sensor_position(bed), patient=patient)
                if with_relays and scenario.uses_main_sensor
                else None
            )
        for spec in scenario.sinks:
            self.sinks.append(self._add(Role.SINK, spec.initial))

        self.body_sensors = [n for row in self.sensors for n in row]
        self.finite = [n for n in self.nodes if not n.unlimited]
        self.alive_bs = len(self.body_sensors)
        self.alive_finite = len(self.finite)

        # Static links: sensor -> relay (DARE) or sensor -> sink (baseline),
        # and relay -> main sensor (scenario 3).
        self.link_cost: Dict[int, float] = {}
        for patient, row in enumerate(self.sensors):
            target = self.relays[patient] or self.sinks[0]
            for bs in row:
                self.link_cost[bs.id] = self.tx_cost(distance(bs.position, target.position))
            br, ms = self.relays[patient], self.mains[patient]
            if br is not None and ms is not None:
                self.link_cost[br.id] = self.tx_cost(distance(br.position, ms.position))
        self.rx_cost = rx_energy(self.radio, self.bits)

        self.energy_spent = 0.0
        self.reports: Optional[List[EnergyReport]] = [] if record else None
        self.deaths: List[tuple] = []

    def _add(self, role, pos, energy=float("inf"), patient=None, kind=None) -> Node:
        node = Node(len(self.nodes), role, pos, energy, energy, patient, kind)
        self.nodes.append(node)
        return node

    def tx_cost(self, d: float) -> float:
        return tx_energy(self.radio, self.bits, d)

    def move_sinks(self, elapsed: int) -> None:
        for node, pos in zip(self.sinks, sink_positions(self.scenario, elapsed)):
            node.position = pos

    def pay(self, node: Node, amount: float, round: int, rx: bool = False) -> bool:
        """Debit ``node``; on shortfall record its death and return False."""
        if node.unlimited:
            return True
        debit(node, amount)
        if not node.alive:
            self.deaths.append((round, node.id))
            self.alive_finite -= 1
            if node.role is Role.BODY_SENSOR:
                self.alive_bs -= 1
            return False
        self.energy_spent += amount
        if self.reports is not None:
            self.reports.append(
                EnergyReport(node.id, round, 0.0, amount) if rx else EnergyReport(node.id, round, amount, 0.0)
            )
        return True

    def wants_to_send(self, bs: Node, round: int) -> bool:
        if not bs.kind.is_threshold:
            return True
        reading = self.vitals[bs.id].reading(round - 1)
        return should_transmit(reading, self.bands[bs.kind])

    def can_act(self) -> bool:
        """False once no future round could change any state."""
        if self.protocol is ProtocolKind.DARE:
            return any(br.alive for br in self.relays)
        return self.alive_bs > 0

    def residual_bs(self) -> float:
        return sum(n.energy for n in self.body_sensors)

    def residual_total(self) -> float:
        return sum(n.energy for n in self.finite)


def run_patient_round(patient: int, net: Network, round: int) -> List[HopOutcome]:
    """Sensor-to-relay phase for one patient; sink positions must be current."""
    br = net.relays[patient]
    outcomes: List[HopOutcome] = []
    for bs in net.sensors[patient]:
        if not bs.alive:
            continue
        if not br.alive:
            break
        if not net.wants_to_send(bs, round):
            continue
        pkt = Packet(bs.id, patient, round, bs.kind, net.bits)
        cost = net.link_cost[bs.id]
        if not net.pay(bs, cost, round):
            outcomes.append(HopOutcome(pkt, bs.id, br.id, 0.0, 0.0, False, 0))
            continue
        if not net.pay(br, net.rx_cost, round, rx=True):
            outcomes.append(HopOutcome(pkt, bs.id, br.id, cost, 0.0, False, 0))
            break
        pkt.hops.append(br.id)
        outcomes.append(HopOutcome(pkt, bs.id, br.id, cost, net.rx_cost, True, 1))
    return outcomes


def aggregate_and_forward(patient: int, received: List[Packet], net: Network, round: int) -> Optional[HopOutcome]:
    """Fuse the relay's packets into one and forward it toward a sink."""
    br = net.relays[patient]
    if not received or not br.alive:
        return None
    agg = Packet(br.id, patient, round, AGGREGATE, net.bits, fused=len(received))
    routing = net.scenario.routing
    if routing is Routing.MAIN_SENSOR:
        ms = net.mains[patient]
        cost = net.link_cost[br.id]
        if not net.pay(br, cost, round):
            return HopOutcome(agg, br.id, ms.id, 0.0, 0.0, False, 0)
        # The main sensor's receive and onward hop draw on unlimited energy.
        sink = net.sinks[0]
        agg.hops += [ms.id, sink.id]
        return HopOutcome(agg, br.id, ms.id, cost, 0.0, True, 2, to_sink=True)

    if routing is Routing.NEAREST_SINK:
        sink = net.sinks[nearest_index(br.position, [s.position for s in net.sinks])]
    else:
        sink = net.sinks[0]
    cost = net.tx_cost(distance(br.position, sink.position))
    if not net.pay(br, cost, round):
        return HopOutcome(agg, br.id, sink.id, 0.0, 0.0, False, 0)
    agg.hops.append(sink.id)
    return HopOutcome(agg, br.id, sink.id, cost, 0.0, True, 1, to_sink=True)


def run_dare_round(net: Network, round: int) -> List[HopOutcome]:
    outcomes: List[HopOutcome] = []
    for patient in range(len(net.sensors)):
        if not net.relays[patient].alive:
            continue
        hops = run_patient_round(patient, net, round)
        outcomes += hops
        agg = aggregate_and_forward(patient, [h.packet for h in hops if h.delivered], net, round)
        if agg is not None:
            outcomes.append(agg)
    return outcomes


def run_baseline_round(net: Network, round: int) -> List[HopOutcome]:
    """Every live sensor with data sends directly to the central sink."""
    sink = net.sinks[0]
    outcomes: List[HopOutcome] = []
    for patient, row in enumerate(net.sensors):
        for bs in row:
            if not bs.alive or not net.wants_to_send(bs, round):
                continue
            pkt = Packet(bs.id, patient, round, bs.kind, net.bits)
            cost = net.link_cost[bs.id]
            if not net.pay(bs, cost, round):
                outcomes.append(HopOutcome(pkt, bs.id, sink.id, 0.0, 0.0, False, 0, to_sink=True))
                continue
            pkt.hops.append(sink.id)
            outcomes.append(HopOutcome(pkt, bs.id, sink.id, cost, 0.0, True, 1, to_sink=True))
    return outcomes
