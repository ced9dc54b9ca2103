"""Round loop and lifetime / delivery metrics.

Packet counters are per transmission attempt: a body-sensor packet, a relay
aggregate and a baseline sensor packet each count once in ``packets_sent``.
An attempt is received if its intended receiver (relay or sink) got it, and
dropped otherwise, so ``sent == received + dropped`` after every round.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Mapping, Optional

from .core import ConfigurationError, PACKET_BITS, SensorKind
from .energy import EnergyReport, RadioParams
from .protocol import HopOutcome, Network, ProtocolKind, run_baseline_round, run_dare_round
from .scenario import WardScenario, build_scenario
from .vitals import DEFAULT_BANDS, DEFAULT_SIGNALS, SignalModel, ThresholdBand


@dataclass
class SimConfig:
    scenario: int = 1
    protocol: ProtocolKind = ProtocolKind.DARE
    rounds: int = 5000
    seed: int = 42
    radio: RadioParams = field(default_factory=RadioParams)
    bands: Mapping[SensorKind, ThresholdBand] = field(default_factory=lambda: dict(DEFAULT_BANDS))
    signals: Mapping[SensorKind, SignalModel] = field(default_factory=lambda: dict(DEFAULT_SIGNALS))
    layout: Optional[Mapping] = None
    bs_energy: float = 0.3
    br_energy: float = 1.0
    packet_bits: int = PACKET_BITS
    # A prebuilt topology takes precedence over ``scenario``/``layout``.
    topology: Optional[WardScenario] = None
    record_events: bool = False

    def validate(self) -> None:
        if isinstance(self.rounds, bool) or not isinstance(self.rounds, int) or self.rounds <= 0:
            raise ConfigurationError(f"rounds must be a positive integer, got {self.rounds!r}")
        if self.topology is None and self.scenario not in (1, 2, 3, 4, 5):
            raise ConfigurationError(f"scenario must be 1..5, got {self.scenario!r}")
        if not isinstance(self.protocol, ProtocolKind):
            raise ConfigurationError(f"unknown protocol {self.protocol!r}")
        if self.bs_energy <= 0 or self.br_energy <= 0:
            raise ConfigurationError("initial energies must be positive")
        if self.packet_bits <= 0:
            raise ConfigurationError("packet size must be positive")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError(f"seed must fit in 64 unsigned bits, got {self.seed}")

    @property
    def label(self) -> str:
        return f"s{self.scenario}_{self.protocol.value}_seed{self.seed}"

    def resolve_topology(self) -> WardScenario:
        if self.topology is not None:
            return self.topology
        # The baseline always uses the single central sink of scenario 1.
        sid = 1 if self.protocol is ProtocolKind.BASELINE_DIRECT else self.scenario
        return build_scenario(sid, self.layout)


@dataclass(frozen=True)
class MetricsSnapshot:
    round: int
    alive_bs: int
    alive_bs_br: int
    residual_bs_energy: float
    residual_total_energy: float
    packets_sent: int
    packets_received: int
    packets_dropped: int
    total_hop_delay: int
    packets_at_sink: int = 0


@dataclass
class EventLog:
    hops: List[HopOutcome] = field(default_factory=list)
    deaths: List[tuple] = field(default_factory=list)
    energy: List[EnergyReport] = field(default_factory=list)


@dataclass
class RunSummary:
    config: SimConfig
    stability_period: int
    last_death_round: int
    lifetime: int
    throughput_pct: float
    series: List[MetricsSnapshot]
    initial_energy: float
    final_energy: float
    energy_reported: float
    initial_alive: int
    events: Optional[EventLog] = None

    @property
    def unstable_period(self) -> int:
        """Rounds from the first death to the end of the network's life."""
        return max(self.lifetime - self.stability_period, 0)

    @property
    def final(self) -> MetricsSnapshot:
        return self.series[-1]


def throughput_pct(received: int, sent: int) -> float:
    """Packet delivery ratio in percent; 0 when nothing was sent."""
    if sent < 0 or received < 0:
        raise ValueError("packet counts must be non-negative")
    if received > sent:
        raise ValueError(f"received {received} exceeds sent {sent}")
    if sent == 0:
        return 0.0
    return 100.0 * received / sent


def stability_period(series: List[MetricsSnapshot], initial: int = 64) -> int:
    """First round whose snapshot shows fewer than ``initial`` live nodes."""
    if not series:
        raise ValueError("empty snapshot series")
    for snap in series:
        if snap.alive_bs_br < initial:
            return snap.round
    return series[-1].round


def lifetime(series: List[MetricsSnapshot]) -> int:
    """Last round ending with at least one live body sensor (0 if none)."""
    last = 0
    for snap in series:
        if snap.alive_bs > 0:
            last = snap.round
    return last


def run(config: SimConfig) -> RunSummary:
    """Simulate ``config.rounds`` rounds and collect per-round metrics.

    Once no relay (DARE) or sensor (baseline) is left that could act, the
    state is frozen and the remaining snapshots repeat the last one.
    """
    config.validate()
    topology = config.resolve_topology()
    net = Network(
        topology,
        config.protocol,
        radio=config.radio,
        bands=config.bands,
        signals=config.signals,
        seed=config.seed,
        bs_energy=config.bs_energy,
        br_energy=config.br_energy,
        packet_bits=config.packet_bits,
        record=config.record_events,
    )
    log = EventLog() if config.record_events else None
    step = run_dare_round if config.protocol is ProtocolKind.DARE else run_baseline_round
    mobile = any(s.mobility.value != "static" for s in topology.sinks)

    initial_energy = net.residual_total()
    initial_alive = net.alive_finite
    sent = received = dropped = at_sink = delay = 0
    series: List[MetricsSnapshot] = []
    for r in range(1, config.rounds + 1):
        if not net.can_act():
            frozen = series[-1] if series else _snapshot(net, 0, 0, 0, 0, 0, 0)
            series += [replace(frozen, round=t) for t in range(r, config.rounds + 1)]
            break
        if mobile:
            net.move_sinks(r - 1)
        outcomes = step(net, r)
        for h in outcomes:
            sent += 1
            if h.delivered:
                received += 1
                delay += h.hop_delay
                at_sink += h.to_sink
            else:
                dropped += 1
        if log is not None:
            log.hops += outcomes
        series.append(_snapshot(net, r, sent, received, dropped, delay, at_sink))

    if log is not None:
        log.deaths = list(net.deaths)
        log.energy = net.reports
    death_rounds = [r for r, _ in net.deaths]
    final = series[-1]
    return RunSummary(
        config=config,
        stability_period=stability_period(series, initial_alive),
        last_death_round=max(death_rounds) if death_rounds else config.rounds,
        lifetime=lifetime(series),
        throughput_pct=throughput_pct(final.packets_received, final.packets_sent),
        series=series,
        initial_energy=initial_energy,
        final_energy=net.residual_total(),
        energy_reported=net.energy_spent,
        initial_alive=initial_alive,
        events=log,
    )


def _snapshot(net: Network, r, sent, received, dropped, delay, at_sink) -> MetricsSnapshot:
    return MetricsSnapshot(
        round=r,
        alive_bs=net.alive_bs,
        alive_bs_br=net.alive_finite,
        residual_bs_energy=net.residual_bs(),
        residual_total_energy=net.residual_total(),
        packets_sent=sent,
        packets_received=received,
        packets_dropped=dropped,
        total_hop_delay=delay,
        packets_at_sink=at_sink,
    )
