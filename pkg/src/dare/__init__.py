"""Round-based simulator of the DARE multi-hop body-area sensor network protocol."""

from .core import (
    ConfigurationError,
    Node,
    Packet,
    Position,
    Role,
    SensorKind,
    distance,
    nearest_sink,
)
from .energy import EnergyReport, RadioParams, UnknownExponentError, debit, rx_energy, tx_energy
from .engine import MetricsSnapshot, RunSummary, SimConfig, run, stability_period, throughput_pct
from .protocol import (
    HopOutcome,
    Network,
    ProtocolKind,
    aggregate_and_forward,
    run_baseline_round,
    run_patient_round,
)
from .scenario import Mobility, SinkSpec, WardScenario, build_scenario, sink_positions
from .vitals import DEFAULT_BANDS, Reading, SignalModel, ThresholdBand, sample, should_transmit

__version__ = "0.1.0"
