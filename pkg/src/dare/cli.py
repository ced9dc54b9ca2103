"""Command-line front end: configuration, run matrix, CSV export."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .core import ConfigurationError, SensorKind
from .energy import RadioParams
from .engine import RunSummary, SimConfig, run
from .protocol import ProtocolKind
from .scenario import load_layout
from .vitals import DEFAULT_BANDS, DEFAULT_SIGNALS, ThresholdBand

CSV_HEADER = "round,alive_bs,alive_bs_br,residual_bs_j,residual_total_j,pkts_sent,pkts_rcvd,pkts_dropped,hop_delay"
DEFAULTS = {"scenario": [1], "protocol": ["dare"], "rounds": 5000, "seed": [42], "out": "results"}

_SIGNAL_FIELDS = ("mean", "step", "reversion", "excursion_prob", "clamp", "rest")
_RADIO_KEYS = {"e_tx_elec", "e_rx_elec", "e_amp", "path_loss_exponent"}
_BAND_KEYS = {f"{k.value}_{end}" for k in DEFAULT_BANDS for end in ("low", "high")}
_SIGNAL_KEYS = {f"{k.value}_{f}" for k in SensorKind for f in _SIGNAL_FIELDS}
_KNOWN_KEYS = (
    set(DEFAULTS) | {"layout", "bs_energy", "br_energy", "packet_bits"} | _RADIO_KEYS | _BAND_KEYS | _SIGNAL_KEYS
)


@dataclass
class RunManifest:
    configs: List[SimConfig]
    out: Path

    def __post_init__(self):
        if not self.configs:
            raise ConfigurationError("run manifest is empty")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dare-sim", description="Round-based DARE body-area network simulator.")
    p.add_argument("--scenario", type=int, nargs="+", metavar="N", help="scenario id(s), 1..5")
    p.add_argument("--protocol", nargs="+", choices=[k.value for k in ProtocolKind])
    p.add_argument("--rounds", type=int, metavar="N")
    p.add_argument("--seed", type=int, nargs="+", metavar="N")
    p.add_argument("--config", type=Path, metavar="PATH", help="JSON run configuration")
    p.add_argument("--out", type=Path, metavar="DIR")
    p.add_argument("--layout", type=Path, metavar="PATH", help="JSON layout overrides")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    return p


def load_config_file(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"config file {path} does not exist")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"malformed config file {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigurationError(f"config file {path} must hold a JSON object")
    unknown = set(data) - _KNOWN_KEYS
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    return data


def _as_list(value) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


def parse_config(argv: Optional[Sequence[str]] = None) -> RunManifest:
    """Build a run manifest. Flags override the config file; defaults fill in."""
    args = build_parser().parse_args(argv)
    settings = dict(DEFAULTS)
    file_data = load_config_file(args.config) if args.config is not None else {}
    settings.update(file_data)
    for key in ("scenario", "protocol", "rounds", "seed", "out", "layout"):
        value = getattr(args, key)
        if value is not None:
            settings[key] = value

    scenarios = _as_list(settings["scenario"])
    protocols = _as_list(settings["protocol"])
    seeds = _as_list(settings["seed"])
    for s in scenarios:
        if isinstance(s, bool) or s not in (1, 2, 3, 4, 5):
            raise ConfigurationError(f"scenario must be 1..5, got {s!r}")
    try:
        kinds = [ProtocolKind(p) for p in protocols]
    except ValueError as exc:
        raise ConfigurationError(f"protocol must be dare or baseline-direct: {exc}") from None
    explicit_scenario = args.scenario is not None or "scenario" in file_data
    if kinds == [ProtocolKind.BASELINE_DIRECT] * len(kinds) and explicit_scenario and 1 not in scenarios:
        raise ConfigurationError("baseline-direct runs on the single central sink of scenario 1")

    try:
        template = SimConfig(
            rounds=settings["rounds"],
            radio=_radio(settings),
            bands=_bands(settings),
            signals=_signals(settings),
            layout=load_layout(settings["layout"]) if settings.get("layout") else None,
            bs_energy=float(settings.get("bs_energy", 0.3)),
            br_energy=float(settings.get("br_energy", 1.0)),
            packet_bits=int(settings.get("packet_bits", 4000)),
        )
    except ConfigurationError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"invalid configuration value: {exc}") from None
    configs: List[SimConfig] = []
    for kind in dict.fromkeys(kinds):
        grid = sorted(set(scenarios)) if kind is ProtocolKind.DARE else [1]
        for sid in grid:
            for seed in dict.fromkeys(seeds):
                cfg = replace(template, scenario=sid, protocol=kind, seed=int(seed))
                cfg.validate()
                cfg.resolve_topology()
                configs.append(cfg)
    return RunManifest(configs, Path(settings["out"]))


def _radio(settings: dict) -> RadioParams:
    base = RadioParams()
    amp = base.amp_table
    if "e_amp" in settings:
        try:
            amp = {float(n): float(v) for n, v in settings["e_amp"].items()}
        except (AttributeError, ValueError):
            raise ConfigurationError("e_amp must map exponent -> J/bit") from None
    try:
        return RadioParams(
            e_tx_elec=float(settings.get("e_tx_elec", base.e_tx_elec)),
            e_rx_elec=float(settings.get("e_rx_elec", base.e_rx_elec)),
            amp_table=amp,
            default_n=float(settings.get("path_loss_exponent", base.default_n)),
        )
    except (ValueError, KeyError) as exc:
        raise ConfigurationError(f"invalid radio parameters: {exc}") from None


def _bands(settings: dict) -> Dict[SensorKind, ThresholdBand]:
    bands = {}
    for kind, band in DEFAULT_BANDS.items():
        low = float(settings.get(f"{kind.value}_low", band.low))
        high = float(settings.get(f"{kind.value}_high", band.high))
        bands[kind] = ThresholdBand(low, high)
    return bands


def _signals(settings: dict):
    signals = {}
    for kind, model in DEFAULT_SIGNALS.items():
        changes = {}
        for f in _SIGNAL_FIELDS:
            key = f"{kind.value}_{f}"
            if key in settings:
                v = settings[key]
                changes[f] = tuple(float(x) for x in v) if f in ("clamp", "rest") else float(v)
        signals[kind] = replace(model, **changes) if changes else model
    return signals


def _fmt(x) -> str:
    return str(x) if isinstance(x, int) else format(x, ".9g")


def export_csv(summary: RunSummary, path) -> Path:
    """Write the per-round series to ``path`` and a ``*_summary.csv`` sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [CSV_HEADER]
    for s in summary.series:
        row = (
            s.round,
            s.alive_bs,
            s.alive_bs_br,
            s.residual_bs_energy,
            s.residual_total_energy,
            s.packets_sent,
            s.packets_received,
            s.packets_dropped,
            s.total_hop_delay,
        )
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")

    cfg, last = summary.config, summary.final
    sidecar = [
        ("scenario", cfg.scenario),
        ("protocol", cfg.protocol.value),
        ("seed", cfg.seed),
        ("rounds", cfg.rounds),
        ("stability_period", summary.stability_period),
        ("last_death_round", summary.last_death_round),
        ("lifetime", summary.lifetime),
        ("throughput_pct", f"{summary.throughput_pct:.1f}"),
        ("packets_sent", last.packets_sent),
        ("packets_received", last.packets_received),
        ("packets_dropped", last.packets_dropped),
        ("packets_at_sink", last.packets_at_sink),
        ("energy_spent_j", _fmt(summary.initial_energy - summary.final_energy)),
        ("energy_reported_j", _fmt(summary.energy_reported)),
    ]
    side = summary_path(path)
    side.write_text("".join(f"{k},{v}\n" for k, v in sidecar))
    return path


def summary_path(csv_path) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.stem + "_summary.csv")


def _run_and_export(cfg: SimConfig, out: Path):
    summary = run(cfg)
    export_csv(summary, out / f"{cfg.label}.csv")
    return cfg.label, summary.stability_period, summary.lifetime, summary.throughput_pct


def run_matrix(manifest: RunManifest, jobs: int = 1, stream=None) -> int:
    """Execute every run, export its CSV pair, print a comparison table."""
    stream = sys.stdout if stream is None else stream
    manifest.out.mkdir(parents=True, exist_ok=True)
    rows, failed = [], 0
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_and_export, c, manifest.out) for c in manifest.configs]
            results = []
            for cfg, fut in zip(manifest.configs, futures):
                try:
                    results.append(fut.result())
                except Exception as exc:  # keep the other runs going
                    failed += 1
                    print(f"run {cfg.label} failed: {exc}", file=sys.stderr)
            rows = results
    else:
        for cfg in manifest.configs:
            try:
                rows.append(_run_and_export(cfg, manifest.out))
            except Exception as exc:
                failed += 1
                print(f"run {cfg.label} failed: {exc}", file=sys.stderr)

    width = max([len("run")] + [len(r[0]) for r in rows])
    print(f"{'run':<{width}}  {'stability':>9}  {'lifetime':>8}  {'throughput%':>11}", file=stream)
    for label, stab, life, pdr in rows:
        print(f"{label:<{width}}  {stab:>9}  {life:>8}  {pdr:>11.1f}", file=stream)
    return 1 if failed else 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        manifest = parse_config(argv)
        jobs = build_parser().parse_args(argv).jobs
    except ConfigurationError as exc:
        print(f"dare-sim: configuration error: {exc}", file=sys.stderr)
        return 2
    return run_matrix(manifest, jobs=jobs)


if __name__ == "__main__":
    sys.exit(main())
