"""The ten acceptance criteria, each reported as one PASS/FAIL line.

Criteria 5(b) and 7(a) are known to fail with the default geometry; see
README "Acceptance status". They are asserted as stated, not relaxed.
"""

import io
import time
from pathlib import Path
from statistics import mean

import numpy as np
import pytest

import conftest
from dare.cli import parse_config, run_matrix
from dare.core import Position, SensorKind
from dare.energy import RadioParams, rx_energy, tx_energy
from dare.engine import SimConfig, run
from dare.protocol import ProtocolKind
from dare.scenario import build_scenario, sink_positions
from dare.vitals import DEFAULT_BANDS, Reading, should_transmit

from oracle import rx as oracle_rx
from oracle import tx as oracle_tx
from test_oracle import cross_check

SEEDS = range(1, 11)
ROUNDS = 5000
KEYS = [1, 2, 3, 4, 5, "baseline"]
CALIBRATION = Path(__file__).resolve().parent.parent / "calibration" / "results.md"


def record(n, ok, detail):
    conftest.ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    assert ok, detail


def _config(key, seed, **kw):
    if key == "baseline":
        return SimConfig(protocol=ProtocolKind.BASELINE_DIRECT, rounds=ROUNDS, seed=seed, **kw)
    return SimConfig(scenario=key, rounds=ROUNDS, seed=seed, **kw)


@pytest.fixture(scope="module")
def matrix():
    t0 = time.perf_counter()
    runs = {(k, s): run(_config(k, s, record_events=True)) for k in KEYS for s in SEEDS}
    return runs, time.perf_counter() - t0


def _mean(runs, key, attr):
    return mean(getattr(runs[(key, s)], attr) for s in SEEDS)


def test_criterion_1_energy_arithmetic():
    P = RadioParams()
    d = np.random.default_rng(20240601).uniform(0.0, 45.0, 1000)
    t0 = time.perf_counter()
    scalar = [tx_energy(P, 4000, float(x), 3.38) for x in d]
    vector = tx_energy(P, 4000, d, 3.38)
    r = rx_energy(P, 4000)
    elapsed = time.perf_counter() - t0
    expected = np.array([oracle_tx(float(x)) for x in d])
    err = max(np.max(np.abs(np.array(scalar) - expected)), np.max(np.abs(vector - expected)))
    rx_err = abs(r - oracle_rx())
    ok = err <= 1e-9 and rx_err <= 1e-9 and elapsed < 1.0
    record(1, ok, f"max |tx err| {err:.2e} J, |rx err| {rx_err:.2e} J over 1000 d, {elapsed * 1e3:.1f} ms")


def test_criterion_2_table_anchor():
    P = RadioParams()
    t, r = tx_energy(P, 1, 0.0), rx_energy(P, 1)
    record(2, t == 16.7e-9 and r == 36.1e-9, f"tx(k=1, d=0) = {t!r} J, rx(k=1) = {r!r} J")


def test_criterion_3_threshold_sweep():
    wrong = []
    temp = DEFAULT_BANDS[SensorKind.TEMPERATURE]
    for i in range(71):
        v = round(34.0 + 0.1 * i, 1)
        if should_transmit(Reading(SensorKind.TEMPERATURE, v, 1), temp) != (v < 35.0 or v > 40.0):
            wrong.append(("temperature", v))
    gluc = DEFAULT_BANDS[SensorKind.GLUCOSE]
    for v in range(100, 136):
        if should_transmit(Reading(SensorKind.GLUCOSE, float(v), 1), gluc) != (v < 110 or v > 125):
            wrong.append(("glucose", v))
    record(3, not wrong, f"71 temperature + 36 glucose values, {len(wrong)} mismatches {wrong[:3]}")


def test_criterion_4_sink_geometry():
    want = [Position(0, 10), Position(20, 20), Position(40, 10), Position(20, 0)]
    got = {sid: [s.initial for s in build_scenario(sid).sinks] for sid in (2, 5)}
    at_start = sink_positions(build_scenario(5), 0)
    ok = got[2] == want and got[5] == want and at_start == want
    fmt = lambda ps: " ".join(f"({p.x:g},{p.y:g})" for p in ps)
    record(4, ok, f"scenario 2 sinks {fmt(got[2])}, scenario 5 sinks {fmt(got[5])}")


def test_criterion_5_lifetime_ordering(matrix):
    runs, elapsed = matrix
    worse = [
        (k, s)
        for k in KEYS[:5]
        for s in SEEDS
        if not runs[(k, s)].stability_period > runs[("baseline", s)].stability_period
    ]
    means = {k: _mean(runs, k, "stability_period") for k in KEYS}
    dare = {k: means[k] for k in KEYS[:5]}
    part_a = not worse
    part_b = max(dare, key=dare.get) == 5 and min(dare, key=dare.get) == 1
    ok = part_a and part_b and elapsed < 120
    table = ", ".join(f"S{k} {v:.1f}" if k != "baseline" else f"baseline {v:.1f}" for k, v in means.items())
    record(
        5,
        ok,
        f"(a) {'ok' if part_a else f'{len(worse)} seeds not above baseline'}; "
        f"(b) {'ok' if part_b else 'S5 largest and S1 smallest does not hold'}; "
        f"mean stability {table}; {elapsed:.1f} s",
    )


def test_criterion_6_calibration(matrix):
    runs, _ = matrix
    s1 = _mean(runs, 1, "stability_period")
    s5 = _mean(runs, 5, "stability_period")
    in1 = abs(s1 - 858) <= 0.4 * 858
    in5 = abs(s5 - 3300) <= 0.4 * 3300
    _write_calibration(runs, s1, s5, in1, in5)
    # Recorded, not gated: the line reports whether each target was met.
    record(
        6,
        True,
        f"recorded to calibration/results.md; S1 first death {s1:.1f} vs 858 +/-40% "
        f"({'met' if in1 else 'missed'}), S5 all-alive {s5:.1f} vs 3300 +/-40% ({'met' if in5 else 'missed'})",
    )


def _write_calibration(runs, s1, s5, in1, in5):
    lines = [
        "# Calibration results",
        "",
        f"Default layout, {ROUNDS} rounds, seeds {SEEDS.start}..{SEEDS.stop - 1}.",
        "Regenerated by `pytest tests/test_acceptance.py`.",
        "",
        "| target | reference | tolerance | achieved (mean) | within |",
        "|---|---|---|---|---|",
        f"| scenario 1 first-death round | 858 | +/-40% | {s1:.1f} | {'yes' if in1 else 'no'} |",
        f"| scenario 5 all-alive rounds | 3300 | +/-40% | {s5:.1f} | {'yes' if in5 else 'no'} |",
        "",
        "| run | mean stability | mean last death | mean lifetime | mean delivery % |",
        "|---|---|---|---|---|",
    ]
    for k in KEYS:
        name = "baseline-direct" if k == "baseline" else f"scenario {k}"
        lines.append(
            f"| {name} | {_mean(runs, k, 'stability_period'):.1f} | {_mean(runs, k, 'last_death_round'):.1f} "
            f"| {_mean(runs, k, 'lifetime'):.1f} | {_mean(runs, k, 'throughput_pct'):.3f} |"
        )
    lines += ["", "Per-seed stability period:", "", "| seed | " + " | ".join(map(str, KEYS)) + " |"]
    lines.append("|---" * (len(KEYS) + 1) + "|")
    for s in SEEDS:
        lines.append(f"| {s} | " + " | ".join(str(runs[(k, s)].stability_period) for k in KEYS) + " |")
    CALIBRATION.parent.mkdir(exist_ok=True)
    CALIBRATION.write_text("\n".join(lines) + "\n")


def test_criterion_7_throughput_ordering(matrix):
    runs, _ = matrix
    pdr = {k: _mean(runs, k, "throughput_pct") for k in KEYS}
    others = [k for k in KEYS if k != 5]
    part_a = all(pdr[5] > pdr[k] for k in others)
    part_b = pdr["baseline"] < pdr[1]
    table = ", ".join(f"{'S' + str(k) if k != 'baseline' else k} {v:.3f}" for k, v in pdr.items())
    record(
        7,
        part_a and part_b,
        f"(a) {'ok' if part_a else 'S5 not the highest'}; (b) {'ok' if part_b else 'baseline not below S1'}; "
        f"mean delivery % {table}",
    )


def test_criterion_8_determinism(tmp_path):
    args = ["--scenario", "1", "2", "3", "4", "5", "--protocol", "dare", "baseline-direct"]
    args += ["--seed", *map(str, SEEDS), "--rounds", str(ROUNDS)]
    for sub in ("first", "second"):
        status = run_matrix(parse_config(args + ["--out", str(tmp_path / sub)]), stream=io.StringIO())
        assert status == 0
    first = sorted(p.name for p in (tmp_path / "first").iterdir())
    second = sorted(p.name for p in (tmp_path / "second").iterdir())
    differ = [n for n in first if (tmp_path / "first" / n).read_bytes() != (tmp_path / "second" / n).read_bytes()]
    ok = first == second and len(first) == 2 * 6 * len(SEEDS) and not differ
    record(8, ok, f"{len(first)} files from two matrix invocations, {len(differ)} differ")


def test_criterion_9_ledger_closure(matrix):
    runs, _ = matrix
    worst = 0.0
    for summary in runs.values():
        reported = sum(r.total for r in summary.events.energy)
        worst = max(worst, abs((summary.initial_energy - summary.final_energy) - reported))
    record(9, worst <= 1e-6, f"{len(runs)} runs x {ROUNDS} rounds, worst |spent - reported| {worst:.2e} J")


def test_criterion_10_microworld_oracle():
    failures = cross_check(200)
    record(10, not failures, f"200 randomized MicroWorlds, {len(failures)} with discrepancies")
