import io
import json

import pytest

from dare.cli import (
    CSV_HEADER,
    RunManifest,
    export_csv,
    load_config_file,
    main,
    parse_config,
    run_matrix,
    summary_path,
)
from dare.core import ConfigurationError, SensorKind
from dare.engine import SimConfig, run
from dare.protocol import ProtocolKind


def _write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return p


def test_defaults():
    m = parse_config([])
    assert len(m.configs) == 1
    c = m.configs[0]
    assert (c.scenario, c.protocol, c.rounds, c.seed) == (1, ProtocolKind.DARE, 5000, 42)
    assert str(m.out) == "results"


def test_flags_map_directly():
    m = parse_config(["--scenario", "5", "--protocol", "dare", "--rounds", "5000", "--seed", "7"])
    assert len(m.configs) == 1
    c = m.configs[0]
    assert (c.scenario, c.protocol, c.rounds, c.seed) == (5, ProtocolKind.DARE, 5000, 7)


def test_unknown_scenario():
    with pytest.raises(ConfigurationError, match="scenario must be 1..5"):
        parse_config(["--scenario", "9"])


def test_flag_overrides_file(tmp_path):
    cfg = _write(tmp_path, "run.json", {"rounds": 5000, "seed": 3})
    m = parse_config(["--config", str(cfg), "--rounds", "100"])
    assert m.configs[0].rounds == 100
    assert m.configs[0].seed == 3


def test_file_radio_and_band_keys(tmp_path):
    cfg = _write(tmp_path, "run.json", {"e_tx_elec": 2e-8, "temperature_low": 34.5, "glucose_excursion_prob": 0.0})
    c = parse_config(["--config", str(cfg)]).configs[0]
    assert c.radio.e_tx_elec == 2e-8
    assert c.bands[SensorKind.TEMPERATURE].low == 34.5
    assert c.signals[SensorKind.GLUCOSE].excursion_prob == 0.0


@pytest.mark.parametrize("body", ["{not json", "[1, 2]"])
def test_malformed_file(tmp_path, body):
    cfg = _write(tmp_path, "bad.json", body)
    with pytest.raises(ConfigurationError):
        parse_config(["--config", str(cfg)])


def test_missing_file(tmp_path):
    with pytest.raises(ConfigurationError, match="does not exist"):
        load_config_file(tmp_path / "nope.json")


def test_unknown_key(tmp_path):
    cfg = _write(tmp_path, "run.json", {"roundz": 10})
    with pytest.raises(ConfigurationError, match="unknown config keys"):
        parse_config(["--config", str(cfg)])


def test_contradictory_flags():
    with pytest.raises(ConfigurationError, match="baseline-direct"):
        parse_config(["--scenario", "3", "--protocol", "baseline-direct"])


def test_bad_protocol_and_rounds():
    with pytest.raises(ConfigurationError):
        parse_config(["--protocol", "leach"])
    with pytest.raises(ConfigurationError):
        parse_config(["--rounds", "0"])


def test_grid_expansion():
    m = parse_config(["--scenario", "1", "2", "3", "--protocol", "dare", "baseline-direct", "--seed", "1", "2"])
    labels = [c.label for c in m.configs]
    assert len(labels) == 3 * 2 + 2
    assert "s1_baseline-direct_seed2" in labels
    assert not any(l.startswith("s2_baseline") for l in labels)


def test_export_csv_rows_and_sidecar(tmp_path):
    summary = run(SimConfig(scenario=1, rounds=5000, seed=1))
    out = tmp_path / "new" / "dir" / "run.csv"
    export_csv(summary, out)
    lines = out.read_text().splitlines()
    assert len(lines) == 5001
    assert lines[0] == CSV_HEADER
    side = dict(l.split(",", 1) for l in summary_path(out).read_text().splitlines())
    assert side["stability_period"] == str(summary.stability_period)
    assert side["lifetime"] == str(summary.lifetime)
    assert side["throughput_pct"] == f"{summary.throughput_pct:.1f}"


def test_sidecar_formats_one_decimal(tmp_path):
    summary = run(SimConfig(rounds=3))
    summary.throughput_pct = 91.0
    export_csv(summary, tmp_path / "x.csv")
    assert "throughput_pct,91.0\n" in summary_path(tmp_path / "x.csv").read_text()


def test_csv_rows_are_self_checking(tmp_path):
    export_csv(run(SimConfig(scenario=4, rounds=600, seed=2)), tmp_path / "r.csv")
    rows = [l.split(",") for l in (tmp_path / "r.csv").read_text().splitlines()[1:]]
    prev = None
    for r in rows:
        sent, rcvd, drop = int(r[5]), int(r[6]), int(r[7])
        assert sent == rcvd + drop
        if prev:
            assert int(r[1]) <= int(prev[1]) and int(r[2]) <= int(prev[2])
            assert float(r[3]) <= float(prev[3]) and float(r[4]) <= float(prev[4])
            assert sent >= int(prev[5]) and int(r[8]) >= int(prev[8])
        prev = r


def test_run_matrix_five_scenarios(tmp_path):
    m = parse_config(["--scenario", "1", "2", "3", "4", "5", "--rounds", "50", "--out", str(tmp_path)])
    buf = io.StringIO()
    assert run_matrix(m, stream=buf) == 0
    assert len(list(tmp_path.glob("*_summary.csv"))) == 5
    assert len(list(tmp_path.glob("*.csv"))) == 10
    table = buf.getvalue().splitlines()
    assert len(table) == 1 + 5


def test_run_matrix_includes_baseline(tmp_path):
    m = parse_config(["--protocol", "dare", "baseline-direct", "--rounds", "20", "--out", str(tmp_path)])
    buf = io.StringIO()
    run_matrix(m, stream=buf)
    assert any(line.startswith("s1_baseline-direct_seed42") for line in buf.getvalue().splitlines())
    assert (tmp_path / "s1_baseline-direct_seed42.csv").is_file()


def test_empty_manifest(tmp_path):
    with pytest.raises(ConfigurationError):
        RunManifest([], tmp_path)


def test_failed_run_gives_nonzero_but_others_finish(tmp_path):
    bad = SimConfig(rounds=10)
    bad.rounds = -1
    m = RunManifest([SimConfig(rounds=10, seed=1), bad, SimConfig(rounds=10, seed=2)], tmp_path)
    assert run_matrix(m, stream=io.StringIO()) == 1
    assert (tmp_path / "s1_dare_seed1.csv").is_file()
    assert (tmp_path / "s1_dare_seed2.csv").is_file()


def test_repeat_invocations_byte_identical(tmp_path):
    args = ["--scenario", "2", "5", "--rounds", "300", "--seed", "4"]
    for sub, jobs in (("a", 1), ("b", 2)):
        run_matrix(parse_config(args + ["--out", str(tmp_path / sub)]), jobs=jobs, stream=io.StringIO())
    for f in sorted((tmp_path / "a").iterdir()):
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_main_exit_codes(tmp_path, capsys):
    assert main(["--scenario", "9"]) == 2
    assert "scenario must be 1..5" in capsys.readouterr().err
    assert main(["--rounds", "5", "--out", str(tmp_path)]) == 0


def test_layout_flag(tmp_path):
    lay = _write(tmp_path, "layout.json", {"ms_offset": [0, 3]})
    c = parse_config(["--scenario", "3", "--layout", str(lay)]).configs[0]
    assert c.resolve_topology().ms_offset == (0.0, 3.0)
