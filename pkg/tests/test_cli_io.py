"""
Command line, run configuration and file formats.
"""

import importlib
import json
import math
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner
from pydantic import ValidationError

import squeeze_config
from main import cli
from services.storage import (
    CsvFormatError,
    RunConfig,
    StreamFormatError,
    build_header,
    encode_header,
    load_run_config,
    parse_run_config,
    read_calibration_pairs,
    read_gain_points,
    read_stream,
    read_stream_csv,
    read_table,
    write_gain_points,
    write_stream,
    write_stream_csv,
    write_table,
    with_overrides,
)
from services.dopa import DopaModel, GainPoint, effective_gains

CONFIGS_DIR = Path(__file__).resolve().parent.parent / "configs"


def write_config(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def small_config(tmp_path, n_pulses=20_000, **sections):
    data = {
        "dopa": {"p_pump_mw": 1.0, "target_g_amp": 2.51, "target_g_deamp": 0.53},
        "scan": {"n_pulses": n_pulses, "block_size": 500, "seed": 7, "chunk_size": 4096},
    }
    data.update(sections)
    return write_config(tmp_path / "config.json", data)


@pytest.fixture
def runner():
    return CliRunner()


# ════════════════════════════════════════════════════════════════
# RUN CONFIG
# ════════════════════════════════════════════════════════════════

def test_defaults_apply_for_missing_keys():
    config = parse_run_config({})
    assert config.detection.eta_t == 0.92
    assert config.scan.block_size == 2500
    assert config.output.stream_name == "stream.sqzp"


def test_unknown_keys_rejected():
    with pytest.raises(ValidationError):
        parse_run_config({"dopa": {"kapa": 0.5}})
    with pytest.raises(ValidationError):
        parse_run_config({"extra_section": {}})


def test_zero_pulses_rejected():
    with pytest.raises(ValidationError):
        parse_run_config({"scan": {"n_pulses": 0}})


def test_target_gains_resolve_into_kappa_and_mu():
    config = parse_run_config({"dopa": {"p_pump_mw": 4.0, "target_g_amp": 2.51, "target_g_deamp": 0.53}})
    g_amp, g_deamp = effective_gains(config.dopa.to_model())
    assert g_amp == pytest.approx(2.51)
    assert g_deamp == pytest.approx(0.53)
    assert config.dopa.kappa_per_sqrt_mw == pytest.approx(0.5 * math.log(2.51) / 2.0)


def test_target_gains_must_come_in_pairs():
    with pytest.raises(ValidationError):
        parse_run_config({"dopa": {"target_g_amp": 2.51}})


def test_resolved_config_echo_parses_back_equal():
    config = parse_run_config({"dopa": {"target_g_amp": 2.51, "target_g_deamp": 0.53}, "scan": {"seed": 3}})
    assert parse_run_config(json.loads(json.dumps(config.to_dict()))) == config


def test_explicit_kappa_must_agree_with_target_gains():
    with pytest.raises(ValidationError, match="conflicts with target gains"):
        parse_run_config({"dopa": {"kappa_per_sqrt_mw": 0.9, "target_g_amp": 2.51, "target_g_deamp": 0.53}})
    with pytest.raises(ValidationError, match="conflicts with target gains"):
        parse_run_config({"dopa": {"mu_gid": 0.5, "target_g_amp": 2.51, "target_g_deamp": 0.53}})
    resolved = parse_run_config({"dopa": {"target_g_amp": 2.51, "target_g_deamp": 0.53}}).dopa
    agreeing = parse_run_config({"dopa": {
        "kappa_per_sqrt_mw": resolved.kappa_per_sqrt_mw,
        "target_g_amp": 2.51,
        "target_g_deamp": 0.53,
    }})
    assert agreeing.dopa.kappa_per_sqrt_mw == resolved.kappa_per_sqrt_mw
    assert agreeing.dopa.mu_gid == resolved.mu_gid


def test_chunk_size_ignores_the_environment(monkeypatch):
    monkeypatch.setenv("SQZ_CHUNK_SIZE", "1000")
    try:
        importlib.reload(squeeze_config)
        assert squeeze_config.CHUNK_SIZE == 65536
    finally:
        monkeypatch.undo()
        importlib.reload(squeeze_config)
    assert parse_run_config({}).scan.chunk_size == 65536


@pytest.mark.parametrize("name,g_amp,g_deamp", [
    ("measured_operating_point.json", squeeze_config.MEASURED_G_AMP, squeeze_config.MEASURED_G_DEAMP),
    ("best_operating_point.json", squeeze_config.MEASURED_BEST_G_AMP, squeeze_config.MEASURED_BEST_G_DEAMP),
])
def test_shipped_operating_points_reproduce_measured_gains(name, g_amp, g_deamp):
    config = load_run_config(CONFIGS_DIR / name)
    assert effective_gains(config.dopa.to_model()) == pytest.approx((g_amp, g_deamp))


def test_load_run_config_reports_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ValueError):
        load_run_config(path)


# ════════════════════════════════════════════════════════════════
# PULSE STREAM FORMAT
# ════════════════════════════════════════════════════════════════

def stream_fixture(n=257):
    rng = np.random.default_rng(0)
    phases = np.linspace(0.0, 2 * math.pi, n)
    values = rng.standard_normal(n) * 1e3
    header = build_header(RunConfig(), n_pulses=n, snl_raw=1.0)
    return header, phases, values


def test_binary_round_trip_is_bit_exact(tmp_path):
    header, phases, values = stream_fixture()
    path = write_stream(tmp_path / "s.sqzp", header, phases, values)
    stream = read_stream(path)
    assert np.array_equal(stream.phases, phases)
    assert np.array_equal(stream.values, values)
    assert stream.header_text == encode_header(header).decode("utf-8")
    assert stream.run_config == RunConfig()
    assert stream.snl_raw == 1.0


def test_binary_layout(tmp_path):
    header, phases, values = stream_fixture(3)
    data = write_stream(tmp_path / "s.sqzp", header, phases, values).read_bytes()
    assert data[:4] == b"SQZP"
    assert int.from_bytes(data[4:6], "little") == 1
    header_len = int.from_bytes(data[6:10], "little")
    assert len(data) == 10 + header_len + 3 * 16
    assert np.frombuffer(data[-8:], "<f8")[0] == values[-1]


def test_bad_magic_named(tmp_path):
    header, phases, values = stream_fixture()
    path = write_stream(tmp_path / "s.sqzp", header, phases, values)
    data = bytearray(path.read_bytes())
    data[:4] = b"XXXX"
    path.write_bytes(bytes(data))
    with pytest.raises(StreamFormatError, match="magic"):
        read_stream(path)


def test_truncated_stream_reports_offset(tmp_path):
    header, phases, values = stream_fixture()
    path = write_stream(tmp_path / "s.sqzp", header, phases, values)
    data = path.read_bytes()
    path.write_bytes(data[:-20])
    with pytest.raises(StreamFormatError, match=f"byte offset {len(data) - 20}"):
        read_stream(path)


def test_unknown_version_rejected(tmp_path):
    header, phases, values = stream_fixture()
    path = write_stream(tmp_path / "s.sqzp", header, phases, values)
    data = bytearray(path.read_bytes())
    data[4:6] = (9).to_bytes(2, "little")
    path.write_bytes(bytes(data))
    with pytest.raises(StreamFormatError, match="version"):
        read_stream(path)


def test_declared_count_must_match(tmp_path):
    header, phases, values = stream_fixture()
    with pytest.raises(ValueError):
        write_stream(tmp_path / "s.sqzp", dict(header, n_pulses=10), phases, values)


@pytest.mark.parametrize("run_config", [None, {"scan": {"pulses": 10}}, {"scan": {"n_pulses": 0}}])
def test_header_must_echo_a_valid_run_config(tmp_path, run_config):
    header, phases, values = stream_fixture()
    if run_config is None:
        del header["run_config"]
    else:
        header["run_config"] = run_config
    path = write_stream(tmp_path / "s.sqzp", header, phases, values)
    with pytest.raises(StreamFormatError, match="run_config"):
        read_stream(path)
    twin = write_stream_csv(tmp_path / "s.csv", header, phases, values)
    with pytest.raises(StreamFormatError, match="run_config"):
        read_stream_csv(twin)


def test_csv_twin_round_trip(tmp_path):
    header, phases, values = stream_fixture()
    path = write_stream_csv(tmp_path / "s.csv", header, phases, values)
    stream = read_stream_csv(path)
    assert np.array_equal(stream.phases, phases)
    assert np.array_equal(stream.values, values)
    assert path.read_text().splitlines()[0] == "index,phase,value"


# ════════════════════════════════════════════════════════════════
# CSV TABLES
# ════════════════════════════════════════════════════════════════

def test_table_floats_survive_17_digits(tmp_path):
    rows = [(0.1, 1 / 3), (math.pi, 1e-300)]
    path = write_table(tmp_path / "t.csv", ("a", "b"), rows)
    assert read_table(path, ("a", "b")) == rows


def test_gain_points_round_trip(tmp_path):
    points = [GainPoint(p_pump=0.1, g_amp=1.4, g_deamp=0.7, weight=2.0)]
    path = write_gain_points(tmp_path / "gains.csv", points)
    assert read_gain_points(path) == points


def test_gain_weight_column_is_optional(tmp_path):
    path = tmp_path / "gains.csv"
    path.write_text("p_pump_mw,g_amp,g_deamp\n0.1,1.4,0.7\n", encoding="utf-8")
    assert read_gain_points(path)[0].weight == 1.0


def test_malformed_row_reports_line(tmp_path):
    path = tmp_path / "gains.csv"
    path.write_text("p_pump_mw,g_amp,g_deamp\n0.1,1.4,0.7\n0.2,abc,0.6\n", encoding="utf-8")
    with pytest.raises(CsvFormatError, match=":3:"):
        read_gain_points(path)


def test_wrong_header_rejected(tmp_path):
    path = tmp_path / "pairs.csv"
    path.write_text("lo,var\n1e8,0.4\n", encoding="utf-8")
    with pytest.raises(CsvFormatError, match=":1:"):
        read_calibration_pairs(path)


def test_field_count_checked(tmp_path):
    path = tmp_path / "pairs.csv"
    path.write_text("n_lo,variance\n1e8,0.4,7\n", encoding="utf-8")
    with pytest.raises(CsvFormatError, match=":2:"):
        read_calibration_pairs(path)


# ════════════════════════════════════════════════════════════════
# SIMULATE
# ════════════════════════════════════════════════════════════════

def test_simulate_is_byte_identical(runner, tmp_path):
    config = small_config(tmp_path)
    out = tmp_path / "run"
    first = runner.invoke(cli, ["--config", config, "--out-dir", str(out), "simulate"])
    assert first.exit_code == 0, first.output
    data = (out / "stream.sqzp").read_bytes()

    second = runner.invoke(cli, ["--config", config, "--out-dir", str(out), "simulate", "--workers", "3"])
    assert second.exit_code == 0, second.output
    assert (out / "stream.sqzp").read_bytes() == data


def test_simulate_header_echoes_config(runner, tmp_path):
    config = small_config(tmp_path)
    out = tmp_path / "run"
    result = runner.invoke(cli, ["--config", config, "--out-dir", str(out), "--seed", "99", "simulate"])
    assert result.exit_code == 0, result.output
    stream = read_stream(out / "stream.sqzp")
    expected = with_overrides(load_run_config(config), seed=99, out_dir=str(out))
    assert stream.run_config == expected
    assert stream.n_pulses == 20_000
    assert "PCG64" in stream.header["rng"]


def test_seed_changes_stream(runner, tmp_path):
    config = small_config(tmp_path)
    runner.invoke(cli, ["--config", config, "--out-dir", str(tmp_path / "a"), "--seed", "1", "simulate"])
    runner.invoke(cli, ["--config", config, "--out-dir", str(tmp_path / "b"), "--seed", "2", "simulate"])
    assert not np.array_equal(
        read_stream(tmp_path / "a" / "stream.sqzp").values,
        read_stream(tmp_path / "b" / "stream.sqzp").values,
    )


def test_zero_pulses_is_usage_error(runner, tmp_path):
    config = small_config(tmp_path, n_pulses=0)
    result = runner.invoke(cli, ["--config", config, "--out-dir", str(tmp_path), "simulate"])
    assert result.exit_code == 2


def test_unknown_config_key_is_usage_error(runner, tmp_path):
    config = write_config(tmp_path / "c.json", {"scan": {"pulses": 10}})
    result = runner.invoke(cli, ["--config", config, "simulate"])
    assert result.exit_code == 2
    assert "scan.pulses" in result.output


# ════════════════════════════════════════════════════════════════
# ANALYZE
# ════════════════════════════════════════════════════════════════

def test_analyze_measured_operating_point(runner, tmp_path):
    config = write_config(tmp_path / "c.json", {
        "dopa": {"p_pump_mw": 1.0, "target_g_amp": 2.51, "target_g_deamp": 0.53},
        "detection": {"v_elec_snu": 0.0073},
        "scan": {"n_pulses": 1_000_000, "seed": 2004},
    })
    out = tmp_path / "run"
    assert runner.invoke(cli, ["--config", config, "--out-dir", str(out), "simulate"]).exit_code == 0
    result = runner.invoke(cli, ["analyze", str(out / "stream.sqzp")])
    assert result.exit_code == 0, result.output

    document = json.loads((out / "report.json").read_text())
    report = document["report"]
    assert report["method"] == "sinusoid_fit"
    assert report["v_min_db"] == pytest.approx(-1.87, abs=0.06)
    assert report["v_max_db"] == pytest.approx(3.32, abs=0.06)
    assert report["v_min_db_err"] < 0.06
    assert report["inferred_from_gains"][0] == pytest.approx(-1.92, abs=0.01)
    for window in ("min", "max"):
        assert document["distributions"][window]["n_samples"] > 1_000
        assert document["distributions"][window]["fit"]["passes_ks"] is True
    assert parse_run_config(document["run_config"]).scan.n_pulses == 1_000_000

    trace = (out / "trace.csv").read_text().splitlines()
    assert trace[0] == "block_index,phase_mid,variance_snu,stderr_snu"
    assert len(trace) == 1 + 400
    assert (out / "hist_min.csv").read_text().splitlines()[0] == "edge,count,model"


def test_analyze_vacuum_run_is_shot_noise(runner, tmp_path):
    config = write_config(tmp_path / "c.json", {
        "dopa": {"kappa_per_sqrt_mw": 0.0, "p_pump_mw": 0.0},
        "detection": {"v_elec_snu": 0.0},
        "scan": {"n_pulses": 1_000_000, "seed": 5},
    })
    out = tmp_path / "run"
    assert runner.invoke(cli, ["--config", config, "--out-dir", str(out), "simulate"]).exit_code == 0
    assert runner.invoke(cli, ["analyze", str(out / "stream.sqzp")]).exit_code == 0
    report = json.loads((out / "report.json").read_text())["report"]
    assert abs(report["v_min_db"]) < 0.06
    assert abs(report["v_max_db"]) < 0.06


def test_analyze_is_deterministic_and_reads_csv_twin(runner, tmp_path):
    config = small_config(tmp_path)
    out = tmp_path / "run"
    result = runner.invoke(cli, ["--config", config, "--out-dir", str(out), "--format", "csv", "simulate"])
    assert result.exit_code == 0, result.output
    stream = out / "stream.csv"
    assert stream.exists()

    first = runner.invoke(cli, ["--out-dir", str(tmp_path / "a1"), "analyze", str(stream), "--pulses-csv", "100"])
    second = runner.invoke(cli, ["--out-dir", str(tmp_path / "a2"), "analyze", str(stream), "--pulses-csv", "100"])
    assert first.exit_code == 0, first.output
    assert second.exit_code == 0, second.output
    for name in ("trace.csv", "hist_min.csv", "hist_max.csv", "report.json", "pulses.csv"):
        assert (tmp_path / "a1" / name).read_bytes() == (tmp_path / "a2" / name).read_bytes()
    assert len((tmp_path / "a1" / "pulses.csv").read_text().splitlines()) == 1 + 200


def test_analyze_corrupted_magic_is_data_error(runner, tmp_path):
    config = small_config(tmp_path)
    out = tmp_path / "run"
    runner.invoke(cli, ["--config", config, "--out-dir", str(out), "simulate"])
    path = out / "stream.sqzp"
    path.write_bytes(b"JUNK" + path.read_bytes()[4:])
    result = runner.invoke(cli, ["analyze", str(path)])
    assert result.exit_code == 3
    assert "magic" in result.output


@pytest.mark.parametrize("run_config", [None, {"dopa": {"kapa": 0.5}}])
def test_analyze_bad_run_config_echo_is_data_error(runner, tmp_path, run_config):
    header, phases, values = stream_fixture(1_000)
    if run_config is None:
        del header["run_config"]
    else:
        header["run_config"] = run_config
    path = write_stream(tmp_path / "s.sqzp", header, phases, values)
    result = runner.invoke(cli, ["--out-dir", str(tmp_path / "out"), "analyze", str(path), "--block-size", "100"])
    assert result.exit_code == 3
    assert "run_config" in result.output


def test_analyze_without_calibration_fails(runner, tmp_path):
    header, phases, values = stream_fixture(1_000)
    header["snl_raw"] = None
    path = write_stream(tmp_path / "raw.sqzp", header, phases, values)
    result = runner.invoke(cli, ["analyze", str(path)])
    assert result.exit_code == 3
    assert "calibration" in result.output

    result = runner.invoke(cli, ["analyze", str(path), "--snl", "1e6", "--block-size", "100"])
    assert result.exit_code == 0, result.output


# ════════════════════════════════════════════════════════════════
# FIT-GAIN
# ════════════════════════════════════════════════════════════════

def gain_csv(tmp_path, powers, kappa=0.7, mu=0.03):
    points = []
    for p in powers:
        g_amp, g_deamp = effective_gains(DopaModel(kappa=kappa, p_pump=p, mu_gid=mu))
        points.append(GainPoint(p_pump=p, g_amp=g_amp, g_deamp=g_deamp))
    return str(write_gain_points(tmp_path / "gains.csv", points))


def test_fit_gain_writes_model_curve(runner, tmp_path):
    path = gain_csv(tmp_path, [0.1, 0.2, 0.3, 0.5, 0.8, 1.0])
    result = runner.invoke(cli, ["--out-dir", str(tmp_path / "fit"), "fit-gain", path, "--fit-mu"])
    assert result.exit_code == 0, result.output
    summary = json.loads((tmp_path / "fit" / "gain_fit.json").read_text())
    assert summary["fit"]["kappa"] == pytest.approx(0.7, rel=1e-4)
    assert summary["fit"]["mu_gid"] == pytest.approx(0.03, abs=1e-4)
    assert summary["gain_product_at_max_pump"] > 1.0
    curve = (tmp_path / "fit" / "model_curve.csv").read_text().splitlines()
    assert curve[0] == "p_pump_mw,g_amp_model,g_deamp_model,inv_g_deamp_model"


def test_fit_gain_filter_count_reported(runner, tmp_path):
    path = gain_csv(tmp_path, [0.1, 0.2, 0.3, 0.5, 0.8, 1.0], mu=0.0)
    result = runner.invoke(cli, ["--out-dir", str(tmp_path / "fit"), "fit-gain", path, "--max-pump-mw", "0.5"])
    assert result.exit_code == 0, result.output
    assert "4 used, 2 filtered" in result.output


def test_fit_gain_single_row_underdetermined(runner, tmp_path):
    path = gain_csv(tmp_path, [0.3])
    result = runner.invoke(cli, ["--out-dir", str(tmp_path), "fit-gain", path, "--fit-mu"])
    assert result.exit_code == 3
    assert "underdetermined" in result.output


def test_fit_gain_malformed_row(runner, tmp_path):
    path = tmp_path / "gains.csv"
    path.write_text("p_pump_mw,g_amp,g_deamp\n0.1,1.4,0.7\n0.2,1.6\n", encoding="utf-8")
    result = runner.invoke(cli, ["--out-dir", str(tmp_path), "fit-gain", str(path)])
    assert result.exit_code == 3
    assert ":3:" in result.output


# ════════════════════════════════════════════════════════════════
# INFER
# ════════════════════════════════════════════════════════════════

def test_infer_measured_gains(runner):
    result = runner.invoke(cli, [
        "infer", "--g-amp", "2.51", "--g-deamp", "0.53",
        "--eta-t", "0.92", "--eta-h", "0.935", "--eta-d", "0.945",
    ])
    assert result.exit_code == 0, result.output
    assert "η = 0.760" in result.output
    assert "-1.92" in result.output
    assert "+3.32" in result.output


def test_infer_unit_gains(runner):
    result = runner.invoke(cli, ["infer", "--g-amp", "1", "--g-deamp", "1"])
    assert result.exit_code == 0, result.output
    assert "squeezed      +0.00" in result.output
    assert "anti-squeezed +0.00" in result.output


def test_infer_plane_wave_check(runner):
    result = runner.invoke(cli, ["infer", "--g-amp", "2.0", "--g-deamp", "1.2", "--plane-wave-check"])
    assert result.exit_code == 0, result.output
    assert "deamplification gain exceeds unity" in result.output


def test_infer_efficiency_cross_check(runner):
    result = runner.invoke(cli, [
        "infer", "--g-amp", "2.51", "--g-deamp", "0.53", "--measured-db", "-1.87", "--v-elec", "0.0073",
    ])
    assert result.exit_code == 0, result.output
    assert "η implied by -1.87 dB measured: 0.760" in result.output


def test_infer_rejects_bad_efficiency(runner):
    result = runner.invoke(cli, ["infer", "--g-amp", "2.51", "--g-deamp", "0.53", "--eta-t", "1.5"])
    assert result.exit_code == 2


# ════════════════════════════════════════════════════════════════
# CALIBRATE
# ════════════════════════════════════════════════════════════════

def test_calibrate_simulated_scan_is_linear(runner, tmp_path):
    result = runner.invoke(cli, [
        "--out-dir", str(tmp_path), "calibrate",
        "--levels", "5e7,1e8,1.5e8,2e8", "--pulses-per-level", "100000",
    ])
    assert result.exit_code == 0, result.output
    report = json.loads((tmp_path / "calibration.json").read_text())
    assert report["calibration"]["r_squared"] > 0.999
    assert report["passed"] is True


def test_calibrate_electronic_noise_bound(runner, tmp_path):
    config = write_config(tmp_path / "c.json", {"detection": {"v_elec_snu": 0.0794}})
    result = runner.invoke(cli, [
        "--config", config, "--out-dir", str(tmp_path), "calibrate",
        "--levels", "1e7,5e7,1e8,2.5e8", "--pulses-per-level", "1000000",
    ])
    assert result.exit_code == 0, result.output
    report = json.loads((tmp_path / "calibration.json").read_text())
    assert report["calibration"]["shot_to_elec_db"] == pytest.approx(11.0, abs=0.3)


def test_calibrate_exact_pairs(runner, tmp_path):
    pairs = tmp_path / "pairs.csv"
    pairs.write_text("n_lo,variance\n5e7,0.25\n1e8,0.45\n2e8,0.85\n", encoding="utf-8")
    result = runner.invoke(cli, ["--out-dir", str(tmp_path), "calibrate", "--pairs", str(pairs)])
    assert result.exit_code == 0, result.output
    cal = json.loads((tmp_path / "calibration.json").read_text())["calibration"]
    assert cal["r_squared"] == pytest.approx(1.0)
    assert cal["intercept"] == pytest.approx(0.05)


def test_calibrate_single_level_needs_no_intercept(runner, tmp_path):
    pairs = tmp_path / "pairs.csv"
    pairs.write_text("n_lo,variance\n1e8,0.4\n", encoding="utf-8")
    result = runner.invoke(cli, ["--out-dir", str(tmp_path), "calibrate", "--pairs", str(pairs)])
    assert result.exit_code == 3
    assert "degenerate" in result.output

    result = runner.invoke(cli, ["--out-dir", str(tmp_path), "calibrate", "--pairs", str(pairs), "--no-intercept"])
    assert result.exit_code == 0, result.output


def test_calibrate_from_vacuum_streams(runner, tmp_path):
    paths = []
    for k, n_lo in enumerate((1e8, 2e8)):
        config = write_config(tmp_path / f"c{k}.json", {
            "dopa": {"kappa_per_sqrt_mw": 0.0},
            "detection": {"n_lo_photons": n_lo, "gain_raw": math.sqrt(n_lo / 1e8), "v_elec_snu": 0.0},
            "scan": {"n_pulses": 50_000},
        })
        out = tmp_path / f"level{k}"
        assert runner.invoke(cli, ["--config", config, "--out-dir", str(out), "simulate"]).exit_code == 0
        paths.append(str(out / "stream.sqzp"))
    result = runner.invoke(cli, ["--out-dir", str(tmp_path), "calibrate", *paths])
    assert result.exit_code == 0, result.output
    assert "2 levels" in result.output


def test_calibrate_warns_above_ceiling(runner, tmp_path):
    pairs = tmp_path / "pairs.csv"
    pairs.write_text("n_lo,variance\n1e8,0.4\n3e8,1.2\n", encoding="utf-8")
    result = runner.invoke(cli, ["--out-dir", str(tmp_path), "calibrate", "--pairs", str(pairs)])
    assert result.exit_code == 0, result.output
    assert "linearity ceiling" in result.output


def test_calibrate_needs_one_source(runner, tmp_path):
    result = runner.invoke(cli, ["--out-dir", str(tmp_path), "calibrate"])
    assert result.exit_code == 2
