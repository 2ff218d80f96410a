import json
import os
import re
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from linetransient import files
from linetransient.cli import main, parse_phases, CliError

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
PEAK = str(CONFIGS / "reference_peak.json")
ZERO = str(CONFIGS / "reference_zero.json")


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write_config(tmp_path, **change):
    cfg = json.loads(Path(PEAK).read_text())
    cfg.update(change)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return path


@pytest.fixture(scope="module")
def peak_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("sim") / "peak.csv"
    assert main(["simulate", "--config", PEAK, "--out", str(path)]) == 0
    return path


@pytest.fixture(scope="module")
def zero_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("sim") / "zero.csv"
    assert main(["simulate", "--config", ZERO, "--out", str(path)]) == 0
    return path


def test_tf_output(capsys, tmp_path):
    code, out, _ = run(["tf", "--config", PEAK, "--out", tmp_path / "tf.json"], capsys)
    assert code == 0
    assert "205.06 Hz" in out
    assert "numerator:   [1, 0.12]" in out
    assert "denominator: [5000.5, 0.0851, 0.003012]" in out
    vg = float(re.search(r"Vg_peak: (\d+) V", out).group(1))
    assert abs(vg - 281691) <= 1
    doc = json.loads((tmp_path / "tf.json").read_text())
    assert doc["omega_n_hz"] == pytest.approx(205.0687, abs=1e-3)
    assert doc["zeta"] == pytest.approx(0.0109639, abs=1e-6)


def test_tf_bad_config_names_key(capsys, tmp_path):
    code, out, err = run(["tf", "--config", write_config(tmp_path, r1_ohm=-1)], capsys)
    assert code == 2
    assert "r1_ohm" in err


def test_missing_config_file(capsys, tmp_path):
    code, _, err = run(["tf", "--config", tmp_path / "nope.json"], capsys)
    assert code == 2


def test_simulate_csv(peak_csv):
    lines = peak_csv.read_text().split("\n")
    assert lines[0] == "t,i,vc,vs,vg"
    assert lines[-1] == ""
    assert len(lines) - 2 == 5001
    _, cols = files.read_csv(peak_csv)
    assert cols["t"][-1] == pytest.approx(0.5)
    assert 9.9e3 <= cols["i"].max() <= 1.21e4


def test_simulate_deterministic(peak_csv, tmp_path):
    again = tmp_path / "again.csv"
    assert main(["simulate", "--config", PEAK, "--out", str(again)]) == 0
    assert again.read_bytes() == peak_csv.read_bytes()


def test_simulate_unwritable(capsys, tmp_path):
    code, _, err = run(["simulate", "--config", PEAK, "--out", tmp_path / "missing" / "x.csv"], capsys)
    assert code == 3
    assert not (tmp_path / "missing").exists()


def test_simulate_bad_dt(capsys, tmp_path):
    code, _, err = run(["simulate", "--config", write_config(tmp_path, dt_s=1e-3), "--out", tmp_path / "x.csv"], capsys)
    assert code == 2 and "dt_s" in err
    assert not (tmp_path / "x.csv").exists()


def test_simulate_numeric_failure(capsys, tmp_path, monkeypatch):
    from linetransient import cli, sim

    def boom(*a, **k):
        raise sim.NumericalError(0.3)

    monkeypatch.setattr(cli, "simulate", boom)
    code, _, err = run(["simulate", "--config", PEAK, "--out", tmp_path / "x.csv"], capsys)
    assert code == 4 and "0.3" in err
    assert not (tmp_path / "x.csv").exists()


def test_spectrum(capsys, peak_csv, tmp_path):
    out_csv = tmp_path / "spec.csv"
    code, out, _ = run(["spectrum", peak_csv, "--channel", "i", "--out", out_csv], capsys)
    assert code == 0
    dom = float(re.search(r"dominant: ([\d.]+) Hz", out).group(1))
    sec = float(re.search(r"secondary: ([\d.]+) Hz", out).group(1))
    assert abs(dom - 60) <= 1.23
    assert 195 <= sec <= 215
    header, cols = files.read_csv(out_csv)
    assert header == ["freq_hz", "magnitude"]
    assert cols["freq_hz"].size == 4097


def test_spectrum_synthetic_sine(capsys, tmp_path):
    t = np.arange(5001) * 1e-4
    vg = 1000 * np.sin(2 * np.pi * 60 * t)
    src = tmp_path / "sine.csv"
    src.write_text(files.format_csv(["t", "i", "vc", "vs", "vg"], [t, vg, 0 * t, vg, vg]))
    code, out, _ = run(["spectrum", src, "--channel", "i", "--out", tmp_path / "s.csv"], capsys)
    assert code == 0
    dom = float(re.search(r"dominant: [\d.]+ Hz, magnitude ([\d.e+]+)", out).group(1))
    sec = float(re.search(r"secondary: [\d.]+ Hz, magnitude ([\d.e+-]+)", out).group(1))
    assert sec < 0.05 * dom


def test_spectrum_truncated_input(capsys, peak_csv, tmp_path):
    data = peak_csv.read_bytes()
    bad = tmp_path / "trunc.csv"
    bad.write_bytes(data[: len(data) // 2])
    code, _, err = run(["spectrum", bad, "--out", tmp_path / "s.csv"], capsys)
    assert code == 5
    n_lines = data[: len(data) // 2].count(b"\n") + 1
    assert f"line {n_lines}" in err
    assert not (tmp_path / "s.csv").exists()


def test_spectrum_ragged_row(capsys, tmp_path):
    bad = tmp_path / "rag.csv"
    bad.write_text("t,i,vc,vs,vg\n0.0,0,0,0,0\n0.0001,1,2\n")
    code, _, err = run(["spectrum", bad, "--out", tmp_path / "s.csv"], capsys)
    assert code == 5 and "line 3" in err


def test_spectrum_unknown_channel(capsys, peak_csv, tmp_path):
    code, _, _ = run(["spectrum", peak_csv, "--channel", "x", "--out", tmp_path / "s.csv"], capsys)
    assert code == 2


def test_analyze_peak(capsys, peak_csv, tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    report = tmp_path / "r.json"
    code, out, _ = run(["analyze", peak_csv, "--config", PEAK, "--out", report], capsys)
    assert code == 0
    doc = json.loads(report.read_text())
    assert 1.7 <= doc["overvoltage_ratio"] <= 2.1
    assert 195 <= doc["ripple_frequency"] <= 215
    assert doc["scenario"] == "peak"
    jsonschema.validate(doc, files.report_schema())


def test_analyze_zero(capsys, zero_csv, tmp_path):
    report = tmp_path / "r.json"
    assert run(["analyze", zero_csv, "--config", ZERO, "--out", report], capsys)[0] == 0
    doc = json.loads(report.read_text())
    assert 4.5e3 <= doc["peak_current"] <= 5.5e3
    assert doc["ripple_cycles_counted"] >= 8


def test_analyze_missing_columns(capsys, tmp_path):
    src = tmp_path / "x.csv"
    t = np.arange(5001) * 1e-4
    src.write_text(files.format_csv(["t", "i"], [t, np.sin(t)]))
    code, _, _ = run(["analyze", src, "--config", PEAK, "--out", tmp_path / "r.json"], capsys)
    assert code == 5


def test_parse_phases():
    assert parse_phases("0:180:90") == [0.0, 90.0]
    assert len(parse_phases("0:360:10")) == 36
    for bad in ("0:0:10", "10:0:5", "0:90", "0:90:0", "-10:90:10", "0:400:10", "a:b:c"):
        with pytest.raises(CliError) as err:
            parse_phases(bad)
        assert err.value.code == 2


def test_sweep_two_points(capsys, tmp_path):
    out_csv = tmp_path / "sweep.csv"
    code, _, _ = run(["sweep", "--config", PEAK, "--phases", "0:180:90", "--out", out_csv], capsys)
    assert code == 0
    header, cols = files.read_csv(out_csv)
    assert header == ["switch_phase_deg", "peak_current", "overvoltage_ratio", "secondary_magnitude"]
    assert cols["switch_phase_deg"].tolist() == [0.0, 90.0]
    ratio = cols["peak_current"][1] / cols["peak_current"][0]
    assert 1.8 <= ratio <= 2.6


def test_sweep_full_grid(capsys, tmp_path):
    out_csv = tmp_path / "sweep.csv"
    assert run(["sweep", "--config", PEAK, "--phases", "0:360:10", "--out", out_csv, "--workers", "4"], capsys)[0] == 0
    _, cols = files.read_csv(out_csv)
    best = cols["switch_phase_deg"][np.argmax(cols["peak_current"])]
    assert best in (90.0, 270.0)
    serial = tmp_path / "serial.csv"
    assert run(["sweep", "--config", PEAK, "--phases", "0:360:10", "--out", serial, "--workers", "1"], capsys)[0] == 0
    assert serial.read_bytes() == out_csv.read_bytes()


def test_sweep_empty_grid(capsys, tmp_path):
    code, _, _ = run(["sweep", "--config", PEAK, "--phases", "0:0:10", "--out", tmp_path / "s.csv"], capsys)
    assert code == 2
    assert not (tmp_path / "s.csv").exists()


def polyline_points(svg):
    lines = re.findall(r'<polyline[^>]*points="([^"]*)"', svg)
    return [np.array([[float(v) for v in p.split(",")] for p in line.split()]) for line in lines]


def plot_area(svg):
    m = re.search(r'<g id="plot-area"([^>]*)>', svg).group(1)
    return {k: float(v) for k, v in re.findall(r'data-([a-z-]+)="([^"]*)"', m)}


def test_plot_vs(capsys, peak_csv, tmp_path):
    svg_path = tmp_path / "fig3.svg"
    code, _, _ = run(["plot", peak_csv, "--channel", "vs", "--t-start", 0.24, "--t-end", 0.32, "--out", svg_path], capsys)
    assert code == 0
    svg = svg_path.read_text()
    assert svg.startswith("<?xml") and svg.rstrip().endswith("</svg>")
    lines = polyline_points(svg)
    assert len(lines) == 1
    area = plot_area(svg)
    top_px = lines[0][:, 1].min()
    value = area["y-max"] - (top_px - area["top"]) / area["height"] * (area["y-max"] - area["y-min"])
    _, cols = files.read_csv(peak_csv)
    mask = (cols["t"] >= 0.24) & (cols["t"] <= 0.32)
    expected = cols["vs"][mask].max()
    pixel = (area["y-max"] - area["y-min"]) / area["height"]
    assert abs(value - expected) <= pixel * 0.01
    assert len(lines[0]) == mask.sum()
    assert "<text" in svg and "time [s]" in svg


def test_plot_deterministic_and_multichannel(capsys, peak_csv, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for p in (a, b):
        assert run(["plot", peak_csv, "--channel", "i", "--channel", "vc", "--t-start", 0.25, "--t-end", 0.3, "--title", "Fig", "--out", p], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(polyline_points(a.read_text())) == 2


def test_plot_errors(capsys, peak_csv, tmp_path):
    assert run(["plot", peak_csv, "--channel", "zz", "--out", tmp_path / "x.svg"], capsys)[0] == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("t,i\n0,1\n1")
    assert run(["plot", bad, "--out", tmp_path / "x.svg"], capsys)[0] == 5
    assert not (tmp_path / "x.svg").exists()


def test_argparse_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        main(["simulate"])
    assert err.value.code == 2


def test_module_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "linetransient", "tf", "--config", PEAK],
        capture_output=True, text=True,
    )
    assert out.returncode == 0 and "205.06 Hz" in out.stdout
    bad = subprocess.run(
        [sys.executable, "-m", "linetransient", "tf", "--config", str(write_config(tmp_path, r1_ohm=-1))],
        capture_output=True, text=True,
    )
    assert bad.returncode == 2 and "r1_ohm" in bad.stderr
