"""Command-line front end.

Exit codes: 0 ok, 2 bad config or arguments, 3 I/O failure, 4 numerical
failure, 5 malformed input CSV.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import files, svgplot
from .analysis import AnalysisError, measure
from .circuit import build_state_space, characteristics, transfer_function
from .sim import NumericalError, simulate
from .spectrum import amplitude_spectrum, dominant_and_secondary

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC, EXIT_PARSE = 0, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _load(path) -> files.RunConfig:
    try:
        return files.load_config(path)
    except files.ConfigFileError as exc:
        raise CliError(EXIT_CONFIG, f"config error: {exc}") from exc
    except OSError as exc:
        raise CliError(EXIT_CONFIG, f"cannot read config {path}: {exc.strerror}") from exc


def _read_csv(path, **kwargs):
    try:
        return files.read_series_csv(path, **kwargs)
    except files.CsvFormatError as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc}") from exc
    except (UnicodeDecodeError, ValueError) as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc}") from exc
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror}") from exc


def _write(path, writer, *args):
    try:
        writer(path, *args)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc.strerror or exc}") from exc


def _simulate(run: files.RunConfig):
    model = build_state_space(run.params)
    try:
        return simulate(model, run.params, run.sim)
    except NumericalError as exc:
        raise CliError(EXIT_NUMERIC, str(exc)) from exc


def cmd_tf(args) -> int:
    run = _load(args.config)
    p = run.params
    tf = transfer_function(p)
    ch = characteristics(p)
    lines = [
        "I(s)/Vg(s), coefficients in ascending powers of s",
        "  numerator:   [" + ", ".join(f"{c:.6g}" for c in tf.numerator) + "]",
        "  denominator: [" + ", ".join(f"{c:.6g}" for c in tf.denominator) + "]",
        f"Vg_peak: {p.v_peak:.0f} V",
        f"natural frequency wn: {ch.omega_n:.2f} rad/s = {ch.omega_n_hz:.2f} Hz",
        f"approximation 1/sqrt((L1+L2)*C): {ch.omega_n_approx:.2f} rad/s = "
        f"{ch.omega_n_approx_hz:.2f} Hz (relative gap {ch.approx_relative_gap:.2e})",
        f"damping ratio zeta: {ch.zeta:.5f}" + ("  (overdamped)" if ch.overdamped else ""),
        f"decay rate zeta*wn: {ch.decay_rate:.2f} 1/s",
        f"damped frequency wd: {ch.omega_d:.2f} rad/s = {ch.omega_d_hz:.2f} Hz",
    ]
    print("\n".join(lines))
    if args.out:
        payload = {
            "numerator": list(tf.numerator),
            "denominator": list(tf.denominator),
            "v_peak": p.v_peak,
            "omega_n": ch.omega_n,
            "omega_n_hz": ch.omega_n_hz,
            "omega_n_approx": ch.omega_n_approx,
            "omega_n_approx_hz": ch.omega_n_approx_hz,
            "approx_relative_gap": ch.approx_relative_gap,
            "zeta": ch.zeta,
            "omega_d": ch.omega_d,
            "decay_rate": ch.decay_rate,
            "overdamped": ch.overdamped,
        }
        _write(args.out, files.atomic_write, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    run = _load(args.config)
    series = _simulate(run)
    _write(args.out, files.write_series_csv, series)
    print(f"wrote {len(series)} samples to {args.out}")
    return EXIT_OK


def _window(args, t):
    lo = float(t[0]) if args.t_start is None else args.t_start
    hi = float(t[-1]) if args.t_end is None else args.t_end
    if hi <= lo:
        raise CliError(EXIT_CONFIG, f"empty window [{lo}, {hi}]")
    return lo, hi


def cmd_spectrum(args) -> int:
    series = _read_csv(args.input)
    if args.channel not in series.channels:
        raise CliError(EXIT_CONFIG, f"unknown channel {args.channel!r}")
    lo, hi = _window(args, series.t)
    mask = series.window(lo, hi)
    if mask.sum() < 2:
        raise CliError(EXIT_CONFIG, f"window [{lo}, {hi}] holds fewer than two samples")
    freqs, mags, n_fft = amplitude_spectrum(series[args.channel][mask], 1.0 / series.dt)
    dominant, secondary = dominant_and_secondary(freqs, mags, args.exclusion)
    _write(args.out, files.write_spectrum_csv, freqs, mags)
    print(f"samples: {int(mask.sum())} (zero-padded to {n_fft}), resolution {freqs[1]:.4f} Hz")
    print(f"dominant: {dominant[0]:.2f} Hz, magnitude {dominant[1]:.6g}")
    print(f"secondary: {secondary[0]:.2f} Hz, magnitude {secondary[1]:.6g}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    run = _load(args.config)
    series = _read_csv(
        args.input, params=run.params, switch_time=run.sim.snapped_switch_time, dt=run.sim.dt
    )
    missing = [c for c in files.SERIES_COLUMNS[1:] if c not in series.channels]
    if missing:
        raise CliError(EXIT_PARSE, f"{args.input}: missing columns {missing}")
    try:
        report = measure(series, run.params, characteristics(run.params))
    except AnalysisError as exc:
        raise CliError(EXIT_NUMERIC, f"analysis failed: {exc}") from exc
    _write(args.out, files.atomic_write, files.report_json(report))
    print(
        f"{report.scenario}: peak current {report.peak_current:.0f} A at {report.peak_current_time:.4f} s, "
        f"overvoltage {report.overvoltage_ratio:.3f} pu, ripple {report.ripple_frequency:.2f} Hz"
    )
    return EXIT_OK


def parse_phases(text: str) -> list[float]:
    """``START:END:STEP`` in degrees, END exclusive, all inside [0, 360)."""
    try:
        start, end, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise CliError(EXIT_CONFIG, f"--phases must be START:END:STEP, got {text!r}") from None
    if step <= 0:
        raise CliError(EXIT_CONFIG, "--phases step must be positive")
    if start < 0 or end > 360:
        raise CliError(EXIT_CONFIG, "--phases must lie within [0, 360)")
    n = int(np.ceil((end - start) / step - 1e-9))
    grid = [start + k * step for k in range(max(n, 0))]
    if not grid:
        raise CliError(EXIT_CONFIG, f"--phases {text!r} is an empty grid")
    return grid


def _sweep_row(run: files.RunConfig, phase: float):
    series = _simulate(run)
    report = measure(series, run.params)
    mags = amplitude_spectrum(series["i"], 1.0 / series.dt)
    freqs, magnitudes, _ = mags
    _, secondary = dominant_and_secondary(freqs, magnitudes, 20.0)
    return phase, report.peak_current, report.overvoltage_ratio, secondary[1]


def cmd_sweep(args) -> int:
    run = _load(args.config)
    grid = parse_phases(args.phases)
    runs = [run.with_phase(ph) for ph in grid]
    for r in runs:
        try:
            r.validate()
        except files.ConfigFileError as exc:
            raise CliError(EXIT_CONFIG, f"config error: {exc}") from exc
    workers = max(1, args.workers)
    try:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row, runs, grid))
    except AnalysisError as exc:
        raise CliError(EXIT_NUMERIC, f"analysis failed: {exc}") from exc
    cols = ("switch_phase_deg", "peak_current", "overvoltage_ratio", "secondary_magnitude")
    _write(args.out, files.atomic_write, files.format_csv(cols, list(zip(*rows))))
    print(f"wrote {len(rows)} sweep rows to {args.out}")
    return EXIT_OK


def cmd_plot(args) -> int:
    try:
        header, cols = files.read_csv(args.input)
    except files.CsvFormatError as exc:
        raise CliError(EXIT_PARSE, f"{args.input}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise CliError(EXIT_PARSE, f"{args.input}: {exc}") from exc
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {args.input}: {exc.strerror}") from exc
    xname = header[0]
    channels = args.channel or [header[1]]
    for name in channels:
        if name not in header[1:]:
            raise CliError(EXIT_CONFIG, f"unknown channel {name!r}; available: {header[1:]}")
    x = cols[xname]
    lo, hi = _window(args, x)
    mask = (x >= lo) & (x <= hi)
    if mask.sum() < 2:
        raise CliError(EXIT_CONFIG, f"range [{lo}, {hi}] holds fewer than two points")
    title = args.title or f"{', '.join(channels)} from {os.path.basename(args.input)}"
    xlabel = "time [s]" if xname == "t" else xname
    svg = svgplot.line_plot(x[mask], {c: cols[c][mask] for c in channels}, title, xlabel)
    _write(args.out, files.atomic_write, svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linetransient",
        description="Switching transients on a re-energized transmission line.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tf", help="transfer function, natural frequency and damping")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="optional JSON output")
    p.set_defaults(func=cmd_tf)

    p = sub.add_parser("simulate", help="integrate the switching transient to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("spectrum", help="amplitude spectrum of one CSV channel")
    p.add_argument("input")
    p.add_argument("--channel", default="i")
    p.add_argument("--t-start", type=float)
    p.add_argument("--t-end", type=float)
    p.add_argument("--exclusion", type=float, default=20.0,
                   help="half-width in Hz around the dominant line skipped for the secondary")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("analyze", help="transient report (JSON) from a simulated CSV")
    p.add_argument("input")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="peak current and overvoltage against closing phase")
    p.add_argument("--config", required=True)
    p.add_argument("--phases", required=True, help="START:END:STEP in degrees, END exclusive")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("plot", help="SVG line plot of CSV columns")
    p.add_argument("input")
    p.add_argument("--channel", action="append", help="column to plot; repeatable")
    p.add_argument("--t-start", type=float)
    p.add_argument("--t-end", type=float)
    p.add_argument("--title")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"linetransient {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
