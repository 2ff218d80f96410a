"""Run-config JSON, time-series/spectrum CSV, and report JSON.

CSV numbers are written with ``repr`` so that re-reading a file gives back
exactly the floats that were written. Every writer goes through
:func:`atomic_write`, so a failed command never leaves a partial file.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .circuit import CircuitParams, InvalidParameterError
from .sim import ConfigError, SimConfig, TimeSeries

SERIES_COLUMNS = ("t", "i", "vc", "vs", "vg")
SPECTRUM_COLUMNS = ("freq_hz", "magnitude")

_PARAM_KEYS = {
    "l1_h": "l1",
    "l2_h": "l2",
    "r1_ohm": "r1",
    "r2_ohm": "r2",
    "c_f": "c",
    "v_ll_rms_v": "v_ll_rms",
    "f_supply_hz": "f_supply",
    "v_peak_override_v": "v_peak_override",
}
_SIM_KEYS = {"dt_s": "dt", "t_end_s": "t_end", "switch": "switch_time"}
_DEFAULTS = {"f_supply_hz": 60.0, "dt_s": 1e-4, "t_end_s": 0.5}
_OPTIONAL = {"v_peak_override_v"}
_FIELD_TO_KEY = {v: k for k, v in {**_PARAM_KEYS, **_SIM_KEYS}.items()}


class ConfigFileError(ValueError):
    """Invalid run configuration; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class CsvFormatError(ValueError):
    """Malformed CSV input; ``line`` is 1-based (header is line 1)."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True)
class RunConfig:
    params: CircuitParams
    sim: SimConfig
    switch: str  # "peak", "zero" or "time"

    def with_phase(self, phase_deg: float) -> "RunConfig":
        cfg = SimConfig.at_phase(
            phase_deg, self.params.f_supply, dt=self.sim.dt, t_end=self.sim.t_end
        )
        return RunConfig(self.params, cfg, f"phase-{phase_deg:g}deg")

    def validate(self) -> None:
        try:
            self.sim.validate(self.params)
        except ConfigError as exc:
            raise ConfigFileError(_FIELD_TO_KEY.get(exc.name, exc.name), str(exc)) from exc


def _number(key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigFileError(key, f"must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigFileError(key, f"must be finite, got {value!r}")
    return float(value)


def parse_config(obj) -> RunConfig:
    """Build a :class:`RunConfig` from a decoded JSON object (strict keys)."""
    if not isinstance(obj, dict):
        raise ConfigFileError("<root>", "config must be a JSON object")
    allowed = set(_PARAM_KEYS) | set(_SIM_KEYS)
    for key in obj:
        if key not in allowed:
            raise ConfigFileError(key, "unknown key")
    values = dict(_DEFAULTS)
    values.update(obj)
    for key in list(_PARAM_KEYS) + ["dt_s", "t_end_s", "switch"]:
        if key not in values and key not in _OPTIONAL:
            raise ConfigFileError(key, "missing required key")

    kwargs = {}
    for key, name in _PARAM_KEYS.items():
        if key in values:
            kwargs[name] = _number(key, values[key])
    try:
        params = CircuitParams(**kwargs)
    except InvalidParameterError as exc:
        raise ConfigFileError(_FIELD_TO_KEY[exc.name], str(exc)) from exc

    dt = _number("dt_s", values["dt_s"])
    t_end = _number("t_end_s", values["t_end_s"])
    switch = values["switch"]
    if switch == "peak":
        sim = SimConfig.peak(params.f_supply, dt=dt, t_end=t_end)
    elif switch == "zero":
        sim = SimConfig.zero_crossing(params.f_supply, dt=dt, t_end=t_end)
    elif isinstance(switch, dict) and set(switch) == {"time_s"}:
        sim = SimConfig(dt=dt, t_end=t_end, switch_time=_number("switch", switch["time_s"]))
        switch = "time"
    else:
        raise ConfigFileError("switch", 'must be "peak", "zero" or {"time_s": number}')
    run = RunConfig(params=params, sim=sim, switch=switch)
    run.validate()
    return run


def load_config(path) -> RunConfig:
    """Read and validate a JSON run config. I/O errors propagate as OSError."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigFileError("<root>", f"invalid JSON: {exc}") from exc
    return parse_config(obj)


def atomic_write(path, data: str) -> None:
    """Write ``data`` to a temp file beside ``path`` and rename it into place."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_csv(columns, arrays) -> str:
    parts = [",".join(columns), "\n"]
    rows = zip(*(np.asarray(a, dtype=float).tolist() for a in arrays))
    for row in rows:
        parts.append(",".join(map(repr, row)))
        parts.append("\n")
    return "".join(parts)


def series_csv(series: TimeSeries) -> str:
    return format_csv(SERIES_COLUMNS, [series.t] + [series[c] for c in SERIES_COLUMNS[1:]])


def write_series_csv(path, series: TimeSeries) -> None:
    atomic_write(path, series_csv(series))


def write_spectrum_csv(path, freqs, mags) -> None:
    atomic_write(path, format_csv(SPECTRUM_COLUMNS, [freqs, mags]))


def read_csv(path) -> tuple[list[str], dict[str, np.ndarray]]:
    """Parse a numeric CSV with a header row.

    Raises :class:`CsvFormatError` with the first bad line number on an
    empty file, a missing final line feed, ragged rows or non-numeric fields.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    if not text:
        raise CsvFormatError(1, "empty file")
    lines = text.split("\n")
    if lines[-1] != "":
        raise CsvFormatError(len(lines), "missing final line feed (truncated file?)")
    lines.pop()
    header = lines[0].split(",")
    if any(not name for name in header) or len(set(header)) != len(header):
        raise CsvFormatError(1, f"bad header {lines[0]!r}")
    if len(lines) < 2:
        raise CsvFormatError(2, "no data rows")
    data = np.empty((len(lines) - 1, len(header)))
    for n, line in enumerate(lines[1:], start=2):
        fields_ = line.split(",")
        if len(fields_) != len(header):
            raise CsvFormatError(n, f"expected {len(header)} fields, found {len(fields_)}")
        try:
            row = [float(f) for f in fields_]
        except ValueError:
            raise CsvFormatError(n, f"non-numeric field in {line!r}") from None
        if not all(math.isfinite(v) for v in row):
            raise CsvFormatError(n, "non-finite value")
        data[n - 2] = row
    return header, {name: data[:, k].copy() for k, name in enumerate(header)}


def read_series_csv(path, params: CircuitParams | None = None,
                    switch_time: float | None = None, dt: float | None = None) -> TimeSeries:
    """Load a time-series CSV written by ``simulate`` back into a TimeSeries."""
    header, cols = read_csv(path)
    if header[0] != "t":
        raise CsvFormatError(1, f"first column must be 't', got {header[0]!r}")
    t = cols.pop("t")
    if t.size < 2:
        raise CsvFormatError(2, "need at least two samples")
    if dt is None:
        dt = float(t[1] - t[0])
    steps = np.diff(t)
    bad = np.nonzero(np.abs(steps - dt) >= 1e-12)[0]
    if bad.size:
        raise CsvFormatError(int(bad[0]) + 3, f"time column is not uniform at dt={float(dt)!r}")
    return TimeSeries(
        t=t,
        channels=cols,
        dt=float(dt),
        switch_time=float(t[0]) if switch_time is None else switch_time,
        params=params,
        label=os.path.basename(os.fspath(path)),
    )


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    return value


def report_json(report) -> str:
    return json.dumps(_clean(report.to_dict()), indent=2, allow_nan=False) + "\n"


def report_schema() -> dict:
    text = resources.files("linetransient").joinpath("schemas/report.schema.json").read_text(
        encoding="utf-8"
    )
    return json.loads(text)
