"""Time-domain measurements on a switching transient.

The forced 60 Hz response is known in closed form, so the natural response
is isolated by subtracting it and its oscillation period and decay are read
from the peaks of what remains.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .circuit import CircuitParams, SystemCharacteristics, steady_state_phasor
from .sim import TimeSeries

__all__ = [
    "AnalysisError",
    "TransientReport",
    "ComparisonSummary",
    "forced_current",
    "residual_peaks",
    "measure",
    "compare_scenarios",
]

MIN_POST_SWITCH = 0.1  # s
MIN_RELIABLE_CYCLES = 5
# residual peaks below this fraction of the largest one are not counted
PEAK_FLOOR = 1e-2


class AnalysisError(ValueError):
    pass


@dataclass(frozen=True)
class TransientReport:
    scenario: str
    switch_time: float
    switch_phase_deg: float
    peak_current: float
    peak_current_time: float
    peak_vs: float
    peak_vs_time: float
    overvoltage_ratio: float
    ripple_frequency: float
    ripple_cycles_counted: int
    ripple_reliable: bool
    decay_rate_fit: float
    steady_state_amplitude: float
    dt: float
    t_end: float
    params: dict

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ComparisonSummary:
    peak_current_ratio: float
    overvoltage_ratio_difference: float
    ripple_frequency_difference: float
    worst_case_switching: bool

    def to_dict(self) -> dict:
        return asdict(self)


def switch_phase_deg(switch_time: float, f_supply: float) -> float:
    """Source phase at closure, degrees in [0, 360)."""
    # round away float noise so e.g. 15.25 cycles reads 90, not 89.99999999
    cycles = round(switch_time * f_supply, 9)
    return (cycles - math.floor(cycles)) * 360.0


def scenario_name(phase_deg: float, tol_deg: float = 1e-6) -> str:
    """Label a closure phase; ``tol_deg`` absorbs snapping to the time grid."""
    if phase_deg <= tol_deg or phase_deg >= 360.0 - tol_deg:
        return "zero-crossing"
    if abs(phase_deg - 90.0) <= tol_deg:
        return "peak"
    return f"phase-{phase_deg:.4g}deg"


def forced_current(t: np.ndarray, params: CircuitParams, switch_time: float) -> np.ndarray:
    """Steady-state line current, gated on at ``switch_time``."""
    amp, phase = steady_state_phasor(params)
    out = amp * np.sin(params.omega_supply * t + phase)
    out[t < switch_time - 1e-9] = 0.0
    return out


def residual_peaks(t: np.ndarray, r: np.ndarray, floor: float = PEAK_FLOOR):
    """Local maxima of ``r`` refined by a parabola through the 3 samples.

    Returns arrays ``(times, amplitudes)`` for the leading run of maxima whose
    amplitude stays above ``floor`` times the largest one.
    """
    r = np.asarray(r, dtype=float)
    if r.size < 3:
        return np.empty(0), np.empty(0)
    left, mid, right = r[:-2], r[1:-1], r[2:]
    k = np.nonzero((mid > left) & (mid >= right) & (mid > 0))[0] + 1
    if k.size == 0:
        return np.empty(0), np.empty(0)
    y0, y1, y2 = r[k - 1], r[k], r[k + 1]
    denom = y0 - 2.0 * y1 + y2
    with np.errstate(divide="ignore", invalid="ignore"):
        offset = np.where(denom != 0, 0.5 * (y0 - y2) / denom, 0.0)
    dt = t[1] - t[0]
    times = t[k] + offset * dt
    amps = y1 - 0.25 * (y0 - y2) * offset
    keep = amps >= floor * amps.max()
    # stop at the first peak that drops under the floor
    n_keep = int(np.argmin(keep)) if not keep.all() else keep.size
    return times[:n_keep], amps[:n_keep]


def measure(
    series: TimeSeries,
    params: CircuitParams,
    model_chars: SystemCharacteristics | None = None,
    subtract_forced: bool = True,
    scenario: str | None = None,
) -> TransientReport:
    """Peak current, overvoltage, ripple frequency, decay and steady state.

    ``model_chars`` is accepted for symmetry with the analytic side; the
    measurements themselves use only the record and the forced response.
    Set ``subtract_forced=False`` for records that hold only a natural
    response.
    """
    t = series.t
    ts = series.switch_time
    if t[-1] - ts < MIN_POST_SWITCH - 1e-9:
        raise AnalysisError(
            f"record ends {t[-1] - ts:.4g} s after the switch; need {MIN_POST_SWITCH} s"
        )
    post = t >= ts - 1e-9 * series.dt
    i = series["i"]

    k_pk = int(np.argmax(np.abs(i)))
    if "vs" in series.channels:
        vs_post = np.abs(series["vs"][post])
        k_vs = int(np.argmax(vs_post))
        peak_vs = float(vs_post[k_vs])
        peak_vs_time = float(t[post][k_vs])
    else:
        peak_vs = peak_vs_time = float("nan")

    residual = i - forced_current(t, params, ts) if subtract_forced else i
    times, amps = residual_peaks(t[post], residual[post])
    if times.size < 2:
        raise AnalysisError(f"found {times.size} residual peaks, need at least 2")
    cycles = times.size - 1
    ripple = cycles / (times[-1] - times[0])

    slope = np.polyfit(times - times[0], np.log(amps), 1)[0]
    decay = float(-slope)

    last = t >= t[-1] - 2.0 / params.f_supply - 1e-9 * series.dt
    steady = float(np.max(np.abs(i[last])))

    phase = switch_phase_deg(ts, params.f_supply)
    return TransientReport(
        scenario=scenario or scenario_name(phase, 180.0 * params.f_supply * series.dt + 1e-6),
        switch_time=float(ts),
        switch_phase_deg=phase,
        peak_current=float(abs(i[k_pk])),
        peak_current_time=float(t[k_pk]),
        peak_vs=peak_vs,
        peak_vs_time=peak_vs_time,
        overvoltage_ratio=peak_vs / params.v_peak,
        ripple_frequency=float(ripple),
        ripple_cycles_counted=int(cycles),
        ripple_reliable=cycles >= MIN_RELIABLE_CYCLES,
        decay_rate_fit=decay,
        steady_state_amplitude=steady,
        dt=float(series.dt),
        t_end=float(t[-1]),
        params=asdict(params),
    )


def compare_scenarios(report_peak: TransientReport, report_zero: TransientReport) -> ComparisonSummary:
    """Contrast two closures of the same line at different source phases."""
    for name in ("params", "dt", "t_end"):
        if getattr(report_peak, name) != getattr(report_zero, name):
            raise AnalysisError(f"reports differ in {name}; only switch_time may change")
    return ComparisonSummary(
        peak_current_ratio=report_peak.peak_current / report_zero.peak_current,
        overvoltage_ratio_difference=report_peak.overvoltage_ratio - report_zero.overvoltage_ratio,
        ripple_frequency_difference=report_peak.ripple_frequency - report_zero.ripple_frequency,
        worst_case_switching=report_peak.peak_current > report_zero.peak_current,
    )
