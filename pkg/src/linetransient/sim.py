"""Time-domain integration of the switched line.

The breaker is modelled as a gate on the source: ``u(t) = Vg(t)`` for
``t >= switch_time`` and zero before. The state is identically zero until the
breaker closes, so gating the input and closing the circuit give the same
trajectory.

Two integrators share the same grid ``t_k = k*dt``:

* :func:`simulate` uses fixed-step RK4 with the source evaluated at the
  sub-step times (compiled kernel when available).
* :func:`exact_oracle` appends a sine/cosine carrier to the state so the
  closed circuit is a homogeneous 4-state LTI system, and steps it with the
  exact transition matrix ``expm(M*dt)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .circuit import CircuitParams, StateSpaceModel, SystemCharacteristics, characteristics

__all__ = [
    "ConfigError",
    "NumericalError",
    "SimConfig",
    "TimeSeries",
    "simulate",
    "exact_oracle",
    "expm",
    "convergence_study",
    "convergence_order",
    "energy_balance",
]

MANDATORY_CHANNELS = ("i", "vc", "vs", "vg")
DERIVED_CHANNELS = ("v1", "i2", "ic")

# cycles of supply voltage before the breaker closes
PRESWITCH_CYCLES = 15


class ConfigError(ValueError):
    """Simulation settings violate a grid or accuracy constraint."""

    def __init__(self, name: str, message: str):
        self.name = name
        super().__init__(f"{name}: {message}")


class NumericalError(ArithmeticError):
    """The integrated state became non-finite."""

    def __init__(self, time: float):
        self.time = time
        super().__init__(f"non-finite state at t={time!r} s")


@dataclass(frozen=True)
class SimConfig:
    dt: float = 1e-4
    t_end: float = 0.5
    switch_time: float = PRESWITCH_CYCLES / 60.0

    @classmethod
    def zero_crossing(cls, f_supply: float = 60.0, **kwargs) -> "SimConfig":
        """Close the breaker as the source crosses zero going positive."""
        return cls(switch_time=PRESWITCH_CYCLES / f_supply, **kwargs)

    @classmethod
    def peak(cls, f_supply: float = 60.0, **kwargs) -> "SimConfig":
        """Close the breaker a quarter cycle later, at the positive voltage peak."""
        return cls(switch_time=PRESWITCH_CYCLES / f_supply + 0.25 / f_supply, **kwargs)

    @classmethod
    def at_phase(cls, phase_deg: float, f_supply: float = 60.0, **kwargs) -> "SimConfig":
        return cls(
            switch_time=PRESWITCH_CYCLES / f_supply + phase_deg / 360.0 / f_supply, **kwargs
        )

    @property
    def n_samples(self) -> int:
        return int(math.floor(self.t_end / self.dt + 1e-9)) + 1

    @property
    def switch_index(self) -> int:
        return int(round(self.switch_time / self.dt))

    @property
    def snapped_switch_time(self) -> float:
        return self.switch_index * self.dt

    def validate(self, params: CircuitParams, chars: SystemCharacteristics | None = None) -> None:
        """Raise :class:`ConfigError` unless the grid resolves the circuit."""
        for name in ("dt", "t_end", "switch_time"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigError(name, f"must be finite, got {value!r}")
        if self.dt <= 0:
            raise ConfigError("dt", f"must be positive, got {self.dt!r}")
        if not 0 <= self.switch_time < self.t_end:
            raise ConfigError("switch_time", f"must lie in [0, t_end), got {self.switch_time!r}")
        if chars is None:
            chars = characteristics(params)
        dt_max = min(1.0 / (20.0 * params.f_supply), 1.0 / (20.0 * chars.omega_n_hz))
        if self.dt > dt_max * (1 + 1e-12):
            raise ConfigError("dt", f"{self.dt!r} s exceeds the accuracy limit {dt_max!r} s")
        if abs(self.snapped_switch_time - self.switch_time) >= 0.5 * self.dt:
            raise ConfigError("switch_time", "cannot be snapped to the grid within dt/2")
        if self.switch_index >= self.n_samples - 1:
            raise ConfigError("switch_time", "falls on or after the last grid point")


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled record of the line quantities.

    ``channels`` holds the stored channels; the derived channels ``v1``,
    ``i2`` and ``ic`` are computed on request and need ``params``.
    """

    t: np.ndarray
    channels: dict
    dt: float
    switch_time: float
    params: CircuitParams | None = None
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        if t.ndim != 1 or t.size < 2:
            raise ValueError("t must be a 1-D sequence with at least two samples")
        if np.any(np.abs(np.diff(t) - self.dt) >= 1e-12):
            raise ValueError("t is not uniformly spaced at dt")
        chans = {}
        for name, values in self.channels.items():
            arr = np.asarray(values, dtype=float)
            if arr.shape != t.shape:
                raise ValueError(f"channel {name!r} has length {arr.size}, expected {t.size}")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"channel {name!r} contains non-finite values")
            arr.setflags(write=False)
            chans[name] = arr
        t.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "channels", chans)

    def __len__(self):
        return self.t.size

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.channels)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.channel(name)

    def channel(self, name: str) -> np.ndarray:
        if name in self.channels:
            return self.channels[name]
        if name in DERIVED_CHANNELS:
            if self.params is None:
                raise KeyError(f"derived channel {name!r} needs circuit parameters")
            i = self.channels["i"]
            if name == "v1":
                return self.channels["vs"] - self.params.r1 * i
            i2 = self.channels["vc"] / self.params.r2
            return i2 if name == "i2" else i - i2
        raise KeyError(f"unknown channel {name!r}")

    def window(self, t_start: float, t_end: float) -> np.ndarray:
        """Boolean mask of samples with ``t_start <= t <= t_end``."""
        eps = 1e-9 * self.dt
        return (self.t >= t_start - eps) & (self.t <= t_end + eps)


def _grid(config: SimConfig) -> np.ndarray:
    return np.arange(config.n_samples) * config.dt


def _assemble(model, params, config, i, vc, label) -> TimeSeries:
    t = _grid(config)
    vg = params.v_peak * np.sin(params.omega_supply * t)
    u = vg.copy()
    u[: config.switch_index] = 0.0
    didt = model.a[0, 0] * i + model.a[0, 1] * vc + model.b[0, 0] * u
    vs = vg - params.l1 * didt
    return TimeSeries(
        t=t,
        channels={"i": i, "vc": vc, "vs": vs, "vg": vg},
        dt=config.dt,
        switch_time=config.snapped_switch_time,
        params=params,
        label=label,
    )


def simulate(model: StateSpaceModel, params: CircuitParams, config: SimConfig) -> TimeSeries:
    """Integrate from rest with RK4 and rebuild the node voltages.

    ``vs = vg - L1 di/dt`` with ``di/dt`` taken from the state equation, so
    ``vs`` equals the open-circuit source voltage before the breaker closes.
    """
    config.validate(params)
    a, b = model.a, model.b
    i, vc, bad = _backend.rk4_sine_lti2(
        float(a[0, 0]), float(a[0, 1]), float(a[1, 0]), float(a[1, 1]),
        float(b[0, 0]), float(b[1, 0]),
        params.v_peak, params.omega_supply, config.dt,
        config.switch_index, config.n_samples,
    )
    if bad >= 0:
        raise NumericalError(bad * config.dt)
    return _assemble(model, params, config, i, vc, "rk4")


def expm(m: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring of a Taylor series.

    The matrix is scaled by ``2**-s`` until its 1-norm is at most 1/2, the
    series is summed until the next term no longer changes the sum at double
    precision, and the result is squared ``s`` times.
    """
    m = np.asarray(m, dtype=float)
    norm = np.abs(m).sum(axis=0).max()
    s = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0 else 0
    scaled = m / 2.0**s
    result = np.eye(m.shape[0])
    term = np.eye(m.shape[0])
    for k in range(1, 40):
        term = term @ scaled / k
        result = result + term
        if np.abs(term).max() <= np.finfo(float).eps * np.abs(result).max():
            break
    for _ in range(s):
        result = result @ result
    return result


def augmented_matrix(model: StateSpaceModel, params: CircuitParams) -> np.ndarray:
    """4x4 system for ``[i, vc, sin(wt), cos(wt)]`` with the source switched on."""
    w = params.omega_supply
    m = np.zeros((4, 4))
    m[:2, :2] = model.a
    m[:2, 2] = model.b[:, 0] * params.v_peak
    m[2, 3] = w
    m[3, 2] = -w
    return m


def exact_oracle(model: StateSpaceModel, params: CircuitParams, config: SimConfig) -> TimeSeries:
    """Reference trajectory from the exact discrete transition matrix."""
    config.validate(params)
    n, k0 = config.n_samples, config.switch_index
    phi = expm(augmented_matrix(model, params) * config.dt)
    w_ts = params.omega_supply * config.snapped_switch_time
    states = np.zeros((n, 4))
    x = np.array([0.0, 0.0, math.sin(w_ts), math.cos(w_ts)])
    states[k0] = x
    for k in range(k0 + 1, n):
        x = phi @ x
        states[k] = x
    if not np.all(np.isfinite(states)):
        bad = int(np.argmax(~np.all(np.isfinite(states), axis=1)))
        raise NumericalError(bad * config.dt)
    return _assemble(model, params, config, states[:, 0].copy(), states[:, 1].copy(), "exact")


def convergence_study(model, params, base_config: SimConfig, levels: int = 3):
    """RK4 error against the oracle for ``dt, dt/2, ...``.

    Returns ``(dts, errors)``, with errors the max absolute line-current
    deviation over each grid.
    """
    dts, errors = [], []
    for level in range(levels):
        cfg = SimConfig(
            dt=base_config.dt / 2**level,
            t_end=base_config.t_end,
            switch_time=base_config.switch_time,
        )
        approx = simulate(model, params, cfg)
        exact = exact_oracle(model, params, cfg)
        dts.append(cfg.dt)
        errors.append(float(np.max(np.abs(approx["i"] - exact["i"]))))
    return dts, errors


def convergence_order(model, params, base_config: SimConfig) -> float:
    """Observed RK4 order ``log2(err(dt)/err(dt/2))``."""
    _, errors = convergence_study(model, params, base_config, levels=3)
    return math.log2(errors[0] / errors[1])


@dataclass(frozen=True)
class EnergyBalance:
    delivered: float
    stored: float
    dissipated: float

    @property
    def residual(self) -> float:
        return self.delivered - self.stored - self.dissipated

    @property
    def relative_residual(self) -> float:
        return abs(self.residual) / abs(self.delivered)


def energy_balance(series: TimeSeries, params: CircuitParams) -> EnergyBalance:
    """Source energy against stored plus dissipated energy (trapezoidal rule)."""
    t = series.t
    mask = t >= series.switch_time - 1e-9 * series.dt
    t = t[mask]
    i = series["i"][mask]
    vc = series["vc"][mask]
    vg = series["vg"][mask]
    delivered = np.trapezoid(vg * i, t)
    stored = 0.5 * params.l_total * i[-1] ** 2 + 0.5 * params.c * vc[-1] ** 2
    dissipated = np.trapezoid(params.r1 * i**2 + vc**2 / params.r2, t)
    return EnergyBalance(float(delivered), float(stored), float(dissipated))
