"""Lumped model of a re-energized single-phase transmission line.

Topology (series path closed by the breaker)::

    Vg --L1--[switch]-- Vs --R1-- V1 --L2-- Vc --+-- C
                                                 +-- R2

The state vector is ``x = [i, vc]``: the line current through L1, R1, L2
and the substation-node voltage across the parallel C || R2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, fields

import numpy as np

__all__ = [
    "InvalidParameterError",
    "CircuitParams",
    "StateSpaceModel",
    "TransferFunction",
    "SystemCharacteristics",
    "build_state_space",
    "transfer_function",
    "characteristics",
    "steady_state_phasor",
    "REFERENCE_PARAMS",
]

STATE_LABELS = ("line_current_amperes", "substation_voltage_volts")
INPUT_LABEL = "gated_source_voltage_volts"


class InvalidParameterError(ValueError):
    """A circuit or simulation parameter is out of range.

    ``name`` holds the offending field so callers (the CLI) can map it back
    to a config key.
    """

    def __init__(self, name: str, value, reason: str = "must be strictly positive and finite"):
        self.name = name
        self.value = value
        super().__init__(f"{name}={value!r}: {reason}")


@dataclass(frozen=True)
class CircuitParams:
    """Element values of the line circuit and its source.

    Parameters
    ----------
    l1 : float
        Source-side inductance [H].
    l2 : float
        Cable inductance [H].
    r1 : float
        Cable resistance [ohm]. Zero is accepted (lossless cable).
    r2 : float
        Lumped substation load [ohm].
    c : float
        Lumped cable and substation capacitance [F].
    v_ll_rms : float
        Line-to-line RMS voltage rating [V].
    f_supply : float
        Supply frequency [Hz].
    v_peak_override : float, optional
        Phase voltage amplitude [V]; replaces the value derived from
        ``v_ll_rms``.
    """

    l1: float
    l2: float
    r1: float
    r2: float
    c: float
    v_ll_rms: float
    f_supply: float = 60.0
    v_peak_override: float | None = field(default=None)

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "v_peak_override" and value is None:
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InvalidParameterError(f.name, value, "must be a real number")
            if not math.isfinite(value):
                raise InvalidParameterError(f.name, value)
            if f.name == "r1":
                if value < 0:
                    raise InvalidParameterError(f.name, value, "must be non-negative and finite")
            elif value <= 0:
                raise InvalidParameterError(f.name, value)

    @property
    def v_peak(self) -> float:
        """Phase-to-neutral source amplitude [V]."""
        if self.v_peak_override is not None:
            return float(self.v_peak_override)
        return self.v_ll_rms * math.sqrt(2.0 / 3.0)

    @property
    def l_total(self) -> float:
        return self.l1 + self.l2

    @property
    def omega_supply(self) -> float:
        return 2.0 * math.pi * self.f_supply


#: 345 kV, 60 Hz line from the worked example (L1=25 mH, L2=0.1 mH,
#: R1=0.5 ohm, R2=5 kohm, C=24 uF).
REFERENCE_PARAMS = CircuitParams(
    l1=25e-3, l2=0.1e-3, r1=0.5, r2=5000.0, c=24e-6, v_ll_rms=345e3, f_supply=60.0
)


@dataclass(frozen=True)
class StateSpaceModel:
    """Continuous LTI model ``dx/dt = a @ x + b * u``."""

    a: np.ndarray
    b: np.ndarray
    state_labels: tuple[str, str] = STATE_LABELS
    input_label: str = INPUT_LABEL

    def __post_init__(self):
        a = np.array(self.a, dtype=float).reshape(2, 2)
        b = np.array(self.b, dtype=float).reshape(2, 1)
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.a)


@dataclass(frozen=True)
class TransferFunction:
    """Rational function ``I(s)/Vg(s)``, coefficients in ascending powers of s."""

    numerator: tuple[float, ...]
    denominator: tuple[float, ...]

    def __call__(self, s: complex) -> complex:
        num = sum(c * s**k for k, c in enumerate(self.numerator))
        den = sum(c * s**k for k, c in enumerate(self.denominator))
        return num / den

    def poles(self) -> np.ndarray:
        # np.roots expects descending order
        return np.roots(self.denominator[::-1])


@dataclass(frozen=True)
class SystemCharacteristics:
    omega_n: float
    omega_n_hz: float
    zeta: float
    omega_d: float
    decay_rate: float
    omega_n_approx: float
    omega_n_approx_hz: float
    approx_relative_gap: float
    overdamped: bool = False

    @property
    def omega_d_hz(self) -> float:
        return self.omega_d / (2.0 * math.pi)


def build_state_space(params: CircuitParams) -> StateSpaceModel:
    """Assemble ``[di/dt, dVc/dt]`` by walking the circuit node by node.

    Series path: ``V1 = Vs - R1*i`` and ``L2*di/dt = V1 - Vc`` with
    ``Vs = Vg - L1*di/dt``, which collapses to
    ``(L1 + L2)*di/dt = Vg - R1*i - Vc``.
    Substation node: ``i2 = Vc/R2``, ``ic = i - i2``, ``C*dVc/dt = ic``.
    """
    _check(params)
    inv_l = 1.0 / params.l_total
    a = [
        [-params.r1 * inv_l, -inv_l],
        [1.0 / params.c, -1.0 / (params.r2 * params.c)],
    ]
    b = [[inv_l], [0.0]]
    return StateSpaceModel(a=np.array(a), b=np.array(b))


def transfer_function(params: CircuitParams) -> TransferFunction:
    """Line current per unit source voltage.

    Eliminating Vc from the Laplace-domain state equations gives

        I/Vg = (C R2 s + 1) / (L C R2 s^2 + (L + R1 C R2) s + (R1 + R2))

    with ``L = L1 + L2``.
    """
    _check(params)
    l, r1, r2, c = params.l_total, params.r1, params.r2, params.c
    return TransferFunction(
        numerator=(1.0, c * r2),
        denominator=(r1 + r2, l + r1 * c * r2, l * c * r2),
    )


def characteristics(params: CircuitParams) -> SystemCharacteristics:
    """Natural frequency and damping of the line's second-order mode.

    The exact values come from the transfer-function denominator. The
    textbook estimate ``1/sqrt((L1+L2) C)``, valid when R2 >> R1, is
    reported next to it together with the relative gap.
    """
    d0, d1, d2 = transfer_function(params).denominator
    omega_n = math.sqrt(d0 / d2)
    zeta = d1 / (2.0 * math.sqrt(d0 * d2))
    overdamped = zeta >= 1.0
    omega_d = omega_n * math.sqrt(1.0 - zeta * zeta) if not overdamped else 0.0
    approx = 1.0 / math.sqrt(params.l_total * params.c)
    return SystemCharacteristics(
        omega_n=omega_n,
        omega_n_hz=omega_n / (2.0 * math.pi),
        zeta=zeta,
        omega_d=omega_d,
        decay_rate=zeta * omega_n,
        omega_n_approx=approx,
        omega_n_approx_hz=approx / (2.0 * math.pi),
        approx_relative_gap=abs(omega_n - approx) / omega_n,
        overdamped=overdamped,
    )


def line_impedance(params: CircuitParams, omega: float) -> complex:
    """Driving-point impedance seen by the source at angular frequency ``omega``."""
    jw = 1j * omega
    z_shunt = 1.0 / (1.0 / params.r2 + jw * params.c)
    return jw * params.l_total + params.r1 + z_shunt


def steady_state_phasor(params: CircuitParams) -> tuple[float, float]:
    """Amplitude [A] and phase [rad] of the 60 Hz forced line current.

    The phase is relative to the source, i.e. the forced current is
    ``amplitude * sin(w t + phase)`` when ``Vg = v_peak * sin(w t)``.
    """
    _check(params)
    current = params.v_peak / line_impedance(params, params.omega_supply)
    return abs(current), cmath.phase(current)


def _check(params: CircuitParams) -> None:
    if not isinstance(params, CircuitParams):
        raise TypeError(f"expected CircuitParams, got {type(params).__name__}")
