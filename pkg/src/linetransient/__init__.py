"""Switching transients on a re-energized transmission line.

State-space model, RK4 and exact integrators, FFT line analysis and
time-domain transient measurements.
"""

from ._backend import BACKEND
from .analysis import TransientReport, compare_scenarios, measure
from .circuit import (
    REFERENCE_PARAMS,
    CircuitParams,
    InvalidParameterError,
    StateSpaceModel,
    SystemCharacteristics,
    TransferFunction,
    build_state_space,
    characteristics,
    steady_state_phasor,
    transfer_function,
)
from .sim import SimConfig, TimeSeries, exact_oracle, simulate
from .spectrum import Spectrum, analyze_channel, fft

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "REFERENCE_PARAMS",
    "CircuitParams",
    "InvalidParameterError",
    "SimConfig",
    "Spectrum",
    "StateSpaceModel",
    "SystemCharacteristics",
    "TimeSeries",
    "TransferFunction",
    "TransientReport",
    "analyze_channel",
    "build_state_space",
    "characteristics",
    "compare_scenarios",
    "exact_oracle",
    "fft",
    "measure",
    "simulate",
    "steady_state_phasor",
    "transfer_function",
]
