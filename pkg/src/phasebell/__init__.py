"""Phase-space tests of genuine tripartite nonlocality for three-mode
bosonic states: closed-form s-parameterized quasiprobabilities, MK and
Svetlichny functionals, detector/damping noise models, settings
optimization, and a truncated-Fock-space oracle."""

from ._kernels import backend_name
from .bell import BellResult, MeasurementSettings
from .noise import DetectionEfficiency, NoiseChannel, ThermalChannel
from .states import GhzEcs, PhasePoint3, SinglePhotonW, SqueezedVacuum3, StateSpec

__all__ = [
    "BellResult",
    "DetectionEfficiency",
    "GhzEcs",
    "MeasurementSettings",
    "NoiseChannel",
    "PhasePoint3",
    "SinglePhotonW",
    "SqueezedVacuum3",
    "StateSpec",
    "ThermalChannel",
    "backend_name",
]

__version__ = "0.1.0"
