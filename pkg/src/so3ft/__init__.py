"""SO(3) Fourier transforms via the double Fourier sphere Wigner transform."""
from .core import (
    EulerAngles,
    FourierCube,
    HarmonicCoefficients,
    RotationList,
    dimension,
    harmonic_index,
)

__version__ = "0.1.0"

__all__ = [
    "EulerAngles",
    "FourierCube",
    "HarmonicCoefficients",
    "RotationList",
    "dimension",
    "harmonic_index",
]
