"""Amplitude calculus for photons in simple optical systems.

Lossless beam-splitter algebra, Fock/coherent/thermal state transformations,
Mach-Zehnder and Sagnac interferometers, electric and magnetic dipole
scattering with circular-polarization channels, thin films and thin sheets,
and scalar/vector far-field diffraction.  Everything is plain SI, angles in
radians, lengths in meters.
"""

__version__ = "0.1.0"

from .foundations import (
    CONSTANTS,
    Constants,
    Direction,
    PolarizationVector,
    WaveParams,
    circular_basis,
    orthogonal_polarization,
)
from .splitter_core import (
    SplitterCoefficients,
    ValidationReport,
    make_symmetric_splitter,
    pcm_roundtrip,
    two_beam_energy_residual,
    validate_lossless,
)

__all__ = [
    "CONSTANTS",
    "Constants",
    "Direction",
    "PolarizationVector",
    "WaveParams",
    "circular_basis",
    "orthogonal_polarization",
    "SplitterCoefficients",
    "ValidationReport",
    "make_symmetric_splitter",
    "pcm_roundtrip",
    "two_beam_energy_residual",
    "validate_lossless",
    "__version__",
]
