"""Single-photon Mach-Zehnder and Sagnac interferometers.

The Mach-Zehnder path sum is encoded as an explicit four-path table; the
Sagnac phase is computed both leg-by-leg in the rotating frame and through
the closed-form area law, and the two routes are cross-checked on every
call.
"""

from __future__ import annotations

import cmath
import warnings
from dataclasses import dataclass

import numpy as np

from .foundations import CONSTANTS, WaveParams
from .splitter_core import SplitterCoefficients, require_lossless


@dataclass(frozen=True)
class MachZehnderConfig:
    """Two splitters and the two path phases phi1 (upper), phi2 (lower).

    The second splitter is met by the upper beam on its back facet and by
    the lower beam on its front facet, so s2 may carry distinct back-side
    coefficients.  In strict mode both splitters must be 50/50, the
    condition for full-contrast switching.
    """

    s1: SplitterCoefficients
    s2: SplitterCoefficients
    phi1: float
    phi2: float
    strict: bool = True


@dataclass(frozen=True)
class SagnacGeometry:
    """Triangular Sagnac loop S -> M1 -> M2 -> S on a rotating stage.

    C is the point where the rotation axis crosses space (any location;
    the phase is independent of it) and Omega the angular-velocity vector.
    """

    S: np.ndarray
    M1: np.ndarray
    M2: np.ndarray
    C: np.ndarray
    Omega: np.ndarray
    wave: WaveParams

    def __post_init__(self) -> None:
        for name in ("S", "M1", "M2", "C", "Omega"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if float(np.linalg.norm(self.area_vector())) <= 0.0:
            raise ValueError("S, M1, M2 are collinear: degenerate interferometer")

    def area_vector(self) -> np.ndarray:
        """Vector area of the loop, oriented with the S -> M1 -> M2 traversal."""
        return 0.5 * np.cross(self.M1 - self.S, self.M2 - self.S)


def mzi_exit_amplitudes(cfg: MachZehnderConfig) -> tuple[complex, complex]:
    """Exit amplitudes of a single photon entering the Mach-Zehnder.

    Four paths: the upper arm reflects at s1 and acquires phi1, the lower
    arm transmits at s1 and acquires phi2; at s2 the upper beam arrives on
    the back facet, the lower beam on the front facet.

        exit 1:  rho1 * tau2' * e^{i phi1}  +  tau1 * rho2  * e^{i phi2}
        exit 2:  rho1 * rho2'' * e^{i phi1} +  tau1 * tau2  * e^{i phi2}

    For lossless splitters |a1|^2 + |a2|^2 = 1 exactly, since the cross
    term tau2'*conj(rho2) + rho2''*conj(tau2) is forced to vanish.
    """
    for label, s in (("s1", cfg.s1), ("s2", cfg.s2)):
        require_lossless(s)
        if cfg.strict and not s.is_fifty_fifty():
            raise ValueError(f"{label} is not a 50/50 splitter (strict mode)")
        if not cfg.strict and not s.is_fifty_fifty():
            warnings.warn(
                f"{label} is not 50/50: exit contrast will be reduced", stacklevel=2
            )
    up = cmath.exp(1j * cfg.phi1)
    lo = cmath.exp(1j * cfg.phi2)
    a_exit1 = cfg.s1.rho * cfg.s2.tau_prime * up + cfg.s1.tau * cfg.s2.rho * lo
    a_exit2 = cfg.s1.rho * cfg.s2.rho_prime * up + cfg.s1.tau * cfg.s2.tau * lo
    return a_exit1, a_exit2


def coherence_margin(path_difference: float, pulse_duration: float, c: float = CONSTANTS.c) -> float:
    """Ratio of the arm path-length difference to the wavepacket length.

    Interference at the second splitter needs this well below 1; a value
    at or above 1 triggers a warning rather than an error, since the model
    itself stays well defined.
    """
    if pulse_duration <= 0.0:
        raise ValueError("pulse duration must be positive")
    margin = abs(path_difference) / (c * pulse_duration)
    if margin >= 1.0:
        warnings.warn(
            "path-length difference exceeds the wavepacket length; the photon "
            "no longer overlaps with itself at the second splitter",
            stacklevel=2,
        )
    return margin


def sagnac_phase(g: SagnacGeometry) -> float:
    """Total rotation-induced phase difference 2*dphi between the two loops.

    Computed two ways and cross-checked on every call:

    * leg by leg: dphi = (k0/c) * sum_i (R_i x r_i) . Omega, where r_i are
      the directed legs S->M1->M2->S and R_i point from C to each leg's
      endpoint, then doubled for the two traversal senses;
    * closed form: 2*dphi = (4 k0 / c) A . Omega with A the oriented loop
      area.

    The value is independent of where the rotation axis crosses space and
    only the Omega component along A contributes.
    """
    k0 = g.wave.k0
    c = CONSTANTS.c
    legs = [
        (g.M1 - g.C, g.M1 - g.S),
        (g.M2 - g.C, g.M2 - g.M1),
        (g.S - g.C, g.S - g.M2),
    ]
    cross_terms = [np.cross(R, r) for R, r in legs]
    leg_sum = 2.0 * (k0 / c) * float(np.dot(np.sum(cross_terms, axis=0), g.Omega))
    closed = (4.0 * k0 / c) * float(np.dot(g.area_vector(), g.Omega))
    # agreement scale set by the summand magnitudes, not the (possibly
    # cancelling) result, so large C offsets do not trip the check
    scale = 2.0 * (k0 / c) * sum(
        float(np.linalg.norm(ct)) * float(np.linalg.norm(g.Omega)) for ct in cross_terms
    )
    if abs(leg_sum - closed) > 1e-12 * max(scale, 1e-300):
        raise AssertionError(
            f"leg-by-leg and area-law phases disagree: {leg_sum} vs {closed}"
        )
    return closed


def sagnac_detection_probability(g: SagnacGeometry, s: SplitterCoefficients) -> float:
    """Probability that the photon reaches the observation plane.

    The clockwise path is reflected twice (rho * rho''), the counter-
    clockwise path transmitted twice (tau * tau'), and the rotation biases
    their phases by +/- dphi:

        P = |rho*rho'' e^{i dphi} + tau*tau' e^{-i dphi}|^2 = sin^2(dphi)

    for any lossless 50/50 splitter, since the double-reflection and
    double-transmission amplitudes differ by 180 degrees at rest.
    """
    require_lossless(s)
    if not s.is_fifty_fifty():
        raise ValueError("Sagnac readout requires a 50/50 splitter")
    dphi = 0.5 * sagnac_phase(g)
    amp = s.rho * s.rho_prime * cmath.exp(1j * dphi) + s.tau * s.tau_prime * cmath.exp(-1j * dphi)
    return abs(amp) ** 2


__all__ = [
    "MachZehnderConfig",
    "SagnacGeometry",
    "mzi_exit_amplitudes",
    "coherence_margin",
    "sagnac_phase",
    "sagnac_detection_probability",
]
