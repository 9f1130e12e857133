"""Shared numeric vocabulary: constants, directions, polarization vectors.

Conventions used throughout the package:

* spherical angles ``(theta, phi)`` with ``theta`` measured from the +z axis
  and ``phi`` from +x in the xy-plane, so the propagation unit vector is
  ``k_hat = (sin(theta)cos(phi), sin(theta)sin(phi), cos(theta))``;
* right/left circular polarization written on the transverse basis
  ``(eps_prime, eps_dprime)`` as ``eps_prime +/- i*eps_dprime``;
* complex polarization unit vectors ``e = e' + i e''`` normalized so that
  ``e . conj(e) = 1``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Constants:
    """Physical constants, SI.

    The set is built self-consistently from the exact defined values of
    c, hbar and kB plus mu0 = 4*pi*1e-7 H/m, so that the identities
    c = 1/sqrt(mu0*eps0), Z0 = sqrt(mu0/eps0) and c*eps0*Z0 = 1 hold to
    machine precision rather than only to the experimental uncertainty
    of the measured mu0.
    """

    c: float = 299_792_458.0              # speed of light, m/s (exact)
    hbar: float = 1.054_571_817e-34       # reduced Planck constant, J s
    kB: float = 1.380_649e-23             # Boltzmann constant, J/K (exact)
    mu0: float = 4.0e-7 * math.pi         # vacuum permeability, H/m
    eps0: float = field(init=False)       # vacuum permittivity, F/m
    Z0: float = field(init=False)         # free-space impedance, ohm

    def __post_init__(self) -> None:
        object.__setattr__(self, "eps0", 1.0 / (self.mu0 * self.c**2))
        object.__setattr__(self, "Z0", self.mu0 * self.c)


CONSTANTS = Constants()


@dataclass(frozen=True)
class Direction:
    """Propagation direction given by polar angle theta and azimuth phi (rad)."""

    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        object.__setattr__(self, "phi", self.phi % _TWO_PI)

    def unit_vector(self) -> np.ndarray:
        st, ct = math.sin(self.theta), math.cos(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), ct])

    def antipode(self) -> "Direction":
        """Direction of a photon retracing this one's path backwards."""
        return Direction(math.pi - self.theta, self.phi + math.pi)


@dataclass(frozen=True)
class WaveParams:
    """Monochromatic wave parameters: omega (rad/s), k0 (1/m), lambda0 (m)."""

    omega: float
    k0: float
    lambda0: float

    def __post_init__(self) -> None:
        if self.omega <= 0.0:
            raise ValueError("omega must be positive")
        if abs(self.k0 * self.lambda0 - _TWO_PI) > 1e-12 * _TWO_PI:
            raise ValueError("inconsistent wave parameters: k0*lambda0 != 2*pi")

    @classmethod
    def from_wavelength(cls, lambda0: float, constants: Constants = CONSTANTS) -> "WaveParams":
        if lambda0 <= 0.0:
            raise ValueError("lambda0 must be positive")
        k0 = _TWO_PI / lambda0
        return cls(omega=k0 * constants.c, k0=k0, lambda0=lambda0)

    @classmethod
    def from_omega(cls, omega: float, constants: Constants = CONSTANTS) -> "WaveParams":
        if omega <= 0.0:
            raise ValueError("omega must be positive")
        k0 = omega / constants.c
        return cls(omega=omega, k0=k0, lambda0=_TWO_PI / k0)


@dataclass(frozen=True)
class PolarizationVector:
    """Complex transverse polarization unit vector e = e' + i e''.

    Normalization e . conj(e) = 1 is enforced at construction (tolerance
    1e-9); the real and imaginary parts e', e'' are not required to be
    mutually perpendicular.
    """

    ex: complex
    ey: complex
    ez: complex = 0.0

    def __post_init__(self) -> None:
        if abs(self.norm_sq() - 1.0) > 1e-9:
            raise ValueError(
                f"polarization vector not normalized: e.conj(e) = {self.norm_sq()!r}"
            )

    def norm_sq(self) -> float:
        return abs(self.ex) ** 2 + abs(self.ey) ** 2 + abs(self.ez) ** 2

    def as_array(self) -> np.ndarray:
        return np.array([self.ex, self.ey, self.ez], dtype=complex)

    @property
    def e_prime(self) -> np.ndarray:
        return self.as_array().real

    @property
    def e_dprime(self) -> np.ndarray:
        return self.as_array().imag

    @classmethod
    def from_components(cls, components) -> "PolarizationVector":
        """Build from any 2- or 3-sequence, normalizing to unit e.conj(e)."""
        v = np.asarray(list(components) + [0.0] * (3 - len(components)), dtype=complex)
        norm = math.sqrt(float(np.sum(np.abs(v) ** 2)))
        if norm == 0.0:
            raise ValueError("cannot normalize a zero polarization vector")
        v = v / norm
        return cls(complex(v[0]), complex(v[1]), complex(v[2]))

    @classmethod
    def linear(cls, angle: float) -> "PolarizationVector":
        """Linear polarization at ``angle`` from +x in the transverse plane."""
        return cls(math.cos(angle), math.sin(angle), 0.0)

    @classmethod
    def circular(cls, handedness: int) -> "PolarizationVector":
        """(x +/- i y)/sqrt(2) for handedness +1 (RCP) or -1 (LCP)."""
        if handedness not in (+1, -1):
            raise ValueError("handedness must be +1 or -1")
        s = 1.0 / math.sqrt(2.0)
        return cls(s, 1j * handedness * s, 0.0)


def circular_basis(d: Direction) -> tuple[np.ndarray, np.ndarray]:
    """Real orthonormal transverse pair (eps_prime, eps_dprime) for direction d.

    eps_prime lies in the plane containing k_hat and z_hat; eps_dprime is
    perpendicular to that plane.  Both are unit vectors orthogonal to
    k_hat(d) and to each other, and eps_prime x eps_dprime = k_hat.  RCP and
    LCP states along d are (eps_prime + i*eps_dprime) and
    (eps_prime - i*eps_dprime) up to 1/sqrt(2).
    """
    st, ct = math.sin(d.theta), math.cos(d.theta)
    sp, cp = math.sin(d.phi), math.cos(d.phi)
    eps_prime = np.array([-ct * cp, -ct * sp, st])
    eps_dprime = np.array([sp, -cp, 0.0])
    return eps_prime, eps_dprime


def orthogonal_polarization(e1: PolarizationVector) -> PolarizationVector:
    """Polarization state orthogonal to ``e1`` in the sense e1 . conj(e2) = 0.

    ``e1`` must live in the transverse (x, y) plane.  The construction takes
    |e2x| = |e1y|, |e2y| = |e1x| and phase difference
    arg(e2x) - arg(e2y) = arg(e1x) - arg(e1y) + pi, with the remaining free
    global phase fixed by the convention arg(e2x) = 0.
    """
    if abs(e1.ez) > 1e-12:
        raise ValueError("orthogonal_polarization expects a transverse (x, y) state")
    if abs(e1.norm_sq() - 1.0) > 1e-9:
        raise ValueError("input polarization vector is not normalized")
    phi1x = cmath.phase(e1.ex) if abs(e1.ex) > 0.0 else 0.0
    phi1y = cmath.phase(e1.ey) if abs(e1.ey) > 0.0 else 0.0
    e2x = abs(e1.ey)
    e2y = abs(e1.ex) * cmath.exp(1j * (phi1y - phi1x - math.pi))
    return PolarizationVector(e2x, e2y, 0.0)
