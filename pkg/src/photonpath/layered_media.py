"""Normal-incidence slabs, multilayers, thin sheets, and extinction integrals.

Slab and multilayer coefficients are built by the zero-gap geometric-series
construction: an infinitesimal vacuum gap is inserted between elements, the
multiple reflections are summed, and the gap width is sent to zero.  The
classical 2x2 characteristic-matrix method is deliberately *not* used here;
it serves as the independent oracle in the test suite.

Phase convention: exp(+i(k z - omega t)), so absorption means Im(n) >= 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .foundations import WaveParams

_RESONANCE_GUARD = 1e-15


@dataclass(frozen=True)
class Layer:
    """Homogeneous slab: complex refractive index n, thickness d (m)."""

    n: complex
    d: float

    def __post_init__(self) -> None:
        if self.d < 0.0:
            raise ValueError("layer thickness must be nonnegative")
        if complex(self.n).imag < 0.0:
            raise ValueError("Im(n) < 0 would be a gain medium; out of model")


@dataclass(frozen=True)
class SheetPolarizability:
    """Thin sheet of polarizability eps0*zeta and thickness d << lambda0."""

    zeta: complex
    d: float

    def __post_init__(self) -> None:
        if self.d <= 0.0:
            raise ValueError("sheet thickness must be positive")
        phi = cmath.phase(complex(self.zeta))
        if self.zeta != 0 and not 0.0 < phi < math.pi:
            raise ValueError(
                f"sheet polarizability phase {phi} outside (0, pi): unphysical sheet"
            )


def lossless_sheet(phi_zeta: float, d: float, wave: WaveParams) -> SheetPolarizability:
    """Sheet whose modulus saturates the no-absorption constraint.

    (pi d / lambda0) |zeta| = sin(phi_zeta), so all extracted power is
    re-radiated.
    """
    if not 0.0 < phi_zeta < math.pi:
        raise ValueError("phi_zeta must lie in (0, pi)")
    eta = math.pi * d / wave.lambda0
    return SheetPolarizability(zeta=(math.sin(phi_zeta) / eta) * cmath.exp(1j * phi_zeta), d=d)


def fresnel_semiinfinite(n: complex) -> tuple[complex, complex]:
    """Front-facet coefficients of a semi-infinite medium at normal incidence.

    rho = (1 - n)/(1 + n) and tau = 1 + rho = 2/(1 + n).
    """
    n = complex(n)
    if n == -1:
        raise ValueError("n = -1 makes the Fresnel coefficients singular")
    rho = (1.0 - n) / (1.0 + n)
    return rho, 1.0 + rho


def slab_coefficients(layer: Layer, wave: WaveParams) -> tuple[complex, complex]:
    """Reflection and transmission of a free-standing homogeneous slab.

    With phi = n k0 d and rho the semi-infinite Fresnel coefficient,

        r = (1 - e^{2 i phi}) rho / (1 - rho^2 e^{2 i phi}),
        t = (1 - rho^2) e^{i phi} / (1 - rho^2 e^{2 i phi}).

    For real n the ratio r/t is purely imaginary and |r^2 - t^2| = 1.
    """
    rho, _ = fresnel_semiinfinite(layer.n)
    phase2 = cmath.exp(2j * layer.n * wave.k0 * layer.d)
    denom = 1.0 - rho * rho * phase2
    if abs(denom) < _RESONANCE_GUARD:
        raise ValueError("slab resonance denominator vanished")
    r = (1.0 - phase2) * rho / denom
    t = (1.0 - rho * rho) * cmath.exp(1j * layer.n * wave.k0 * layer.d) / denom
    return r, t


def bilayer_coefficients(
    r1: complex, t1: complex, r2: complex, t2: complex
) -> tuple[complex, complex]:
    """Zero-gap combination of two symmetric elements.

    rho = [r1 - (r1^2 - t1^2) r2] / (1 - r1 r2) and
    tau = t1 t2 / (1 - r1 r2).  Both inputs must be symmetric elements
    (same coefficients from either side); tau is then symmetric for the
    pair as well, while the pair's two reflectivities generally differ.
    """
    denom = 1.0 - r1 * r2
    if abs(denom) < _RESONANCE_GUARD:
        raise ValueError("bilayer resonance denominator vanished")
    rho = (r1 - (r1 * r1 - t1 * t1) * r2) / denom
    tau = t1 * t2 / denom
    return rho, tau


@dataclass(frozen=True)
class _Element:
    """Front/back reflection and (direction-independent) transmission."""

    r_front: complex
    t: complex
    r_back: complex


def _compose(a: _Element, b: _Element) -> _Element:
    """Zero-gap fold of two possibly asymmetric elements (a in front of b)."""
    denom = 1.0 - a.r_back * b.r_front
    if abs(denom) < _RESONANCE_GUARD:
        raise ValueError("multilayer resonance denominator vanished")
    return _Element(
        r_front=a.r_front + a.t * a.t * b.r_front / denom,
        t=a.t * b.t / denom,
        r_back=b.r_back + b.t * b.t * a.r_back / denom,
    )


@dataclass(frozen=True)
class StackCoefficients:
    """Reflection/transmission of a stack for both illumination sides."""

    rho_front: complex
    tau_front: complex
    rho_back: complex
    tau_back: complex


def multilayer_coefficients(stack: list[Layer], wave: WaveParams) -> StackCoefficients:
    """Coefficients of a vacuum-bounded stack, front and back illumination.

    Per-layer slab coefficients are folded with the zero-gap rule; the back
    orientation is computed by independently folding the reversed stack, so
    the front/back transmissivity equality (reciprocity) is a genuine
    numerical outcome rather than a construction.
    """
    if not stack:
        raise ValueError("stack must contain at least one layer")
    elements = []
    for layer in stack:
        r, t = slab_coefficients(layer, wave)
        elements.append(_Element(r_front=r, t=t, r_back=r))
    forward = elements[0]
    for element in elements[1:]:
        forward = _compose(forward, element)
    backward = elements[-1]
    for element in reversed(elements[:-1]):
        backward = _compose(backward, element)
    return StackCoefficients(
        rho_front=forward.r_front,
        tau_front=forward.t,
        rho_back=backward.r_front,
        tau_back=backward.t,
    )


@dataclass(frozen=True)
class SheetResponse:
    """Thin-sheet transmission/reflection coefficients and bulk response."""

    t_coeff: complex
    r_coeff: complex
    reflectance: float
    transmittance: float
    chi_e: complex
    lossless: bool


def thin_sheet_response(sp: SheetPolarizability, wave: WaveParams) -> SheetResponse:
    """Response of a sub-wavelength sheet of polarizability eps0*zeta.

    The excited sheet radiates identical waves forward and backward, so
    the transmitted and reflected coefficients are 1 + i(pi d/lambda0)zeta
    and i(pi d/lambda0)zeta.  The no-absorption constraint is
    (pi d/lambda0)|zeta| = sin(phi_zeta); on it, reflectance = sin^2 and
    transmittance = cos^2 of phi_zeta and chi_e is real (positive for a
    dielectric, negative for a lossless metal).  Sheets radiating more
    than they extract (gain) are rejected.
    """
    if sp.d >= wave.lambda0 / 20.0:
        raise ValueError("sheet is not thin: require d < lambda0/20")
    eta = math.pi * sp.d / wave.lambda0
    zeta = complex(sp.zeta)
    phi_z = cmath.phase(zeta) if zeta != 0 else 0.0
    if zeta != 0 and eta * abs(zeta) > math.sin(phi_z) + 1e-9:
        raise ValueError(
            "(pi d/lambda0)|zeta| exceeds sin(phi_zeta): gain medium, out of model"
        )
    r = 1j * eta * zeta
    t = 1.0 + r
    chi_e = zeta / (1.0 + 1j * eta * zeta) if zeta != 0 else 0.0 + 0.0j
    # zeta = 0 is a trivially lossless (empty) sheet
    lossless = zeta == 0 or abs(eta * abs(zeta) - math.sin(phi_z)) <= 1e-9
    return SheetResponse(
        t_coeff=t,
        r_coeff=r,
        reflectance=abs(r) ** 2,
        transmittance=abs(t) ** 2,
        chi_e=chi_e,
        lossless=lossless,
    )


def sheet_time_reversal_roundtrip(
    sp: SheetPolarizability, wave: WaveParams, E_in: complex = 1.0
) -> tuple[complex, complex]:
    """Phase-conjugate-mirror round trip through a lossless sheet.

    The transmitted and reflected beams are conjugated by distant PCMs and
    sent back.  On the left the returning beams recombine into the
    conjugated incident wave, amplitude conj(E_in); on the right they
    cancel exactly:

        left  = (conj(t) t + conj(r) r) conj(E_in) -> conj(E_in),
        right = (conj(t) r + conj(r) t) conj(E_in) -> 0.

    A lossy sheet breaks the time-reversal argument and is rejected.
    """
    response = thin_sheet_response(sp, wave)
    if not response.lossless:
        raise ValueError("time-reversal round trip requires a lossless sheet")
    t, r = response.t_coeff, response.r_coeff
    back = complex(E_in).conjugate()
    left = (t.conjugate() * t + r.conjugate() * r) * back
    right = (t.conjugate() * r + r.conjugate() * t) * back
    return left, right


def extinction_reflection(n: complex, wave: WaveParams) -> complex:
    """Reflected amplitude rebuilt from the backward radiation of all depths.

    Every sheet of the half-space at depth z radiates backward with
    amplitude tau (i pi/lambda0) chi_e e^{i(n+1) k0 z} dz per unit incident
    field; the closed-form antiderivative (boundary term at infinity
    discarded, or damped by Im(n) > 0) sums to exactly (1 - n)/(1 + n).
    """
    n = complex(n)
    if n.imag < 0.0:
        raise ValueError("Im(n) < 0 would be a gain medium; out of model")
    if n == -1:
        raise ValueError("n = -1 is singular")
    chi_e = n * n - 1.0
    _, tau = fresnel_semiinfinite(n)
    # integral of e^{i(n+1)k0 z} from 0 to infinity -> -1/(i(n+1)k0)
    return tau * (1j * math.pi / wave.lambda0) * chi_e * (-1.0 / (1j * (n + 1.0) * wave.k0))


def _segment_integral(w: complex, z0: float) -> complex:
    """Integral of e^{w z} over [0, z0], stable for small |w z0|."""
    wz = w * z0
    if abs(wz) < 1e-6:
        return z0 * (1.0 + wz / 2.0 + wz * wz / 6.0)
    return (cmath.exp(wz) - 1.0) / w


def extinction_interior(n: complex, z0: float, wave: WaveParams) -> tuple[complex, complex]:
    """Radiated-field decomposition inside the medium at depth z0.

    Summing forward radiation from depths [0, z0] and backward radiation
    from [z0, inf) gives (2/(n+1)) e^{i n k0 z0} - e^{i k0 z0}: the first
    term is the actual transmitted field, the second exactly cancels the
    free-propagating incident wave.  Returned as
    (transmitted_term, cancellation_term).
    """
    n = complex(n)
    if z0 <= 0.0:
        raise ValueError("interior depth z0 must be positive")
    if n.imag < 0.0:
        raise ValueError("Im(n) < 0 would be a gain medium; out of model")
    k0 = wave.k0
    chi_e = n * n - 1.0
    _, tau = fresnel_semiinfinite(n)
    amp = 0.5j * k0 * chi_e * tau
    fwd = amp * cmath.exp(1j * k0 * z0) * _segment_integral(1j * (n - 1.0) * k0, z0)
    bwd = amp * cmath.exp(-1j * k0 * z0) * (
        -cmath.exp(1j * (n + 1.0) * k0 * z0) / (1j * (n + 1.0) * k0)
    )
    total = fwd + bwd
    cancellation = -cmath.exp(1j * k0 * z0)
    transmitted = total - cancellation
    expected = (2.0 / (n + 1.0)) * cmath.exp(1j * n * k0 * z0)
    if abs(transmitted - expected) > 1e-9 * max(1.0, abs(expected)):
        raise AssertionError("interior decomposition failed its closed-form check")
    return transmitted, cancellation
