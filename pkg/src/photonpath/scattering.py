"""Electric and magnetic point-dipole scattering with polarization channels.

Directions and tensors live in one canonical spherical frame in which the
transverse basis of :func:`photonpath.foundations.circular_basis` is built.
Forward-scattering work (optical theorem) is usually stated in a "lab"
frame whose z-axis is the propagation direction; the two frames are
related by a cyclic axis relabeling exposed here as explicit adapters, so
no silent axis confusion can creep in:

    canonical (x, y, z)  <->  lab (y, z, x).

Scattering amplitudes carry volts: probabilities per unit area require a
further normalization by the wavepacket cross-section, which is the
caller's concern and is not applied here.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Literal, Sequence, Union

import numpy as np

from .foundations import CONSTANTS, Constants, Direction, WaveParams

Kind = Literal["electric", "magnetic"]


# ---------------------------------------------------------------------------
# frame adapters
# ---------------------------------------------------------------------------

def lab_to_canonical(v: np.ndarray) -> np.ndarray:
    """Map a lab-frame vector (beam along lab z) to canonical-frame components."""
    v = np.asarray(v)
    return np.array([v[1], v[2], v[0]])


def canonical_to_lab(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`lab_to_canonical`."""
    v = np.asarray(v)
    return np.array([v[2], v[0], v[1]])


def direction_from_vector(v: np.ndarray) -> Direction:
    """Canonical-frame Direction of a (not necessarily unit) vector."""
    v = np.asarray(v, dtype=float)
    r = float(np.linalg.norm(v))
    if r == 0.0:
        raise ValueError("zero vector has no direction")
    return Direction(math.acos(max(-1.0, min(1.0, v[2] / r))), math.atan2(v[1], v[0]))


#: Canonical-frame direction of a beam propagating along lab +z.
FORWARD = Direction(0.5 * math.pi, 0.5 * math.pi)


# ---------------------------------------------------------------------------
# tensors, channels, assemblies
# ---------------------------------------------------------------------------

def _as_tensor(matrix) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (3, 3):
        raise ValueError(f"response tensor must be 3x3, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError("response tensor entries must be finite")
    return m


@dataclass(frozen=True)
class PolarizabilityTensor:
    """Complex 3x3 electric response p = a . E (SI: C m^2/V)."""

    a: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _as_tensor(self.a))

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        scale = float(np.max(np.abs(self.a))) or 1.0
        return bool(np.max(np.abs(self.a - self.a.T)) <= tol * scale)

    @classmethod
    def isotropic(cls, alpha: complex) -> "PolarizabilityTensor":
        return cls(alpha * np.eye(3))


@dataclass(frozen=True)
class MagnetizabilityTensor:
    """Complex 3x3 magnetic response m = b . H."""

    b: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", _as_tensor(self.b))

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        scale = float(np.max(np.abs(self.b))) or 1.0
        return bool(np.max(np.abs(self.b - self.b.T)) <= tol * scale)

    @classmethod
    def isotropic(cls, beta: complex) -> "MagnetizabilityTensor":
        return cls(beta * np.eye(3))


Tensor = Union[PolarizabilityTensor, MagnetizabilityTensor]


@dataclass(frozen=True)
class ScatterChannel:
    """One in/out combination of directions and circular polarizations.

    pol flags are +1 for RCP and -1 for LCP, defined on the transverse
    basis of the respective direction.
    """

    dir_in: Direction
    pol_in: int
    dir_out: Direction
    pol_out: int

    def __post_init__(self) -> None:
        for flag in (self.pol_in, self.pol_out):
            if flag not in (+1, -1):
                raise ValueError(f"polarization flag must be +1 or -1, got {flag}")

    def reversed(self) -> "ScatterChannel":
        """Reciprocal channel: directions swapped, RCP/LCP roles exchanged."""
        return ScatterChannel(
            dir_in=self.dir_out,
            pol_in=-self.pol_out,
            dir_out=self.dir_in,
            pol_out=-self.pol_in,
        )


@dataclass(frozen=True)
class Scatterer:
    """A point scatterer: position plus electric or magnetic response."""

    position: np.ndarray
    tensor: Tensor

    def __post_init__(self) -> None:
        object.__setattr__(self, "position", np.asarray(self.position, dtype=float))

    @property
    def kind(self) -> Kind:
        return "electric" if isinstance(self.tensor, PolarizabilityTensor) else "magnetic"

    @property
    def matrix(self) -> np.ndarray:
        return self.tensor.a if isinstance(self.tensor, PolarizabilityTensor) else self.tensor.b


@dataclass(frozen=True)
class ScattererAssembly:
    """A collection of point scatterers at pairwise distinct positions."""

    scatterers: tuple[Scatterer, ...]

    def __init__(self, scatterers: Sequence[Scatterer]) -> None:
        object.__setattr__(self, "scatterers", tuple(scatterers))
        pts = [s.position for s in self.scatterers]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if np.array_equal(pts[i], pts[j]):
                    raise ValueError("scatterer positions must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.scatterers)

    def __iter__(self):
        return iter(self.scatterers)


@dataclass(frozen=True)
class PointDipole:
    """A probe dipole used as path-sum source or destination."""

    position: np.ndarray
    moment: np.ndarray
    kind: Kind

    def __post_init__(self) -> None:
        object.__setattr__(self, "position", np.asarray(self.position, dtype=float))
        object.__setattr__(self, "moment", np.asarray(self.moment, dtype=complex))
        if self.kind not in ("electric", "magnetic"):
            raise ValueError(f"kind must be 'electric' or 'magnetic', got {self.kind!r}")


# ---------------------------------------------------------------------------
# polarization rows/columns for the four RCP/LCP channels
# ---------------------------------------------------------------------------

def _electric_column(d: Direction, s: int) -> np.ndarray:
    """Incident E-field direction of an RCP (+1) / LCP (-1) photon along d."""
    st, ct = math.sin(d.theta), math.cos(d.theta)
    sp, cp = math.sin(d.phi), math.cos(d.phi)
    return np.array([-ct * cp + 1j * s * sp, -ct * sp - 1j * s * cp, st])


def _electric_row(d: Direction, s: int) -> np.ndarray:
    """Projection row extracting the RCP/LCP amplitude radiated along d."""
    st, ct = math.sin(d.theta), math.cos(d.theta)
    sp, cp = math.sin(d.phi), math.cos(d.phi)
    return np.array([-ct * cp - 1j * s * sp, -ct * sp + 1j * s * cp, st])


def _magnetic_column(d: Direction, s: int) -> np.ndarray:
    """Incident H-field direction (up to 1/Z0) of an RCP/LCP photon along d."""
    st, ct = math.sin(d.theta), math.cos(d.theta)
    sp, cp = math.sin(d.phi), math.cos(d.phi)
    return np.array([sp + 1j * s * ct * cp, -cp + 1j * s * ct * sp, -1j * s * st])


def _magnetic_row(d: Direction, s: int) -> np.ndarray:
    st, ct = math.sin(d.theta), math.cos(d.theta)
    sp, cp = math.sin(d.phi), math.cos(d.phi)
    return np.array([sp - 1j * s * ct * cp, -cp - 1j * s * ct * sp, 1j * s * st])


# ---------------------------------------------------------------------------
# single-dipole radiation and channel amplitudes
# ---------------------------------------------------------------------------

def dipole_radiated_field(
    p: np.ndarray,
    d: Direction,
    r: float,
    wave: WaveParams,
    constants: Constants = CONSTANTS,
) -> np.ndarray:
    """Far-zone E-field of an oscillating electric dipole p at distance r along d.

    E = (k0^2 e^{i k0 r} / (4 pi eps0 r)) M p with M = I - u u^T the
    transverse projector onto the plane perpendicular to the observation
    direction u; M is symmetric and invariant under u -> -u, which is the
    geometric root of reciprocity.
    """
    if r <= 0.0:
        raise ValueError("observation distance must be positive")
    p = np.asarray(p, dtype=complex)
    u = d.unit_vector()
    prefactor = wave.k0**2 * cmath.exp(1j * wave.k0 * r) / (4.0 * math.pi * constants.eps0 * r)
    return prefactor * (p - u * np.dot(u, p))


def electric_scattering_amplitude(
    alpha: PolarizabilityTensor,
    ch: ScatterChannel,
    E_in: complex,
    wave: WaveParams,
    constants: Constants = CONSTANTS,
) -> complex:
    """RCP/LCP scattering amplitude of an electric point scatterer.

    The incident photon induces p = a . (column of its channel) E_in and the
    requested circular component of the radiated field is extracted by the
    outgoing row, with overall prefactor k0^2/(8 pi eps0).
    """
    col = _electric_column(ch.dir_in, ch.pol_in)
    row = _electric_row(ch.dir_out, ch.pol_out)
    pref = wave.k0**2 / (8.0 * math.pi * constants.eps0)
    return pref * complex(row @ (alpha.a @ col)) * E_in


def magnetic_scattering_amplitude(
    beta: MagnetizabilityTensor,
    ch: ScatterChannel,
    E_in: complex,
    wave: WaveParams,
    constants: Constants = CONSTANTS,
) -> complex:
    """RCP/LCP scattering amplitude of a magnetic point scatterer.

    The incident H-field is Z0^-1 E_in times the magnetic channel column;
    the induced moment m = b . H radiates with prefactor c k0^2 / (8 pi).
    """
    col = _magnetic_column(ch.dir_in, ch.pol_in) / constants.Z0
    row = _magnetic_row(ch.dir_out, ch.pol_out)
    pref = constants.c * wave.k0**2 / (8.0 * math.pi)
    return pref * complex(row @ (beta.b @ col)) * E_in


@dataclass(frozen=True)
class ReciprocityReport:
    """Outcome of a randomized channel-reversal comparison."""

    passed: bool
    max_difference: float
    amplitude_scale: float
    trials: int

    @property
    def max_relative_difference(self) -> float:
        return self.max_difference / self.amplitude_scale if self.amplitude_scale else 0.0


def reciprocity_check(
    tensor: Tensor,
    trials: int,
    seed: int,
    wave: WaveParams | None = None,
    constants: Constants = CONSTANTS,
) -> ReciprocityReport:
    """Compare each random channel against its reversed channel.

    For a symmetric response tensor the amplitude is invariant under
    swapping (theta_in, phi_in) with (theta_out, phi_out) while exchanging
    the RCP/LCP roles; an asymmetric (e.g. gyrotropic) tensor fails, which
    is the physics rather than an error, so a failing report is returned
    instead of raising.
    """
    if trials <= 0:
        raise ValueError("trials must be positive")
    wave = wave or WaveParams.from_wavelength(633e-9)
    rng = np.random.default_rng(seed)
    if isinstance(tensor, PolarizabilityTensor):
        amplitude = lambda ch: electric_scattering_amplitude(tensor, ch, 1.0, wave, constants)
    else:
        amplitude = lambda ch: magnetic_scattering_amplitude(tensor, ch, 1.0, wave, constants)

    max_diff = 0.0
    scale = 0.0
    for _ in range(trials):
        ch = ScatterChannel(
            dir_in=_random_direction(rng),
            pol_in=int(rng.choice([-1, 1])),
            dir_out=_random_direction(rng),
            pol_out=int(rng.choice([-1, 1])),
        )
        forward = amplitude(ch)
        backward = amplitude(ch.reversed())
        max_diff = max(max_diff, abs(forward - backward))
        scale = max(scale, abs(forward), abs(backward))
    passed = max_diff < 1e-10 * scale if scale > 0.0 else True
    return ReciprocityReport(passed, max_diff, scale, trials)


def _random_direction(rng: np.random.Generator) -> Direction:
    return Direction(
        theta=math.acos(rng.uniform(-1.0, 1.0)),
        phi=rng.uniform(0.0, 2.0 * math.pi),
    )


# ---------------------------------------------------------------------------
# multiple-scattering path sum
# ---------------------------------------------------------------------------

_SEQUENCE_CAP = 10_000_000


def _leg_fields(
    kind: Kind,
    moment: np.ndarray,
    from_pos: np.ndarray,
    to_pos: np.ndarray,
    wave: WaveParams,
    constants: Constants,
) -> tuple[np.ndarray, np.ndarray]:
    """Far-field (E, H) radiated by a point dipole over one propagation leg."""
    R = to_pos - from_pos
    r = float(np.linalg.norm(R))
    if r == 0.0:
        raise ValueError("coincident positions in the path sum")
    u = R / r
    spherical = cmath.exp(1j * wave.k0 * r) / r
    k2 = wave.k0**2
    transverse = moment - u * np.dot(u, moment)
    if kind == "electric":
        E = (k2 / (4.0 * math.pi * constants.eps0)) * spherical * transverse
        H = (constants.c * k2 / (4.0 * math.pi)) * spherical * np.cross(u, moment)
    else:
        E = -(constants.c * k2 / (4.0 * math.pi)) * spherical * np.cross(u, moment)
        H = (constants.c * k2 / (4.0 * math.pi * constants.Z0)) * spherical * transverse
    return E, H


def multi_scatterer_signal(
    source: PointDipole,
    assembly: ScattererAssembly,
    dest: PointDipole,
    max_order: int,
    wave: WaveParams,
    constants: Constants = CONSTANTS,
) -> complex:
    """Coherent path sum of the received signal E_d . p_d (or H_d . m_d).

    Photons may travel directly from source to destination or bounce off
    any sequence of up to ``max_order`` scatterers (never the same one
    twice in a row).  Every leg is propagated with the far-field dipole
    pattern and 1/r spherical factor; at each scatterer the induced moment
    is tensor . E (electric) or tensor . H (magnetic).

    The returned value is the dot product of the total received field with
    the destination moment: E_d . p_d for an electric probe, H_d . m_d for
    a magnetic one.  With symmetric tensors, exchanging source and
    destination reproduces the same value for like probes and the negated
    value for mixed electric/magnetic probes.
    """
    if max_order < 0:
        raise ValueError("max_order must be nonnegative")
    K = len(assembly)
    count, per_order = 1, 1
    for order in range(1, max_order + 1):
        per_order = K if order == 1 else per_order * max(K - 1, 0)
        count += per_order
        if count > _SEQUENCE_CAP:
            raise ValueError(
                f"path enumeration would exceed {_SEQUENCE_CAP} sequences; "
                "reduce max_order or the assembly size"
            )
    positions = [source.position, dest.position] + [s.position for s in assembly]
    for i in range(len(positions)):
        for j in range(i + 1, len(positions)):
            if np.array_equal(positions[i], positions[j]):
                raise ValueError("source, destination, and scatterer positions must be distinct")

    def coupling(kind: Kind, moment: np.ndarray, pos: np.ndarray) -> complex:
        E, H = _leg_fields(kind, moment, pos, dest.position, wave, constants)
        field = E if dest.kind == "electric" else H
        return complex(np.dot(field, dest.moment))

    def expand(kind: Kind, moment: np.ndarray, pos: np.ndarray, left: int, last: int) -> complex:
        total = coupling(kind, moment, pos)
        if left > 0:
            for idx, sc in enumerate(assembly):
                if idx == last:
                    continue
                E, H = _leg_fields(kind, moment, pos, sc.position, wave, constants)
                excitation = E if sc.kind == "electric" else H
                new_moment = sc.matrix @ excitation
                total += expand(sc.kind, new_moment, sc.position, left - 1, idx)
        return total

    return expand(source.kind, source.moment, source.position, max_order, -1)


# ---------------------------------------------------------------------------
# power balance, polarizability bound, susceptibility map
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerBalance:
    """Radiated, incoming, and absorbed powers of a driven scalar dipole."""

    P_out: float
    P_in_mag: float
    P_abs: float
    physical: bool


def dipole_power_balance(
    alpha_scalar: complex,
    E0: float,
    wave: WaveParams,
    constants: Constants = CONSTANTS,
) -> PowerBalance:
    """Energy bookkeeping for a small particle of scalar polarizability alpha.

    P_out = |alpha|^2 E0^2 (omega/c)^4 / (12 pi eps0^2 Z0) is the power
    re-radiated by the induced dipole; the cross term between incident and
    radiated fields carries |P_in| = |alpha| E0^2 omega sin(phi_alpha)/2
    into any enclosing sphere (the sign convention being inflow), which
    equals the power P_abs delivered directly to the dipole.  A physical
    particle has P_in >= P_out; the flag records violations instead of
    raising.
    """
    if E0 <= 0.0:
        raise ValueError("E0 must be positive")
    mod_a = abs(alpha_scalar)
    phi_a = cmath.phase(alpha_scalar)
    omega = wave.omega
    eps0, Z0, c = constants.eps0, constants.Z0, constants.c
    P_out = mod_a**2 * E0**2 * (omega / c) ** 4 / (12.0 * math.pi * eps0**2 * Z0)
    P_in_mag = mod_a * E0**2 * (omega / c) * math.sin(phi_a) / (2.0 * eps0 * Z0)
    P_abs = 0.5 * mod_a * E0**2 * omega * math.sin(phi_a)
    if abs(P_in_mag - P_abs) > 1e-12 * max(abs(P_abs), 1e-300):
        raise AssertionError("spherical-inflow and direct absorption powers disagree")
    physical = P_in_mag >= P_out * (1.0 - 1e-12)
    return PowerBalance(P_out=P_out, P_in_mag=P_in_mag, P_abs=P_abs, physical=physical)


@dataclass(frozen=True)
class BoundCheck:
    """Upper polarizability bound and whether |alpha| satisfies it."""

    bound: float
    satisfied: bool


def polarizability_bound(alpha_scalar: complex, wave: WaveParams, constants: Constants = CONSTANTS) -> BoundCheck:
    """Check |alpha| <= 3 eps0 lambda0^3 sin(phi_alpha) / (2 pi)^2.

    The bound expresses that a dipole cannot radiate more power than it
    extracts from the incident beam; equality holds for lossless
    scatterers.  A vanishing alpha trivially satisfies it; a loss phase
    outside (0, pi) is outside this model and rejected.
    """
    if alpha_scalar == 0:
        return BoundCheck(bound=0.0, satisfied=True)
    phi_a = cmath.phase(alpha_scalar)
    if not 0.0 < phi_a < math.pi:
        raise ValueError(
            f"polarizability phase {phi_a} outside (0, pi): out of the absorption model"
        )
    bound = 3.0 * constants.eps0 * wave.lambda0**3 * math.sin(phi_a) / (2.0 * math.pi) ** 2
    return BoundCheck(bound=bound, satisfied=abs(alpha_scalar) <= bound * (1.0 + 1e-12))


@dataclass(frozen=True)
class SusceptibilityResult:
    """Bulk susceptibility recovered from the dipole polarizability."""

    chi_e: complex
    bound_satisfied: bool
    physical: bool


def susceptibility_map(
    N: float,
    alpha_scalar: complex,
    wave: WaveParams,
    constants: Constants = CONSTANTS,
) -> SusceptibilityResult:
    """Invert the dense-medium relation between N*alpha/eps0 and chi_e.

    With b = 4 pi^2 / (3 N lambda0^3) the forward relation reads
    N alpha / eps0 = [chi_e^-1 + 1/3 - i b]^-1; this solves it for chi_e.
    ``bound_satisfied`` records (N|alpha|/eps0)^-1 >= b / sin(phi_alpha),
    which is equivalent to Im(chi_e) >= 0 (the ``physical`` flag).
    """
    if N <= 0.0:
        raise ValueError("dipole density must be positive")
    if alpha_scalar == 0:
        raise ValueError("alpha = 0 makes the susceptibility inversion singular")
    dimensionless = N * alpha_scalar / constants.eps0
    b = 4.0 * math.pi**2 / (3.0 * N * wave.lambda0**3)
    chi_e = 1.0 / (1.0 / dimensionless - 1.0 / 3.0 + 1j * b)
    phi_a = cmath.phase(alpha_scalar)
    if 0.0 < phi_a < math.pi:
        bound_satisfied = 1.0 / abs(dimensionless) >= b / math.sin(phi_a) * (1.0 - 1e-12)
    else:
        bound_satisfied = False
    physical = chi_e.imag >= -1e-12 * max(1.0, abs(chi_e))
    return SusceptibilityResult(chi_e=chi_e, bound_satisfied=bound_satisfied, physical=physical)


# ---------------------------------------------------------------------------
# optical theorem and the two-particle fringe
# ---------------------------------------------------------------------------

def optical_theorem_cross_section(
    target: Union[ScattererAssembly, Scatterer],
    E_in_plus: complex,
    E_in_minus: complex,
    wave: WaveParams,
    constants: Constants = CONSTANTS,
) -> float:
    """Extinction cross-section from the forward scattering amplitude.

    The incident beam propagates along lab +z with RCP and LCP amplitudes
    E_in_plus and E_in_minus.  Each dipole contributes its forward-scattered
    transverse field to the collective amplitude F defined through
    E_s = (e^{i k0 z0}/z0) F, and

        A = (2 pi / k0) Im[conj(E_in) . F] / (|E+|^2 + |E-|^2).

    A times the incident flux (|E+|^2 + |E-|^2)/Z0 equals the total power
    removed from the beam, by absorption, scattering, or both.  Dipole
    positions drop out of the product and are ignored.
    """
    flux_norm = abs(E_in_plus) ** 2 + abs(E_in_minus) ** 2
    if flux_norm == 0.0:
        raise ValueError("incident amplitudes must not both vanish")
    scatterers = [target] if isinstance(target, Scatterer) else list(target)
    # lab-frame incident fields (transverse plane only)
    E_vec = np.array([E_in_plus + E_in_minus, 1j * (E_in_plus - E_in_minus), 0.0])
    H_vec = np.array([-1j * (E_in_plus - E_in_minus), E_in_plus + E_in_minus, 0.0]) / constants.Z0
    k2 = wave.k0**2
    F = np.zeros(3, dtype=complex)
    for sc in scatterers:
        if sc.kind == "electric":
            p = sc.matrix @ E_vec
            F += (k2 / (4.0 * math.pi * constants.eps0)) * np.array([p[0], p[1], 0.0])
        else:
            m = sc.matrix @ H_vec
            F += (constants.c * k2 / (4.0 * math.pi)) * np.array([m[1], -m[0], 0.0])
    return (2.0 * math.pi / wave.k0) * float(np.dot(E_vec.conjugate(), F).imag) / flux_norm


def two_particle_fringe(
    alpha_scalar: complex,
    d: float,
    wave: WaveParams,
    r0: float,
    x: float,
    out_pol: int,
    constants: Constants = CONSTANTS,
) -> complex:
    """Fringe amplitude for an RCP photon scattered by two identical particles.

    The particles sit a distance d apart along the x-axis and the photon
    arrives along z; at observation coordinate x in a plane a distance r0
    away the RCP (out_pol=+1) or LCP (-1) amplitude per unit incident
    amplitude is

        (alpha k0^2 e^{i k0 r0} / (4 pi eps0 r0)) (sin(theta) +/- 1)
        * cos(pi d x / (lambda0 r0)),

    with theta the angle between the x-axis and the line of sight, so LCP
    light is suppressed near the axis and the fringe period in x is
    lambda0 r0 / d.
    """
    if r0 <= 0.0:
        raise ValueError("observation distance must be positive")
    if out_pol not in (+1, -1):
        raise ValueError("out_pol must be +1 or -1")
    if abs(x) > r0:
        raise ValueError("observation coordinate cannot exceed the distance r0")
    if r0 < 100.0 * d:
        warnings.warn("r0 < 100 d: far-field fringe formula is marginal here", stacklevel=2)
    cos_theta = x / r0
    sin_theta = math.sqrt(max(0.0, 1.0 - cos_theta * cos_theta))
    prefactor = (
        alpha_scalar
        * wave.k0**2
        * cmath.exp(1j * wave.k0 * r0)
        / (4.0 * math.pi * constants.eps0 * r0)
    )
    return prefactor * (sin_theta + out_pol) * math.cos(math.pi * d * x / (wave.lambda0 * r0))
