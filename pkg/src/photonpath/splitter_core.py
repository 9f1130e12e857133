"""Lossless beam-splitter coefficients and their constraint system.

A splitter is described by four complex Fresnel coefficients: (rho, tau)
for incidence on the front facet and (rho_prime, tau_prime) for incidence
on the back facet.  Absence of absorption, together with time-reversal
symmetry, forces

    |rho|^2 + |tau|^2 = 1,          |rho'|^2 + |tau'|^2 = 1,
    tau' = tau,                     |rho'| = |rho|,
    phi_tau = (phi_rho + phi_rho')/2 +/- pi/2.

The relation between phi_rho and phi_rho' is *not* constrained; both are
free inputs here.  The sign of the pi/2 offset is likewise a physical
ambiguity: construction picks +pi/2, validation accepts either sign.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

#: Tolerance used by :func:`validate_lossless`; looser than arithmetic
#: precision so that coefficients round-tripped through text files pass.
VALIDATION_TOL = 1e-9


@dataclass(frozen=True)
class SplitterCoefficients:
    """Front-side (rho, tau) and back-side (rho_prime, tau_prime) coefficients."""

    rho: complex
    tau: complex
    rho_prime: complex
    tau_prime: complex

    def is_symmetric(self, tol: float = VALIDATION_TOL) -> bool:
        """True when front and back coefficients coincide."""
        return (
            abs(self.rho - self.rho_prime) <= tol
            and abs(self.tau - self.tau_prime) <= tol
        )

    def is_fifty_fifty(self, tol: float = VALIDATION_TOL) -> bool:
        """True when all four coefficients carry half the power."""
        return all(
            abs(abs(c) ** 2 - 0.5) <= tol
            for c in (self.rho, self.tau, self.rho_prime, self.tau_prime)
        )


@dataclass(frozen=True)
class ValidationReport:
    """Per-constraint residuals for the lossless-splitter conditions.

    ``residual_front`` / ``residual_back`` are the deviations of the two
    power sums from 1; ``residual_tau_equal`` is |tau' - tau|;
    ``residual_rho_mod`` is ||rho'| - |rho||; ``residual_phase`` is
    cos(2*phi_tau - phi_rho - phi_rho') + 1, which vanishes for either
    admissible sign of the pi/2 offset.  The phase residual is reported as
    0 (vacuous) when any of the participating moduli is zero, since the
    phase of a vanishing coefficient is meaningless.
    """

    residual_front: float
    residual_back: float
    residual_tau_equal: float
    residual_rho_mod: float
    residual_phase: float
    valid: bool

    def residuals(self) -> tuple[float, float, float, float, float]:
        return (
            self.residual_front,
            self.residual_back,
            self.residual_tau_equal,
            self.residual_rho_mod,
            self.residual_phase,
        )

    @property
    def front_power_ok(self) -> bool:
        return self.residual_front < VALIDATION_TOL

    @property
    def back_power_ok(self) -> bool:
        return self.residual_back < VALIDATION_TOL

    @property
    def tau_equal_ok(self) -> bool:
        return self.residual_tau_equal < VALIDATION_TOL

    @property
    def rho_mod_ok(self) -> bool:
        return self.residual_rho_mod < VALIDATION_TOL

    @property
    def phase_ok(self) -> bool:
        return self.residual_phase < VALIDATION_TOL


def make_symmetric_splitter(mod_rho: float, phi_rho: float) -> SplitterCoefficients:
    """Symmetric lossless splitter with |rho| = mod_rho and arg(rho) = phi_rho.

    Since the structure is front-to-back symmetric, rho' = rho and
    tau' = tau with arg(tau) = phi_rho + pi/2 (the + sign convention) and
    |tau| = sqrt(1 - mod_rho^2).
    """
    if not 0.0 <= mod_rho <= 1.0:
        raise ValueError(f"|rho| must lie in [0, 1], got {mod_rho}")
    rho = mod_rho * cmath.exp(1j * phi_rho)
    tau = math.sqrt(1.0 - mod_rho * mod_rho) * cmath.exp(1j * (phi_rho + 0.5 * math.pi))
    return SplitterCoefficients(rho=rho, tau=tau, rho_prime=rho, tau_prime=tau)


def validate_lossless(s: SplitterCoefficients) -> ValidationReport:
    """Evaluate all lossless-splitter constraints; never raises."""
    r_front = abs(abs(s.rho) ** 2 + abs(s.tau) ** 2 - 1.0)
    r_back = abs(abs(s.rho_prime) ** 2 + abs(s.tau_prime) ** 2 - 1.0)
    r_tau = abs(s.tau_prime - s.tau)
    r_mod = abs(abs(s.rho_prime) - abs(s.rho))
    if min(abs(s.rho), abs(s.rho_prime), abs(s.tau)) < VALIDATION_TOL:
        r_phase = 0.0  # mirror or window: phase constraint is vacuous
    else:
        phase = 2.0 * cmath.phase(s.tau) - cmath.phase(s.rho) - cmath.phase(s.rho_prime)
        r_phase = abs(math.cos(phase) + 1.0)
    valid = all(
        r < VALIDATION_TOL for r in (r_front, r_back, r_tau, r_mod, r_phase)
    )
    return ValidationReport(r_front, r_back, r_tau, r_mod, r_phase, valid)


def require_lossless(s: SplitterCoefficients) -> None:
    """Raise ValueError when ``s`` fails the lossless constraint suite."""
    report = validate_lossless(s)
    if not report.valid:
        raise ValueError(
            "splitter violates lossless constraints; residuals "
            f"(front, back, tau, |rho|, phase) = {report.residuals()}"
        )


def pcm_roundtrip(s: SplitterCoefficients) -> tuple[complex, complex]:
    """Phase-conjugate-mirror round trip amplitudes.

    Returning the conjugated reflected and transmitted waves through the
    splitter must rebuild the incident beam in channel 1 and cancel in
    channel 2: channel1 = rho*conj(rho) + tau'*conj(tau) and
    channel2 = tau*conj(rho) + rho'*conj(tau).  A lossless splitter gives
    exactly (1, 0).
    """
    channel1 = s.rho * s.rho.conjugate() + s.tau_prime * s.tau.conjugate()
    channel2 = s.tau * s.rho.conjugate() + s.rho_prime * s.tau.conjugate()
    return channel1, channel2


def two_beam_energy_residual(s: SplitterCoefficients, E1: complex, E2: complex) -> float:
    """Energy imbalance for two beams entering ports 1 and 2.

    Returns |rho*E1 + tau'*E2|^2 + |tau*E1 + rho'*E2|^2 - (|E1|^2 + |E2|^2),
    which vanishes for every lossless splitter and every field pair because
    the cross term rho*conj(tau') + tau*conj(rho') is forced to zero.
    """
    out = abs(s.rho * E1 + s.tau_prime * E2) ** 2 + abs(s.tau * E1 + s.rho_prime * E2) ** 2
    return out - (abs(E1) ** 2 + abs(E2) ** 2)
