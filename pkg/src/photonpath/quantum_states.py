"""Single-mode number, coherent, and thermal states: closed-form statistics.

Photon-number distributions, E/B-field expectation values and variances,
the single-mode Poynting vector of a coherent state, composition of
coherent-state generators, and the Bose-Einstein distribution induced by a
Gaussian P-representation.  No operator objects appear here: annihilation
and creation operators enter only through the closed forms they produce.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .foundations import CONSTANTS, Constants, Direction, PolarizationVector, WaveParams

#: Truncate probability mass functions once the analytic tail bound drops
#: below this value.
PMF_TAIL_BOUND = 1e-12


@dataclass(frozen=True)
class NumberState:
    """Fock state |n> with exactly n photons."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 0 or self.n != int(self.n):
            raise ValueError(f"photon number must be a nonnegative integer, got {self.n}")


@dataclass(frozen=True)
class CoherentState:
    """Glauber coherent state |gamma>, eigenstate of the annihilation operator."""

    gamma: complex


@dataclass(frozen=True)
class ThermalState:
    """Single-mode thermal (Bose-Einstein) state.

    Parametrized by zeta = exp(hbar*omega/kB*T) - 1, the inverse of the
    mean photon number.
    """

    zeta: float

    def __post_init__(self) -> None:
        if self.zeta <= 0.0:
            raise ValueError(f"zeta must be positive, got {self.zeta}")

    @property
    def mean_n(self) -> float:
        return 1.0 / self.zeta

    @classmethod
    def from_mean(cls, mean_n: float) -> "ThermalState":
        if mean_n <= 0.0:
            raise ValueError("mean photon number must be positive")
        return cls(zeta=1.0 / mean_n)

    @classmethod
    def from_temperature(
        cls, omega: float, temperature: float, constants: Constants = CONSTANTS
    ) -> "ThermalState":
        if temperature <= 0.0:
            raise ValueError("temperature must be positive")
        return cls(zeta=math.expm1(constants.hbar * omega / (constants.kB * temperature)))


State = Union[NumberState, CoherentState, ThermalState]


@dataclass(frozen=True)
class ModeSpec:
    """A single (omega, k, e) mode quantized in volume V."""

    wave: WaveParams
    khat: Direction
    pol: PolarizationVector
    V: float

    def __post_init__(self) -> None:
        if self.V <= 0.0:
            raise ValueError(f"mode volume must be positive, got {self.V}")
        k = self.khat.unit_vector()
        if abs(np.dot(k, self.pol.as_array())) > 1e-9:
            raise ValueError("polarization must be transverse to the propagation direction")


@dataclass(frozen=True)
class PhotonStatistics:
    """Mean, variance, and truncated pmf of a photon-number distribution."""

    mean: float
    variance: float
    pmf: np.ndarray


@dataclass(frozen=True)
class FieldMoments:
    """First and second moments of the E and B fields at one (r, t) point."""

    mean_E: np.ndarray
    mean_E_sq: float
    var_E: float
    mean_B: np.ndarray
    mean_B_sq: float
    var_B: float


@dataclass(frozen=True)
class GammaComposition:
    """Result of composing two coherent-state generator operators."""

    prefactor: float
    gamma_sum: complex


def _poisson_pmf(mean: float) -> np.ndarray:
    """Poisson pmf truncated where the geometric tail bound < PMF_TAIL_BOUND."""
    if mean == 0.0:
        return np.array([1.0])
    terms = []
    log_p = -mean  # log p(0)
    n = 0
    while True:
        terms.append(math.exp(log_p))
        ratio = mean / (n + 1)
        if ratio < 1.0:
            tail = terms[-1] * ratio / (1.0 - ratio)
            if tail < PMF_TAIL_BOUND:
                break
        n += 1
        log_p += math.log(mean) - math.log(n)
        if n > 100_000:
            raise ValueError("coherent-state mean too large for pmf truncation")
    return np.array(terms)


def _bose_einstein_pmf(zeta: float) -> np.ndarray:
    """Bose-Einstein pmf p(n) = zeta/(zeta+1)^(n+1), tail bound < PMF_TAIL_BOUND."""
    q = 1.0 / (zeta + 1.0)
    # tail beyond N is q^(N+1)
    n_max = max(0, math.ceil(math.log(PMF_TAIL_BOUND) / math.log(q)) - 1)
    n = np.arange(n_max + 1)
    return (1.0 - q) * q**n


def photon_statistics(state: State) -> PhotonStatistics:
    """Photon-number mean, variance, and pmf for a number/coherent/thermal state.

    Number state |n>: mean n, variance 0.  Coherent |gamma>: Poissonian with
    mean = variance = |gamma|^2.  Thermal: Bose-Einstein with mean 1/zeta and
    variance mean + mean^2 (super-Poissonian).
    """
    if isinstance(state, NumberState):
        pmf = np.zeros(state.n + 1)
        pmf[state.n] = 1.0
        return PhotonStatistics(mean=float(state.n), variance=0.0, pmf=pmf)
    if isinstance(state, CoherentState):
        mean = abs(state.gamma) ** 2
        return PhotonStatistics(mean=mean, variance=mean, pmf=_poisson_pmf(mean))
    if isinstance(state, ThermalState):
        mean = state.mean_n
        return PhotonStatistics(
            mean=mean, variance=mean + mean * mean, pmf=_bose_einstein_pmf(state.zeta)
        )
    raise TypeError(f"unsupported state type: {type(state).__name__}")


def field_expectations(
    state: State,
    mode: ModeSpec,
    r: np.ndarray,
    t: float,
    constants: Constants = CONSTANTS,
) -> FieldMoments:
    """E- and B-field means, second moments, and variances at (r, t).

    For number and thermal states the mean fields vanish while
    <E.E> = (n + 1/2) hbar omega / (eps0 V) (with n the photon number or its
    thermal average) and <B.B> = mu0 (n + 1/2) hbar omega / V.  For a
    coherent state the mean fields oscillate like a classical monochromatic
    wave and the variances are the gamma-independent vacuum values
    hbar omega/(2 eps0 V) and mu0 hbar omega/(2 V).
    """
    omega, V = mode.wave.omega, mode.V
    eps0, mu0 = constants.eps0, constants.mu0
    hw = constants.hbar * omega
    e_sq_vac = hw / (eps0 * V)        # coefficient of (n + 1/2) in <E.E>
    b_sq_vac = mu0 * hw / V
    zero = np.zeros(3)

    if isinstance(state, (NumberState, ThermalState)):
        n_eff = float(state.n) if isinstance(state, NumberState) else state.mean_n
        me_sq = (n_eff + 0.5) * e_sq_vac
        mb_sq = (n_eff + 0.5) * b_sq_vac
        return FieldMoments(zero, me_sq, me_sq, zero, mb_sq, mb_sq)

    if not isinstance(state, CoherentState):
        raise TypeError(f"unsupported state type: {type(state).__name__}")

    gamma = state.gamma
    g_mod, g_phase = abs(gamma), cmath.phase(gamma)
    k_vec = mode.wave.k0 * mode.khat.unit_vector()
    e_arr = mode.pol.as_array()
    e_p, e_dp = e_arr.real, e_arr.imag
    phase = float(np.dot(k_vec, np.asarray(r, dtype=float))) - omega * t
    big_theta = phase + g_phase

    mean_E = -math.sqrt(2.0 * hw / (eps0 * V)) * g_mod * (
        e_p * math.sin(big_theta) + e_dp * math.cos(big_theta)
    )
    mean_B = -math.sqrt(2.0 * constants.hbar / (eps0 * V * omega)) * g_mod * (
        np.cross(k_vec, e_p) * math.sin(big_theta)
        + np.cross(k_vec, e_dp) * math.cos(big_theta)
    )
    # <a a> = gamma^2 term; e.e is complex unless e'.e'' = 0
    ee = complex(np.dot(e_arr, e_arr))
    osc = (ee * gamma * gamma * cmath.exp(2j * phase)).real
    bracket = 1.0 + 2.0 * g_mod * g_mod - 2.0 * osc
    mean_E_sq = 0.5 * e_sq_vac * bracket
    mean_B_sq = 0.5 * b_sq_vac * bracket
    var_E = mean_E_sq - float(np.dot(mean_E, mean_E))
    var_B = mean_B_sq - float(np.dot(mean_B, mean_B))
    return FieldMoments(mean_E, mean_E_sq, var_E, mean_B, mean_B_sq, var_B)


def poynting_expectation(
    state: CoherentState,
    mode: ModeSpec,
    r: np.ndarray,
    t: float,
    constants: Constants = CONSTANTS,
) -> np.ndarray:
    """Expected Poynting vector of a single-mode coherent state.

    S = (hbar omega c / V) { 1/2 + |gamma|^2
        - (|e'|^2 - |e''|^2) |gamma|^2 cos[2(k.r - omega t + phi_gamma)] } khat.

    The closed form requires e'.e'' = 0; other modes are rejected.  The 1/2
    vacuum term is reported as-is, an artifact of the single-mode treatment.
    """
    if not isinstance(state, CoherentState):
        raise TypeError("poynting_expectation is defined for coherent states")
    e_arr = mode.pol.as_array()
    e_p, e_dp = e_arr.real, e_arr.imag
    if abs(float(np.dot(e_p, e_dp))) > 1e-9:
        raise ValueError("mode polarization must satisfy e'.e'' = 0")
    omega, V = mode.wave.omega, mode.V
    khat = mode.khat.unit_vector()
    g_mod, g_phase = abs(state.gamma), cmath.phase(state.gamma)
    phase = mode.wave.k0 * float(np.dot(khat, np.asarray(r, dtype=float))) - omega * t
    lin = float(np.dot(e_p, e_p) - np.dot(e_dp, e_dp))
    mag = (constants.hbar * omega * constants.c / V) * (
        0.5
        + g_mod * g_mod
        - lin * g_mod * g_mod * math.cos(2.0 * (phase + g_phase))
    )
    return mag * khat


def compose_gamma_operators(g1: complex, g2: complex) -> GammaComposition:
    """Compose the generators of |g1> and |g2>.

    The product of the two generator operators equals
    exp(Re(g1*conj(g2))) times the generator of |g1 + g2>.
    """
    return GammaComposition(
        prefactor=math.exp((g1 * complex(g2).conjugate()).real),
        gamma_sum=g1 + g2,
    )


def thermal_from_p_representation(zeta: float, n_max: int = 40) -> PhotonStatistics:
    """Photon-number distribution induced by the P-function (zeta/pi)exp(-zeta|g|^2).

    Integrating the Gaussian quasi-probability against the coherent-state
    projectors gives the Bose-Einstein weights p(n) = zeta/(zeta+1)^(n+1)
    with mean 1/zeta; the pmf is returned for n = 0..n_max.
    """
    if zeta <= 0.0:
        raise ValueError(f"zeta must be positive, got {zeta}")
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    n = np.arange(n_max + 1)
    pmf = zeta / (zeta + 1.0) ** (n + 1)
    mean = 1.0 / zeta
    return PhotonStatistics(mean=mean, variance=mean + mean * mean, pmf=pmf)
