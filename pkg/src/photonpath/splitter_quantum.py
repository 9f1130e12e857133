"""Multi-photon states at a lossless symmetric beam splitter.

Fock-pair transformation amplitudes via the double-sum combinatorial
formula, an independent generating-polynomial route used as its oracle,
the Hong-Ou-Mandel coincidence probability, coherent-state combining,
binomial reflection statistics of number states, and thermal-state
splitting.

All operations here use the single front-side pair (rho, tau) at both
input ports, which is exact for front-to-back symmetric splitters; the
distribution index m counts photons emerging at port 3, where a photon
entering port 1 is sent by reflection (amplitude rho).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .quantum_states import ThermalState
from .splitter_core import SplitterCoefficients, require_lossless

#: Default cap on n1 + n2; factorial magnitudes stay well-conditioned below this.
DEFAULT_MAX_TOTAL = 24


@dataclass(frozen=True)
class FockPairInput:
    """Number states |n1>, |n2> arriving at ports 1 and 2."""

    n1: int
    n2: int
    max_total: int = DEFAULT_MAX_TOTAL

    def __post_init__(self) -> None:
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("photon counts must be nonnegative")
        if self.n1 + self.n2 > self.max_total:
            raise ValueError(
                f"n1 + n2 = {self.n1 + self.n2} exceeds the configured bound "
                f"{self.max_total}"
            )

    @property
    def total(self) -> int:
        return self.n1 + self.n2


@dataclass(frozen=True)
class AmplitudeDistribution:
    """Complex amplitudes amps[m] for m photons in port 3, m = 0..total."""

    total: int
    amps: np.ndarray

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


def _require_symmetric_lossless(s: SplitterCoefficients) -> None:
    require_lossless(s)
    if not s.is_symmetric():
        raise ValueError(
            "Fock-state transformation requires a front-to-back symmetric "
            "splitter (rho' = rho, tau' = tau)"
        )


def fock_transform(inp: FockPairInput, s: SplitterCoefficients) -> AmplitudeDistribution:
    """Amplitudes for m photons in port 3 when |n1>, |n2> enter ports 1, 2.

    amps[m] = sum over m1 + m2 = m of
        sqrt(n1! n2! m! (N-m)!) / (m1! m2! (n1-m1)! (n2-m2)!)
        * rho^(n2+m1-m2) * tau^(n1-m1+m2),

    with N = n1 + n2.  Factorials are handled through log-gamma and each
    term is assembled in log-magnitude/phase form so that counts up to the
    configured bound do not overflow; the m1 sum runs in ascending order
    for a deterministic reduction.
    """
    _require_symmetric_lossless(s)
    n1, n2, total = inp.n1, inp.n2, inp.total
    mod_rho, phi_rho = abs(s.rho), cmath.phase(s.rho)
    mod_tau, phi_tau = abs(s.tau), cmath.phase(s.tau)
    log_rho = math.log(mod_rho) if mod_rho > 0.0 else -math.inf
    log_tau = math.log(mod_tau) if mod_tau > 0.0 else -math.inf

    amps = np.zeros(total + 1, dtype=complex)
    for m in range(total + 1):
        acc = 0.0 + 0.0j
        for m1 in range(max(0, m - n2), min(n1, m) + 1):
            m2 = m - m1
            a = n2 + m1 - m2  # power of rho
            b = n1 - m1 + m2  # power of tau
            if (a > 0 and mod_rho == 0.0) or (b > 0 and mod_tau == 0.0):
                continue
            log_coef = 0.5 * (
                math.lgamma(n1 + 1)
                + math.lgamma(n2 + 1)
                + math.lgamma(m + 1)
                + math.lgamma(total - m + 1)
            ) - (
                math.lgamma(m1 + 1)
                + math.lgamma(m2 + 1)
                + math.lgamma(n1 - m1 + 1)
                + math.lgamma(n2 - m2 + 1)
            )
            log_mag = log_coef + (a * log_rho if a else 0.0) + (b * log_tau if b else 0.0)
            acc += math.exp(log_mag) * cmath.exp(1j * (a * phi_rho + b * phi_tau))
        amps[m] = acc
    return AmplitudeDistribution(total=total, amps=amps)


def fock_oracle(inp: FockPairInput, s: SplitterCoefficients) -> AmplitudeDistribution:
    """Same distribution via expansion of (rho x + tau y)^n1 (tau x + rho y)^n2.

    The input creation operators map to rho a3 + tau a4 and tau a3 + rho a4;
    expanding the product polynomial by coefficient convolution and scaling
    the x^m y^(N-m) coefficient by sqrt(m! (N-m)! / (n1! n2!)) reproduces the
    port-3 amplitudes by a route independent of the double sum.
    """
    _require_symmetric_lossless(s)
    n1, n2, total = inp.n1, inp.n2, inp.total

    def binomial_poly(cx: complex, cy: complex, n: int) -> np.ndarray:
        # coefficients of x^k y^(n-k) in (cx*x + cy*y)^n, index k
        coeffs = np.zeros(n + 1, dtype=complex)
        for k in range(n + 1):
            coeffs[k] = math.comb(n, k) * cx**k * cy ** (n - k)
        return coeffs

    poly = np.convolve(binomial_poly(s.rho, s.tau, n1), binomial_poly(s.tau, s.rho, n2))
    m = np.arange(total + 1)
    log_scale = 0.5 * (
        np.vectorize(math.lgamma)(m + 1.0)
        + np.vectorize(math.lgamma)(total - m + 1.0)
        - math.lgamma(n1 + 1)
        - math.lgamma(n2 + 1)
    )
    amps = poly * np.exp(log_scale)
    return AmplitudeDistribution(total=total, amps=amps)


def hom_coincidence_probability(s: SplitterCoefficients) -> float:
    """Probability of one photon per output port for identical inputs |1>, |1>.

    Equals |rho^2 + tau^2|^2, which for any lossless symmetric splitter
    reduces to (|rho|^2 - |tau|^2)^2 and vanishes at the 50/50 point: both
    photons then always leave through the same port.
    """
    _require_symmetric_lossless(s)
    return abs(s.rho * s.rho + s.tau * s.tau) ** 2


def coherent_combine(
    g1: complex, g2: complex, s: SplitterCoefficients
) -> tuple[complex, complex]:
    """Coherent states |g1>, |g2> at ports 1, 2 emerge coherent at ports 3, 4.

    g3 = rho g1 + tau g2 and g4 = tau g1 + rho g2; the mean photon numbers
    obey |g3|^2 + |g4|^2 = |g1|^2 + |g2|^2 for any lossless splitter.
    """
    _require_symmetric_lossless(s)
    return s.rho * g1 + s.tau * g2, s.tau * g1 + s.rho * g2


@dataclass(frozen=True)
class ReflectedNumberStats:
    """Moments and pmf of the reflected photon count for a |n> input."""

    mean: float
    second_moment: float
    pmf: np.ndarray


def number_state_reflect_stats(n: int, s: SplitterCoefficients) -> ReflectedNumberStats:
    """Statistics of the reflected count when |n> hits the splitter.

    The reflected mode is a binomial superposition: pmf(m) =
    C(n, m) |rho|^(2m) |tau|^(2(n-m)), mean n|rho|^2, second moment
    n^2|rho|^4 + n|rho|^2|tau|^2.
    """
    if n < 0:
        raise ValueError("photon number must be nonnegative")
    _require_symmetric_lossless(s)
    big_r = abs(s.rho) ** 2
    big_t = abs(s.tau) ** 2
    mean = n * big_r
    second_moment = n * n * big_r * big_r + n * big_r * big_t
    m = np.arange(n + 1)
    pmf = np.array([math.comb(n, int(k)) for k in m]) * big_r**m * big_t ** (n - m)
    return ReflectedNumberStats(mean=mean, second_moment=second_moment, pmf=pmf)


def thermal_split(t: ThermalState, s: SplitterCoefficients) -> ThermalState:
    """Reflected arm of thermal light at a lossless splitter.

    The reflected beam keeps a Bose-Einstein distribution with mean scaled
    by the reflectance: zeta_out = zeta_in / |rho|^2, i.e. mean |rho|^2 <n>.
    Splitting twice with reflectances a then b therefore equals one split
    with reflectance a*b.
    """
    _require_symmetric_lossless(s)
    big_r = abs(s.rho) ** 2
    if big_r == 0.0:
        raise ValueError("reflected arm of a perfect window carries no thermal state")
    return ThermalState(zeta=t.zeta / big_r)


def thermal_split_pmf(t: ThermalState, s: SplitterCoefficients, m_max: int = 40) -> np.ndarray:
    """Reflected-count pmf for m = 0..m_max from the closed Bose-Einstein form."""
    out = thermal_split(t, s)
    m = np.arange(m_max + 1)
    return out.zeta / (out.zeta + 1.0) ** (m + 1)
