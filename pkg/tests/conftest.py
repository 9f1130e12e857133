import math

import numpy as np
import pytest

from photonpath.splitter_core import SplitterCoefficients, make_symmetric_splitter


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_symmetric_splitter(rng, mod_min=0.05, mod_max=0.95):
    """Random valid symmetric lossless splitter away from the mirror/window edges."""
    return make_symmetric_splitter(
        mod_rho=rng.uniform(mod_min, mod_max),
        phi_rho=rng.uniform(0.0, 2.0 * math.pi),
    )


def random_asymmetric_splitter(rng, mod_min=0.05, mod_max=0.95):
    """Random valid lossless splitter with distinct back-side phases.

    Front and back reflection phases are free; the transmission phase is
    pinned to half their sum plus a randomly signed quarter turn.
    """
    mod_rho = rng.uniform(mod_min, mod_max)
    mod_tau = math.sqrt(1.0 - mod_rho * mod_rho)
    phi_rho = rng.uniform(0.0, 2.0 * math.pi)
    phi_rho_b = rng.uniform(0.0, 2.0 * math.pi)
    sign = 1.0 if rng.random() < 0.5 else -1.0
    phi_tau = 0.5 * (phi_rho + phi_rho_b) + sign * 0.5 * math.pi
    tau = mod_tau * np.exp(1j * phi_tau)
    return SplitterCoefficients(
        rho=mod_rho * np.exp(1j * phi_rho),
        tau=tau,
        rho_prime=mod_rho * np.exp(1j * phi_rho_b),
        tau_prime=tau,
    )
