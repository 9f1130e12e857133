import cmath
import math

import numpy as np
import pytest

from photonpath.foundations import CONSTANTS, Direction, WaveParams
from photonpath.scattering import (
    FORWARD,
    MagnetizabilityTensor,
    PointDipole,
    PolarizabilityTensor,
    ScatterChannel,
    Scatterer,
    ScattererAssembly,
    canonical_to_lab,
    dipole_power_balance,
    dipole_radiated_field,
    direction_from_vector,
    electric_scattering_amplitude,
    lab_to_canonical,
    magnetic_scattering_amplitude,
    multi_scatterer_signal,
    optical_theorem_cross_section,
    polarizability_bound,
    reciprocity_check,
    susceptibility_map,
    two_particle_fringe,
)

WAVE = WaveParams.from_wavelength(633e-9)


def random_symmetric_matrix(rng, scale):
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    return (a + a.T) / 2 * scale


def random_direction(rng):
    return Direction(math.acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * math.pi))


# ---------------------------------------------------------------------------
# dipole radiation pattern
# ---------------------------------------------------------------------------

def test_radiated_field_equatorial():
    p = np.array([0.0, 0.0, 1e-30])
    d = Direction(math.pi / 2, 0.3)
    r = 1.0
    field = dipole_radiated_field(p, d, r, WAVE)
    pref = WAVE.k0**2 * cmath.exp(1j * WAVE.k0 * r) / (4 * math.pi * CONSTANTS.eps0 * r)
    assert abs(field[2] - pref * p[2]) < 1e-12 * abs(pref * p[2])


def test_no_radiation_along_dipole_axis():
    p = np.array([0.0, 0.0, 1e-30])
    field = dipole_radiated_field(p, Direction(0.0, 0.0), 2.0, WAVE)
    assert np.max(np.abs(field)) < 1e-40


def test_projector_structure_and_antipodal_invariance(rng):
    # the angular matrix is the transverse projector I - u u^T, symmetric
    # and unchanged under (theta, phi) -> (pi - theta, phi + pi)
    for _ in range(100):
        d = random_direction(rng)
        p = rng.normal(size=3) + 1j * rng.normal(size=3)
        r = 3.0
        f1 = dipole_radiated_field(p, d, r, WAVE)
        u = d.unit_vector()
        pref = WAVE.k0**2 * cmath.exp(1j * WAVE.k0 * r) / (4 * math.pi * CONSTANTS.eps0 * r)
        assert np.allclose(f1, pref * (p - u * (u @ p)), rtol=1e-12, atol=0)
        f2 = dipole_radiated_field(p, d.antipode(), r, WAVE)
        assert np.allclose(f1, f2, rtol=1e-12, atol=0)


def test_radiated_field_rejects_nonpositive_distance():
    with pytest.raises(ValueError):
        dipole_radiated_field(np.array([1.0, 0, 0]), FORWARD, 0.0, WAVE)


# ---------------------------------------------------------------------------
# channel amplitudes
# ---------------------------------------------------------------------------

def test_forward_amplitudes_match_lab_formulas():
    # for forward scattering the RCP/LCP amplitudes reduce to
    # k0^2/(8 pi eps0) (p_x -/+ i p_y) in lab components
    alpha = 2e-39 * cmath.exp(0.5j)
    tensor = PolarizabilityTensor.isotropic(alpha)
    e_in = 0.8 - 0.3j
    # incident RCP along lab z: lab-frame E = (1, i, 0) * E_in, dipole p = alpha E
    p_lab = alpha * np.array([1.0, 1.0j, 0.0]) * e_in
    pref = WAVE.k0**2 / (8 * math.pi * CONSTANTS.eps0)
    for pol_out, sign in ((+1, -1.0), (-1, +1.0)):
        ch = ScatterChannel(FORWARD, +1, FORWARD, pol_out)
        got = electric_scattering_amplitude(tensor, ch, e_in, WAVE)
        want = pref * (p_lab[0] + sign * 1j * p_lab[1])
        assert abs(got - want) < 1e-12 * abs(pref * alpha)


def test_zero_polarizability_scatters_nothing(rng):
    zero_e = PolarizabilityTensor(np.zeros((3, 3)))
    zero_m = MagnetizabilityTensor(np.zeros((3, 3)))
    ch = ScatterChannel(random_direction(rng), +1, random_direction(rng), -1)
    assert electric_scattering_amplitude(zero_e, ch, 1.0, WAVE) == 0
    assert magnetic_scattering_amplitude(zero_m, ch, 1.0, WAVE) == 0


def test_magnetic_forward_amplitudes_match_lab_formulas():
    beta = 1.5e-32 * cmath.exp(0.9j)
    tensor = MagnetizabilityTensor.isotropic(beta)
    e_in = 1.0
    # incident RCP along lab z: H = E_in/Z0 * (-i, 1, 0); m = beta H
    m_lab = beta * np.array([-1.0j, 1.0, 0.0]) * e_in / CONSTANTS.Z0
    pref = CONSTANTS.c * WAVE.k0**2 / (8 * math.pi)
    for pol_out, sign in ((+1, +1.0), (-1, -1.0)):
        ch = ScatterChannel(FORWARD, +1, FORWARD, pol_out)
        got = magnetic_scattering_amplitude(tensor, ch, e_in, WAVE)
        want = pref * (sign * 1j * m_lab[0] + m_lab[1])
        assert abs(got - want) < 1e-12 * abs(pref * beta / CONSTANTS.Z0)


def test_reciprocity_reports(rng):
    sym_e = PolarizabilityTensor(random_symmetric_matrix(rng, 1e-39))
    assert reciprocity_check(sym_e, trials=40, seed=11, wave=WAVE).passed
    diag = PolarizabilityTensor(np.diag([1.0, 2.0, 3.0 + 0.5j]) * 1e-39)
    assert reciprocity_check(diag, trials=40, seed=12, wave=WAVE).passed
    sym_m = MagnetizabilityTensor(random_symmetric_matrix(rng, 1e-32))
    assert reciprocity_check(sym_m, trials=40, seed=13, wave=WAVE).passed
    gyro = PolarizabilityTensor(
        (np.eye(3) + np.array([[0, 0.4, 0], [-0.4, 0, 0], [0, 0, 0]])) * 1e-39
    )
    report = reciprocity_check(gyro, trials=40, seed=14, wave=WAVE)
    assert not report.passed
    assert report.max_relative_difference > 1e-3


def test_antipodal_emission_rule(rng):
    # RCP emitted along d has the same amplitude as LCP along the antipode
    tensor = PolarizabilityTensor(random_symmetric_matrix(rng, 1e-39))
    for _ in range(20):
        d_in, d_out = random_direction(rng), random_direction(rng)
        a_rcp = electric_scattering_amplitude(
            tensor, ScatterChannel(d_in, +1, d_out, +1), 1.0, WAVE
        )
        a_lcp_back = electric_scattering_amplitude(
            tensor, ScatterChannel(d_in, +1, d_out.antipode(), -1), 1.0, WAVE
        )
        assert abs(a_rcp - a_lcp_back) < 1e-12 * max(abs(a_rcp), 1e-300)


# ---------------------------------------------------------------------------
# multiple scattering path sum
# ---------------------------------------------------------------------------

def _random_assembly(rng, n=3):
    scatterers = []
    for i in range(n):
        position = rng.uniform(-4e-6, 4e-6, size=3)
        if rng.random() < 0.5:
            scatterers.append(Scatterer(position, PolarizabilityTensor(random_symmetric_matrix(rng, 1e-39))))
        else:
            scatterers.append(Scatterer(position, MagnetizabilityTensor(random_symmetric_matrix(rng, 1e-32))))
    return ScattererAssembly(scatterers)


def test_direct_path_swap_identity(rng):
    ps = rng.normal(size=3) + 1j * rng.normal(size=3)
    pd = rng.normal(size=3) + 1j * rng.normal(size=3)
    rs, rd = np.array([-5e-6, 0, 0]), np.array([6e-6, 1e-6, 0])
    empty = ScattererAssembly([])
    fwd = multi_scatterer_signal(PointDipole(rs, ps, "electric"), empty,
                                 PointDipole(rd, pd, "electric"), 0, WAVE)
    rev = multi_scatterer_signal(PointDipole(rd, pd, "electric"), empty,
                                 PointDipole(rs, ps, "electric"), 0, WAVE)
    assert abs(fwd - rev) < 1e-12 * abs(fwd)


def test_single_bounce_changes_signal(rng):
    ps = np.array([0, 0, 1.0 + 0j])
    pd = np.array([0, 0, 1.0 + 0j])
    rs, rd = np.array([-5e-6, 0, 0]), np.array([5e-6, 0, 0])
    midway = ScattererAssembly([
        Scatterer(np.array([0.0, 1e-6, 0.0]), PolarizabilityTensor.isotropic(1e-38))
    ])
    direct = multi_scatterer_signal(PointDipole(rs, ps, "electric"), midway,
                                    PointDipole(rd, pd, "electric"), 0, WAVE)
    once = multi_scatterer_signal(PointDipole(rs, ps, "electric"), midway,
                                  PointDipole(rd, pd, "electric"), 1, WAVE)
    assert abs(once - direct) > 0


def test_path_sum_reciprocity_every_order(rng):
    for _ in range(3):
        assembly = _random_assembly(rng)
        ps = rng.normal(size=3) + 1j * rng.normal(size=3)
        pd = rng.normal(size=3) + 1j * rng.normal(size=3)
        rs, rd = np.array([-8e-6, 1e-6, 0]), np.array([7e-6, -2e-6, 1e-6])
        for order in range(4):
            fwd = multi_scatterer_signal(PointDipole(rs, ps, "electric"), assembly,
                                         PointDipole(rd, pd, "electric"), order, WAVE)
            rev = multi_scatterer_signal(PointDipole(rd, pd, "electric"), assembly,
                                         PointDipole(rs, ps, "electric"), order, WAVE)
            assert abs(fwd - rev) < 1e-10 * abs(fwd)


def test_mixed_probe_sign_rule(rng):
    assembly = _random_assembly(rng)
    ps = rng.normal(size=3) + 1j * rng.normal(size=3)
    md = rng.normal(size=3) + 1j * rng.normal(size=3)
    rs, rd = np.array([-6e-6, 0, 2e-6]), np.array([6e-6, 0, -1e-6])
    for order in range(3):
        fwd = multi_scatterer_signal(PointDipole(rs, ps, "electric"), assembly,
                                     PointDipole(rd, md, "magnetic"), order, WAVE)
        rev = multi_scatterer_signal(PointDipole(rd, md, "magnetic"), assembly,
                                     PointDipole(rs, ps, "electric"), order, WAVE)
        assert abs(fwd + rev) < 1e-10 * abs(fwd)


def test_path_sum_guards(rng):
    ps = np.array([0, 0, 1.0 + 0j])
    with pytest.raises(ValueError):
        multi_scatterer_signal(
            PointDipole(np.zeros(3), ps, "electric"), ScattererAssembly([]),
            PointDipole(np.zeros(3), ps, "electric"), 0, WAVE,
        )
    big = ScattererAssembly([
        Scatterer(np.array([float(i + 1), 0.0, 0.0]) * 1e-6,
                  PolarizabilityTensor.isotropic(1e-39))
        for i in range(10)
    ])
    with pytest.raises(ValueError):
        multi_scatterer_signal(PointDipole(np.array([-1e-6, 0, 0]), ps, "electric"), big,
                               PointDipole(np.array([20e-6, 0, 0]), ps, "electric"), 9, WAVE)


# ---------------------------------------------------------------------------
# power balance, bound, susceptibility
# ---------------------------------------------------------------------------

def _bound_alpha(phi_a, fraction=1.0):
    bound = 3 * CONSTANTS.eps0 * WAVE.lambda0**3 * math.sin(phi_a) / (2 * math.pi) ** 2
    return fraction * bound * cmath.exp(1j * phi_a)


def test_power_balance_lossless_phase_is_unphysical():
    balance = dipole_power_balance(1e-39 + 0j, 50.0, WAVE)
    assert balance.P_in_mag == 0.0
    assert balance.P_out > 0.0
    assert not balance.physical


def test_power_balance_equality_at_bound():
    balance = dipole_power_balance(_bound_alpha(0.7), 120.0, WAVE)
    assert abs(balance.P_in_mag - balance.P_out) < 1e-12 * balance.P_out
    assert abs(balance.P_in_mag - balance.P_abs) < 1e-12 * balance.P_abs
    assert balance.physical


def test_power_balance_strict_inequality_inside_bound():
    balance = dipole_power_balance(_bound_alpha(0.7, fraction=0.5), 120.0, WAVE)
    assert balance.P_in_mag > balance.P_out
    assert balance.physical


def test_power_balance_flux_quadrature_oracle():
    # brute-force cross-term flux through a k0 r = 200 sphere; finite-radius
    # deviation from the limit is cot(phi_a)/(k0 r), well inside 0.5% here
    from oracles import dipole_inflow_quadrature

    alpha = _bound_alpha(1.2)
    balance = dipole_power_balance(alpha, 80.0, WAVE)
    quad = dipole_inflow_quadrature(alpha, 80.0, WAVE, k0r=200.0)
    assert abs(quad - balance.P_in_mag) < 0.005 * balance.P_in_mag


def test_polarizability_bound_checks():
    assert polarizability_bound(_bound_alpha(0.4), WAVE).satisfied
    assert polarizability_bound(0.0, WAVE).satisfied
    assert not polarizability_bound(_bound_alpha(0.4, fraction=1.1), WAVE).satisfied
    with pytest.raises(ValueError):
        polarizability_bound(1e-39 + 0j, WAVE)  # phase 0: out of model
    with pytest.raises(ValueError):
        polarizability_bound(-1e-39 + -1e-41j, WAVE)


def test_susceptibility_dilute_limit():
    alpha = 1e-42 * cmath.exp(0.3j)
    n_density = 1e18
    result = susceptibility_map(n_density, alpha, WAVE)
    dilute = n_density * alpha / CONSTANTS.eps0
    assert abs(result.chi_e - dilute) < 1e-3 * abs(dilute)


def test_susceptibility_boundary_has_real_chi():
    n_density = 1e9 / WAVE.lambda0**3  # N lambda0^3 = 1e9
    phi_a = 1e-4
    alpha = 3 * CONSTANTS.eps0 * WAVE.lambda0**3 * math.sin(phi_a) / (2 * math.pi) ** 2
    result = susceptibility_map(n_density, alpha * cmath.exp(1j * phi_a), WAVE)
    assert result.bound_satisfied
    assert abs(result.chi_e.imag) < 1e-6
    assert result.physical


def test_susceptibility_roundtrip():
    # forward map from a chosen chi_e, then invert
    chi_e = 2.0 + 0.3j
    n_density = 5e25
    b = 4 * math.pi**2 / (3 * n_density * WAVE.lambda0**3)
    dimensionless = 1.0 / (1.0 / chi_e + 1.0 / 3.0 - 1j * b)
    alpha = dimensionless * CONSTANTS.eps0 / n_density
    result = susceptibility_map(n_density, alpha, WAVE)
    assert abs(result.chi_e - chi_e) < 1e-12 * abs(chi_e)
    assert result.physical


def test_susceptibility_flags_violation():
    result = susceptibility_map(1e9 / WAVE.lambda0**3, _bound_alpha(1e-4, fraction=2.0), WAVE)
    assert not result.bound_satisfied
    assert result.chi_e.imag < 0
    assert not result.physical


def test_susceptibility_guards():
    with pytest.raises(ValueError):
        susceptibility_map(0.0, 1e-39j, WAVE)
    with pytest.raises(ValueError):
        susceptibility_map(1e20, 0.0, WAVE)


# ---------------------------------------------------------------------------
# optical theorem
# ---------------------------------------------------------------------------

def test_cross_section_zero_for_empty_response():
    sc = Scatterer(np.zeros(3), PolarizabilityTensor(np.zeros((3, 3))))
    assert optical_theorem_cross_section(sc, 1.0, 0.0, WAVE) == 0.0


def test_cross_section_lossless_matches_radiated_power():
    alpha = _bound_alpha(0.6)
    sc = Scatterer(np.zeros(3), PolarizabilityTensor.isotropic(alpha))
    cross = optical_theorem_cross_section(sc, 1.0, 0.0, WAVE)
    flux = 1.0 / CONSTANTS.Z0
    e0 = math.sqrt(2.0)  # classical amplitude with the same flux
    balance = dipole_power_balance(alpha, e0, WAVE)
    assert abs(cross * flux - balance.P_out) < 1e-10 * balance.P_out


def test_cross_section_absorptive_matches_total_extinction():
    alpha = _bound_alpha(0.6, fraction=0.4)
    sc = Scatterer(np.zeros(3), PolarizabilityTensor.isotropic(alpha))
    cross = optical_theorem_cross_section(sc, 0.0, 1.0, WAVE)
    flux = 1.0 / CONSTANTS.Z0
    balance = dipole_power_balance(alpha, math.sqrt(2.0), WAVE)
    assert abs(cross * flux - balance.P_abs) < 1e-10 * balance.P_abs
    assert cross * flux > balance.P_out


def test_cross_section_additive_mixed_assembly(rng):
    alpha = _bound_alpha(0.5, fraction=0.7)
    beta = 1e-32 * cmath.exp(0.8j)
    electric = Scatterer(np.array([0.0, 0, 0]), PolarizabilityTensor.isotropic(alpha))
    magnetic = Scatterer(np.array([0.0, 0, 5e-6]), MagnetizabilityTensor.isotropic(beta))
    together = optical_theorem_cross_section(
        ScattererAssembly([electric, magnetic]), 0.6, 0.4j, WAVE
    )
    separate = optical_theorem_cross_section(electric, 0.6, 0.4j, WAVE) + (
        optical_theorem_cross_section(magnetic, 0.6, 0.4j, WAVE)
    )
    assert abs(together - separate) < 1e-12 * abs(separate)


def test_cross_section_rejects_dark_input():
    sc = Scatterer(np.zeros(3), PolarizabilityTensor.isotropic(1e-39j))
    with pytest.raises(ValueError):
        optical_theorem_cross_section(sc, 0.0, 0.0, WAVE)


# ---------------------------------------------------------------------------
# two-particle fringes
# ---------------------------------------------------------------------------

def test_fringe_lcp_dark_on_axis():
    amp = two_particle_fringe(1e-39j, 5e-6, WAVE, r0=1.0, x=0.0, out_pol=-1)
    assert abs(amp) < 1e-60
    rcp = two_particle_fringe(1e-39j, 5e-6, WAVE, r0=1.0, x=0.0, out_pol=+1)
    assert abs(rcp) > 0


def test_fringe_common_zero():
    d = 5e-6
    x = WAVE.lambda0 * 1.0 / (2 * d)
    scale = abs(two_particle_fringe(1e-39j, d, WAVE, r0=1.0, x=0.0, out_pol=+1))
    for pol in (+1, -1):
        # cos(pi/2) suppresses both polarizations at the first dark fringe
        amp = two_particle_fringe(1e-39j, d, WAVE, r0=1.0, x=x, out_pol=pol)
        assert abs(amp) < 1e-14 * scale


def test_fringe_period():
    # successive dark fringes sit at x = (m + 1/2) lambda0 r0 / d, so the
    # bright-fringe spacing is lambda0 r0 / d
    d, r0 = 5e-6, 1.0
    period = WAVE.lambda0 * r0 / d
    scale = abs(two_particle_fringe(1e-39j, d, WAVE, r0=r0, x=0.0, out_pol=+1))
    for m in range(3):
        dark = (m + 0.5) * period
        bright = (m + 1.0) * period
        assert abs(two_particle_fringe(1e-39j, d, WAVE, r0=r0, x=dark, out_pol=+1)) < 1e-9 * scale
        assert abs(two_particle_fringe(1e-39j, d, WAVE, r0=r0, x=bright, out_pol=+1)) > 0.8 * scale


def test_fringe_guards():
    with pytest.raises(ValueError):
        two_particle_fringe(1e-39j, 1e-6, WAVE, r0=0.0, x=0.0, out_pol=+1)
    with pytest.raises(ValueError):
        two_particle_fringe(1e-39j, 1e-6, WAVE, r0=1.0, x=2.0, out_pol=+1)
    with pytest.warns(UserWarning):
        two_particle_fringe(1e-39j, 1e-2, WAVE, r0=0.5, x=0.0, out_pol=+1)


# ---------------------------------------------------------------------------
# frame adapters
# ---------------------------------------------------------------------------

def test_frame_adapters_roundtrip(rng):
    v = rng.normal(size=3)
    assert np.allclose(canonical_to_lab(lab_to_canonical(v)), v)
    assert np.allclose(lab_to_canonical(canonical_to_lab(v)), v)
    # the lab +z beam direction maps to the canonical forward channel
    d = direction_from_vector(lab_to_canonical(np.array([0.0, 0.0, 1.0])))
    assert abs(d.theta - FORWARD.theta) < 1e-12
    assert abs(d.phi - FORWARD.phi) < 1e-12
