"""Command-line front end: TOML configs in, JSON/CSV result envelopes out.

Usage:

    photonpath <command> --config <file> [--out <file>] [--format json|csv]
               [--validate-only]

Commands: splitter, fock, hom, coherent, thermal, mzi, sagnac, scatter,
optical-theorem, layers, sheet, extinction, diffract, states.

Config files are flat, typed key/value TOML with nested tables for
geometry.  Complex numbers are written as two-element arrays [re, im];
angles are radians, lengths meters.  A config containing a [sweep] table
(exactly one swept parameter, {param, from, to, steps}) produces a CSV
table with one row per sweep value instead of a single envelope.  Output
is fully deterministic: identical configs give byte-identical bytes.
Results never contain NaN or infinity; such values are turned into domain
errors.

Exit codes: 0 success, 2 config validation error, 3 domain error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from . import __version__
from .foundations import Direction, WaveParams
from .interferometers import (
    MachZehnderConfig,
    SagnacGeometry,
    mzi_exit_amplitudes,
    sagnac_detection_probability,
    sagnac_phase,
)
from .layered_media import (
    Layer,
    SheetPolarizability,
    extinction_interior,
    extinction_reflection,
    fresnel_semiinfinite,
    lossless_sheet,
    multilayer_coefficients,
    sheet_time_reversal_roundtrip,
    thin_sheet_response,
)
from .quantum_states import CoherentState, NumberState, ThermalState, photon_statistics
from .scattering import (
    CONSTANTS,
    MagnetizabilityTensor,
    PolarizabilityTensor,
    ScatterChannel,
    Scatterer,
    ScattererAssembly,
    electric_scattering_amplitude,
    magnetic_scattering_amplitude,
    optical_theorem_cross_section,
)
from .splitter_core import (
    SplitterCoefficients,
    make_symmetric_splitter,
    pcm_roundtrip,
    validate_lossless,
)
from .splitter_quantum import (
    FockPairInput,
    coherent_combine,
    fock_oracle,
    fock_transform,
    hom_coincidence_probability,
    thermal_split,
)
from .diffraction import FarFieldPoint, FieldGrid, far_field_scalar, spectrum

COMMANDS = (
    "splitter",
    "fock",
    "hom",
    "coherent",
    "thermal",
    "mzi",
    "sagnac",
    "scatter",
    "optical-theorem",
    "layers",
    "sheet",
    "extinction",
    "diffract",
    "states",
)


class ConfigError(Exception):
    """Raised for schema violations in a config file; maps to exit code 2."""


# ---------------------------------------------------------------------------
# typed parameter extraction (every message names the offending field)
# ---------------------------------------------------------------------------

def _get(params: dict, field: str, default=None, required: bool = False):
    if field in params:
        return params[field]
    if required:
        raise ConfigError(f"missing required field '{field}'")
    return default


def _float(params: dict, field: str, default=None, required: bool = False) -> float | None:
    value = _get(params, field, default, required)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field '{field}' must be a number, got {value!r}")
    return float(value)


def _int(params: dict, field: str, default=None, required: bool = False) -> int | None:
    value = _get(params, field, default, required)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"field '{field}' must be an integer, got {value!r}")
    return value


def _str(params: dict, field: str, default=None, required: bool = False, choices=None) -> str | None:
    value = _get(params, field, default, required)
    if value is None:
        return None
    if not isinstance(value, str):
        raise ConfigError(f"field '{field}' must be a string, got {value!r}")
    if choices is not None and value not in choices:
        raise ConfigError(f"field '{field}' must be one of {sorted(choices)}, got {value!r}")
    return value


def _complex(params: dict, field: str, default=None, required: bool = False) -> complex | None:
    value = _get(params, field, default, required)
    if value is None:
        return None
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(float(value), 0.0)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(u, (int, float)) and not isinstance(u, bool) for u in value)
    ):
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"field '{field}' must be a number or [re, im] pair, got {value!r}")


def _vec3(params: dict, field: str, required: bool = False) -> np.ndarray | None:
    value = _get(params, field, None, required)
    if value is None:
        return None
    if (
        not isinstance(value, list)
        or len(value) != 3
        or any(isinstance(u, bool) or not isinstance(u, (int, float)) for u in value)
    ):
        raise ConfigError(f"field '{field}' must be a 3-vector [x, y, z], got {value!r}")
    return np.array([float(u) for u in value])


def _table(params: dict, field: str, required: bool = False) -> dict | None:
    value = _get(params, field, None, required)
    if value is None:
        return None
    if not isinstance(value, dict):
        raise ConfigError(f"field '{field}' must be a table, got {value!r}")
    return value


def _positive(value: float, field: str) -> float:
    if value <= 0.0:
        raise ConfigError(f"field '{field}' must be positive, got {value}")
    return value


def _wave(params: dict) -> WaveParams:
    lambda0 = _float(params, "lambda0", required=True)
    return WaveParams.from_wavelength(_positive(lambda0, "lambda0"))


def _splitter(params: dict, field: str = "splitter", required: bool = True) -> SplitterCoefficients:
    """Build a splitter from a nested table.

    Accepts either {mod_rho | reflectance, phi_rho} for a symmetric lossless
    splitter, or the four explicit coefficients {rho, tau, rho_prime,
    tau_prime} as [re, im] pairs.
    """
    table = _table(params, field, required=required)
    if table is None:
        return make_symmetric_splitter(1.0 / math.sqrt(2.0), 0.0)
    if "rho" in table:
        coeffs = {
            name: _complex(table, name, required=True)
            for name in ("rho", "tau", "rho_prime", "tau_prime")
        }
        return SplitterCoefficients(**coeffs)
    if "reflectance" in table:
        reflectance = _float(table, "reflectance", required=True)
        if not 0.0 <= reflectance <= 1.0:
            raise ConfigError(f"field '{field}.reflectance' must lie in [0, 1], got {reflectance}")
        mod_rho = math.sqrt(reflectance)
    else:
        mod_rho = _float(table, "mod_rho", required=True)
        if not 0.0 <= mod_rho <= 1.0:
            raise ConfigError(f"field '{field}.mod_rho' must lie in [0, 1], got {mod_rho}")
    phi_rho = _float(table, "phi_rho", default=0.0)
    return make_symmetric_splitter(mod_rho, phi_rho)


def _c(z: complex) -> list[float]:
    """Serialize a complex value as the canonical [re, im] pair."""
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _tensor_3x3(table: dict, field: str) -> np.ndarray:
    rows = _get(table, field, None, required=True)
    if not isinstance(rows, list) or len(rows) != 3:
        raise ConfigError(f"field '{field}' must be a 3x3 matrix (3 rows)")
    matrix = np.zeros((3, 3), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != 3:
            raise ConfigError(f"field '{field}' row {i} must have 3 entries")
        for j, entry in enumerate(row):
            name = f"{field}[{i}][{j}]"
            matrix[i, j] = _complex({name: entry}, name, required=True)
    return matrix


# ---------------------------------------------------------------------------
# command runners: params dict -> JSON-serializable results dict
# ---------------------------------------------------------------------------

def _run_splitter(params: dict) -> dict:
    if "rho" in params:
        s = SplitterCoefficients(
            rho=_complex(params, "rho", required=True),
            tau=_complex(params, "tau", required=True),
            rho_prime=_complex(params, "rho_prime", required=True),
            tau_prime=_complex(params, "tau_prime", required=True),
        )
    else:
        s = _splitter({"splitter": params})
    report = validate_lossless(s)
    ch1, ch2 = pcm_roundtrip(s)
    return {
        "rho": _c(s.rho),
        "tau": _c(s.tau),
        "rho_prime": _c(s.rho_prime),
        "tau_prime": _c(s.tau_prime),
        "valid": report.valid,
        "front_power_ok": report.front_power_ok,
        "back_power_ok": report.back_power_ok,
        "tau_equal_ok": report.tau_equal_ok,
        "rho_mod_ok": report.rho_mod_ok,
        "phase_ok": report.phase_ok,
        "residual_front": report.residual_front,
        "residual_back": report.residual_back,
        "residual_tau_equal": report.residual_tau_equal,
        "residual_rho_mod": report.residual_rho_mod,
        "residual_phase": report.residual_phase,
        "pcm_channel1": _c(ch1),
        "pcm_channel2": _c(ch2),
    }


def _run_fock(params: dict) -> dict:
    inp = FockPairInput(
        n1=_int(params, "n1", required=True),
        n2=_int(params, "n2", required=True),
    )
    s = _splitter(params)
    dist = fock_transform(inp, s)
    oracle = fock_oracle(inp, s)
    probs = dist.probabilities()
    return {
        "total_photons": dist.total,
        "amplitudes": [_c(a) for a in dist.amps],
        "probabilities": [float(p) for p in probs],
        "probability_sum": float(np.sum(probs)),
        "oracle_max_difference": float(np.max(np.abs(dist.amps - oracle.amps))),
    }


def _run_hom(params: dict) -> dict:
    s = _splitter(params)
    dist = fock_transform(FockPairInput(1, 1), s)
    return {
        "coincidence_probability": hom_coincidence_probability(s),
        "probabilities": [float(p) for p in dist.probabilities()],
    }


def _run_coherent(params: dict) -> dict:
    g1 = _complex(params, "gamma1", required=True)
    g2 = _complex(params, "gamma2", required=True)
    s = _splitter(params)
    g3, g4 = coherent_combine(g1, g2, s)
    e_in = abs(g1) ** 2 + abs(g2) ** 2
    e_out = abs(g3) ** 2 + abs(g4) ** 2
    return {
        "gamma3": _c(g3),
        "gamma4": _c(g4),
        "mean_photons_in": e_in,
        "mean_photons_out": e_out,
        "energy_residual": e_out - e_in,
    }


def _thermal_state(params: dict) -> ThermalState:
    if "zeta" in params:
        return ThermalState(zeta=_positive(_float(params, "zeta", required=True), "zeta"))
    mean_n = _float(params, "mean_n", required=True)
    return ThermalState.from_mean(_positive(mean_n, "mean_n"))


def _run_thermal(params: dict) -> dict:
    state = _thermal_state(params)
    s = _splitter(params)
    reflected = thermal_split(state, s)
    stats = photon_statistics(reflected)
    n_terms = _int(params, "pmf_terms", default=16)
    return {
        "input_mean": state.mean_n,
        "reflectance": abs(s.rho) ** 2,
        "reflected_mean": stats.mean,
        "reflected_variance": stats.variance,
        "reflected_zeta": reflected.zeta,
        "pmf": [float(p) for p in stats.pmf[:n_terms]],
    }


def _run_mzi(params: dict) -> dict:
    cfg = MachZehnderConfig(
        s1=_splitter(params, "splitter1"),
        s2=_splitter(params, "splitter2"),
        phi1=_float(params, "phi1", default=0.0),
        phi2=_float(params, "phi2", default=0.0),
        strict=bool(_get(params, "strict", default=True)),
    )
    a1, a2 = mzi_exit_amplitudes(cfg)
    return {
        "exit1_amplitude": _c(a1),
        "exit2_amplitude": _c(a2),
        "exit1_probability": abs(a1) ** 2,
        "exit2_probability": abs(a2) ** 2,
        "probability_sum": abs(a1) ** 2 + abs(a2) ** 2,
    }


def _run_sagnac(params: dict) -> dict:
    geometry = SagnacGeometry(
        S=_vec3(params, "S", required=True),
        M1=_vec3(params, "M1", required=True),
        M2=_vec3(params, "M2", required=True),
        C=_vec3(params, "C", required=True),
        Omega=_vec3(params, "Omega", required=True),
        wave=_wave(params),
    )
    s = _splitter(params, required=False)
    phase = sagnac_phase(geometry)
    return {
        "phase_difference_rad": phase,
        "area_vector_m2": [float(a) for a in geometry.area_vector()],
        "detection_probability": sagnac_detection_probability(geometry, s),
    }


def _run_scatter(params: dict) -> dict:
    kind = _str(params, "kind", required=True, choices={"electric", "magnetic"})
    matrix = _tensor_3x3(params, "tensor")
    channel = ScatterChannel(
        dir_in=Direction(_float(params, "theta_in", required=True), _float(params, "phi_in", required=True)),
        pol_in=_int(params, "pol_in", required=True),
        dir_out=Direction(_float(params, "theta_out", required=True), _float(params, "phi_out", required=True)),
        pol_out=_int(params, "pol_out", required=True),
    )
    e_in = _complex(params, "e_in", default=1.0)
    wave = _wave(params)
    if kind == "electric":
        tensor = PolarizabilityTensor(matrix)
        amp = electric_scattering_amplitude(tensor, channel, e_in, wave)
        rev = electric_scattering_amplitude(tensor, channel.reversed(), e_in, wave)
    else:
        tensor = MagnetizabilityTensor(matrix)
        amp = magnetic_scattering_amplitude(tensor, channel, e_in, wave)
        rev = magnetic_scattering_amplitude(tensor, channel.reversed(), e_in, wave)
    return {
        "amplitude_v": _c(amp),
        "reversed_amplitude_v": _c(rev),
        "reciprocity_residual": abs(amp - rev),
        "tensor_symmetric": tensor.is_symmetric(),
    }


def _run_optical_theorem(params: dict) -> dict:
    wave = _wave(params)
    dipole_tables = _get(params, "dipoles", None, required=True)
    if not isinstance(dipole_tables, list) or not dipole_tables:
        raise ConfigError("field 'dipoles' must be a nonempty array of tables")
    scatterers = []
    for i, table in enumerate(dipole_tables):
        if not isinstance(table, dict):
            raise ConfigError(f"field 'dipoles[{i}]' must be a table")
        kind = _str(table, "kind", required=True, choices={"electric", "magnetic"})
        position = _vec3(table, "position", required=False)
        position = position if position is not None else np.array([0.0, 0.0, float(i)])
        scalar = _complex(table, "alpha" if kind == "electric" else "beta", required=True)
        tensor = (
            PolarizabilityTensor.isotropic(scalar)
            if kind == "electric"
            else MagnetizabilityTensor.isotropic(scalar)
        )
        scatterers.append(Scatterer(position=position, tensor=tensor))
    e_plus = _complex(params, "e_plus", default=1.0)
    e_minus = _complex(params, "e_minus", default=0.0)
    cross_section = optical_theorem_cross_section(
        ScattererAssembly(scatterers), e_plus, e_minus, wave
    )
    flux = (abs(e_plus) ** 2 + abs(e_minus) ** 2) / CONSTANTS.Z0
    return {
        "cross_section_m2": cross_section,
        "incident_flux_w_per_m2": flux,
        "extinction_power_w": cross_section * flux,
    }


def _run_layers(params: dict) -> dict:
    wave = _wave(params)
    layer_tables = _get(params, "stack", None, required=True)
    if not isinstance(layer_tables, list) or not layer_tables:
        raise ConfigError("field 'stack' must be a nonempty array of layer tables")
    stack = []
    for i, table in enumerate(layer_tables):
        if not isinstance(table, dict):
            raise ConfigError(f"field 'stack[{i}]' must be a table")
        n = _complex(table, "n", required=True)
        d = _float(table, "d", required=True)
        if d < 0:
            raise ConfigError(f"field 'stack[{i}].d' must be nonnegative, got {d}")
        stack.append(Layer(n=n, d=d))
    coeffs = multilayer_coefficients(stack, wave)
    return {
        "rho_front": _c(coeffs.rho_front),
        "tau_front": _c(coeffs.tau_front),
        "rho_back": _c(coeffs.rho_back),
        "tau_back": _c(coeffs.tau_back),
        "reflectance_front": abs(coeffs.rho_front) ** 2,
        "reflectance_back": abs(coeffs.rho_back) ** 2,
        "transmittance_front": abs(coeffs.tau_front) ** 2,
        "transmittance_back": abs(coeffs.tau_back) ** 2,
    }


def _run_sheet(params: dict) -> dict:
    wave = _wave(params)
    d = _positive(_float(params, "d", required=True), "d")
    if "zeta" in params:
        sheet = SheetPolarizability(zeta=_complex(params, "zeta", required=True), d=d)
    else:
        phi_zeta = _float(params, "phi_zeta", required=True)
        sheet = lossless_sheet(phi_zeta, d, wave)
    response = thin_sheet_response(sheet, wave)
    results = {
        "zeta": _c(sheet.zeta),
        "r_coeff": _c(response.r_coeff),
        "t_coeff": _c(response.t_coeff),
        "reflectance": response.reflectance,
        "transmittance": response.transmittance,
        "chi_e": _c(response.chi_e),
        "lossless": response.lossless,
    }
    if response.lossless:
        left, right = sheet_time_reversal_roundtrip(sheet, wave)
        results["roundtrip_left"] = _c(left)
        results["roundtrip_right"] = _c(right)
    return results


def _run_extinction(params: dict) -> dict:
    wave = _wave(params)
    n = _complex(params, "n", required=True)
    reflected = extinction_reflection(n, wave)
    rho, _ = fresnel_semiinfinite(n)
    results = {
        "reflection_coefficient": _c(reflected),
        "fresnel_rho": _c(rho),
        "agreement_residual": abs(reflected - rho),
    }
    z0 = _float(params, "z0", default=None)
    if z0 is not None:
        transmitted, cancellation = extinction_interior(n, _positive(z0, "z0"), wave)
        results["transmitted_term"] = _c(transmitted)
        results["cancellation_term"] = _c(cancellation)
    return results


def _aperture_grid(params: dict, wave: WaveParams) -> FieldGrid:
    aperture = _table(params, "aperture", required=True)
    grid_spec = _table(params, "grid", required=True)
    nx = _int(grid_spec, "nx", required=True)
    ny = _int(grid_spec, "ny", required=True)
    dx = _positive(_float(grid_spec, "dx", required=True), "grid.dx")
    dy = _positive(_float(grid_spec, "dy", required=True), "grid.dy")
    if nx <= 0 or ny <= 0:
        raise ConfigError("grid.nx and grid.ny must be positive")
    kind = _str(aperture, "type", required=True, choices={"gaussian", "square"})
    amplitude = _complex(aperture, "amplitude", default=1.0)
    if kind == "gaussian":
        waist = _positive(_float(aperture, "waist", required=True), "aperture.waist")
        profile = lambda x, y: amplitude * np.exp(-(x**2 + y**2) / waist**2)
    else:
        side = _positive(_float(aperture, "side", required=True), "aperture.side")
        profile = lambda x, y: amplitude * (
            (np.abs(x) <= side / 2.0) & (np.abs(y) <= side / 2.0)
        ).astype(complex)
    return FieldGrid.from_function(profile, nx=nx, ny=ny, dx=dx, dy=dy)


def _run_diffract(params: dict) -> dict:
    wave = _wave(params)
    grid = _aperture_grid(params, wave)
    observation = _table(params, "observation", required=True)
    point = FarFieldPoint(
        x=_float(observation, "x", default=0.0),
        y=_float(observation, "y", default=0.0),
        z0=_positive(_float(observation, "z0", required=True), "observation.z0"),
    )
    ev = spectrum(grid)
    amp = far_field_scalar(grid, point, wave, evaluator=ev)
    return {
        "amplitude": _c(amp),
        "intensity": abs(amp) ** 2,
        "k0_r": wave.k0 * point.r,
        "spectrum_at_origin": _c(ev(0.0, 0.0)),
    }


def _run_states(params: dict) -> dict:
    state_spec = _table(params, "state", required=True)
    kind = _str(state_spec, "kind", required=True, choices={"number", "coherent", "thermal"})
    if kind == "number":
        state = NumberState(n=_int(state_spec, "n", required=True))
    elif kind == "coherent":
        state = CoherentState(gamma=_complex(state_spec, "gamma", required=True))
    else:
        state = _thermal_state(state_spec)
    stats = photon_statistics(state)
    n_terms = _int(params, "pmf_terms", default=16)
    return {
        "kind": kind,
        "mean": stats.mean,
        "variance": stats.variance,
        "pmf": [float(p) for p in stats.pmf[:n_terms]],
    }


_RUNNERS = {
    "splitter": _run_splitter,
    "fock": _run_fock,
    "hom": _run_hom,
    "coherent": _run_coherent,
    "thermal": _run_thermal,
    "mzi": _run_mzi,
    "sagnac": _run_sagnac,
    "scatter": _run_scatter,
    "optical-theorem": _run_optical_theorem,
    "layers": _run_layers,
    "sheet": _run_sheet,
    "extinction": _run_extinction,
    "diffract": _run_diffract,
    "states": _run_states,
}


# ---------------------------------------------------------------------------
# envelopes, sweeps, serialization
# ---------------------------------------------------------------------------

def _check_finite(value, path: str = "results") -> None:
    if isinstance(value, bool):
        return
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value at '{path}': {value}")
        return
    if isinstance(value, (int, str)) or value is None:
        return
    if isinstance(value, list):
        for i, item in enumerate(value):
            _check_finite(item, f"{path}[{i}]")
        return
    if isinstance(value, dict):
        for key, item in value.items():
            _check_finite(item, f"{path}.{key}")
        return
    raise ValueError(f"unserializable value at '{path}': {value!r}")


def _execute(command: str, params: dict) -> tuple[dict, list[str]]:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        results = _RUNNERS[command](params)
    _check_finite(results)
    return results, [str(w.message) for w in caught]


def _envelope(command: str, config_bytes: bytes, results: dict, warn: list[str]) -> dict:
    return {
        "command": command,
        "input_sha256": hashlib.sha256(config_bytes).hexdigest(),
        "library_version": __version__,
        "results": results,
        "warnings": warn,
    }


def _fmt_number(value: float) -> str:
    return f"{value:.16e}"


def _flatten(results: dict, prefix: str = "") -> list[tuple[str, str]]:
    """Flatten a results dict into (column, formatted value) pairs."""
    out: list[tuple[str, str]] = []
    for key, value in results.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.extend(_flatten(value, prefix=f"{name}."))
        elif isinstance(value, list):
            if len(value) == 2 and all(isinstance(u, float) for u in value):
                out.append((f"{name}.re", _fmt_number(value[0])))
                out.append((f"{name}.im", _fmt_number(value[1])))
            else:
                for i, item in enumerate(value):
                    if isinstance(item, list):
                        out.append((f"{name}[{i}].re", _fmt_number(item[0])))
                        out.append((f"{name}[{i}].im", _fmt_number(item[1])))
                    elif isinstance(item, float):
                        out.append((f"{name}[{i}]", _fmt_number(item)))
                    else:
                        out.append((f"{name}[{i}]", str(item)))
        elif isinstance(value, bool):
            out.append((name, "true" if value else "false"))
        elif isinstance(value, float):
            out.append((name, _fmt_number(value)))
        else:
            out.append((name, str(value)))
    return out


def _serialize_json(envelope: dict) -> str:
    return json.dumps(envelope, indent=2, sort_keys=True) + "\n"


def _serialize_csv_single(envelope: dict) -> str:
    pairs = _flatten(envelope["results"])
    lines = [
        f"# photonpath {envelope['library_version']} command={envelope['command']} "
        f"input_sha256={envelope['input_sha256']}",
        "# one row of named result columns; complex values split into .re/.im",
        ",".join(name for name, _ in pairs),
        ",".join(text for _, text in pairs),
    ]
    return "\n".join(lines) + "\n"


def _set_by_path(params: dict, dotted: str, value: float) -> None:
    parts = dotted.split(".")
    node = params
    for part in parts[:-1]:
        if part not in node or not isinstance(node[part], dict):
            raise ConfigError(f"sweep.param path '{dotted}' does not name a config table")
        node = node[part]
    node[parts[-1]] = value


def _run_sweep(command: str, params: dict, sweep: dict, config_bytes: bytes) -> str:
    if not isinstance(sweep, dict):
        raise ConfigError("field 'sweep' must be a single table with one swept parameter")
    allowed = {"param", "from", "to", "steps"}
    extra = set(sweep) - allowed
    if extra:
        raise ConfigError(f"unknown sweep fields: {sorted(extra)} (one swept parameter only)")
    dotted = _str(sweep, "param", required=True)
    lo = _float(sweep, "from", required=True)
    hi = _float(sweep, "to", required=True)
    steps = _int(sweep, "steps", required=True)
    if steps < 2:
        raise ConfigError("field 'sweep.steps' must be at least 2")
    values = np.linspace(lo, hi, steps)

    def one(value: float) -> list[tuple[str, str]]:
        local = json.loads(json.dumps(params))  # deep copy of plain data
        _set_by_path(local, dotted, float(value))
        results, _ = _execute(command, local)
        return _flatten(results)

    max_workers = max(1, int(os.environ.get("PHOTONPATH_THREADS", "1")))
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(one, values))
    else:
        rows = [one(v) for v in values]

    columns = [name for name, _ in rows[0]]
    for i, row in enumerate(rows):
        if [name for name, _ in row] != columns:
            raise ValueError(f"sweep row {i} produced a different column set")
    digest = hashlib.sha256(config_bytes).hexdigest()
    lines = [
        f"# photonpath {__version__} command={command} sweep={dotted} input_sha256={digest}",
        f"# rows: {dotted} swept from {_fmt_number(lo)} to {_fmt_number(hi)} in {steps} steps",
        ",".join([dotted] + columns),
    ]
    for value, row in zip(values, rows):
        lines.append(",".join([_fmt_number(float(value))] + [text for _, text in row]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _load_config(path: str) -> tuple[dict, bytes]:
    try:
        with open(path, "rb") as handle:
            raw = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    try:
        parsed = tomllib.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"config file {path!r} is not valid TOML: {exc}") from exc
    return parsed, raw


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photonpath",
        description="Photon path-amplitude calculations from TOML configs",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="TOML config file")
    parser.add_argument("--out", default=None, help="output file (default: stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default=None)
    parser.add_argument(
        "--validate-only",
        action="store_true",
        help="parse and schema-check the config without executing",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config, raw = _load_config(args.config)
        declared = config.pop("command", None)
        if declared is not None and declared != args.command:
            raise ConfigError(
                f"field 'command': config declares {declared!r} but {args.command!r} was invoked"
            )
        sweep = config.pop("sweep", None)
        output = config.pop("output", {})
        if not isinstance(output, dict):
            raise ConfigError("field 'output' must be a table")
        out_path = args.out if args.out is not None else _str(output, "path", default=None)
        fmt = args.format if args.format is not None else _str(
            output, "format", default=None, choices={"json", "csv"}
        )
        if fmt is None:
            fmt = "csv" if sweep is not None else "json"
        if sweep is not None and fmt != "csv":
            raise ConfigError("field 'output.format': sweeps emit CSV only")

        if args.validate_only:
            # dry-run the schema by executing nothing: runner-level validation
            # happens on execution, so only structural checks apply here
            _validate_structure(args.command, config, sweep)
            return 0

        if sweep is not None:
            text = _run_sweep(args.command, config, sweep, raw)
        else:
            results, warn = _execute(args.command, config)
            envelope = _envelope(args.command, raw, results, warn)
            text = _serialize_json(envelope) if fmt == "json" else _serialize_csv_single(envelope)
    except ConfigError as exc:
        print(f"photonpath: config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"photonpath: domain error: {exc}", file=sys.stderr)
        return 3

    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    return 0


def _validate_structure(command: str, params: dict, sweep) -> None:
    """Schema checks that do not require running the physics."""
    if sweep is not None:
        if not isinstance(sweep, dict):
            raise ConfigError("field 'sweep' must be a single table")
        _str(sweep, "param", required=True)
        _float(sweep, "from", required=True)
        _float(sweep, "to", required=True)
        if _int(sweep, "steps", required=True) < 2:
            raise ConfigError("field 'sweep.steps' must be at least 2")
    # run the command's own parameter extraction against a deep copy, but
    # swallow domain errors: --validate-only checks the schema only
    try:
        _RUNNERS[command](json.loads(json.dumps(params)))
    except ConfigError:
        raise
    except ValueError:
        pass


if __name__ == "__main__":
    sys.exit(main())
