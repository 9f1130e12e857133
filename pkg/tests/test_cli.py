import json
import math
import pathlib
import subprocess
import sys

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from photonpath.cli import main

REPO = pathlib.Path(__file__).resolve().parents[1]
CONFIGS = REPO / "configs"


def run_cli(args):
    return main([str(a) for a in args])


def run_config(config_path, out_path, extra=()):
    command = tomllib.loads(pathlib.Path(config_path).read_text())["command"]
    code = run_cli([command, "--config", config_path, "--out", out_path, *extra])
    assert code == 0, f"{config_path} exited {code}"
    return pathlib.Path(out_path).read_bytes()


def load_results(config_path, tmp_path, name="out.json"):
    out = tmp_path / name
    raw = run_config(config_path, out)
    return json.loads(raw)["results"]


def test_every_documented_config_runs_and_is_deterministic(tmp_path):
    configs = sorted(CONFIGS.glob("*.toml"))
    assert len(configs) >= 16
    for config in configs:
        first = run_config(config, tmp_path / "a.out")
        second = run_config(config, tmp_path / "b.out")
        assert first == second, f"nondeterministic output for {config.name}"
        assert len(first) > 0


def test_console_entry_point_subprocess(tmp_path):
    out = tmp_path / "fock.json"
    proc = subprocess.run(
        [sys.executable, "-m", "photonpath", "fock",
         "--config", str(CONFIGS / "fock.toml"), "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    envelope = json.loads(out.read_text())
    assert envelope["command"] == "fock"
    probs = envelope["results"]["probabilities"]
    assert abs(probs[0] - 0.5) < 1e-12
    assert probs[1] < 1e-14
    assert abs(probs[2] - 0.5) < 1e-12


def test_envelope_structure_and_roundtrip(tmp_path):
    out = tmp_path / "splitter.json"
    raw = run_config(CONFIGS / "splitter.toml", out)
    envelope = json.loads(raw)
    assert set(envelope) == {"command", "input_sha256", "library_version", "results", "warnings"}
    assert envelope["library_version"]
    assert len(envelope["input_sha256"]) == 64
    # lossless serialization round trip
    assert json.loads(json.dumps(envelope)) == envelope
    results = envelope["results"]
    assert results["valid"] is True
    assert abs(results["pcm_channel1"][0] - 1.0) < 1e-12
    assert abs(results["pcm_channel2"][0]) < 1e-12


def test_sagnac_at_rest_detects_nothing(tmp_path):
    results = load_results(CONFIGS / "sagnac_rest.toml", tmp_path)
    assert results["phase_difference_rad"] == 0.0
    assert results["detection_probability"] < 1e-12


def test_layers_orientations_agree_field_by_field(tmp_path):
    forward = load_results(CONFIGS / "layers.toml", tmp_path, "fwd.json")
    backward = load_results(CONFIGS / "layers_reversed.toml", tmp_path, "bwd.json")
    for a, b in (("tau_front", "tau_back"), ("tau_back", "tau_front"),
                 ("rho_front", "rho_back"), ("rho_back", "rho_front")):
        assert abs(complex(*forward[a]) - complex(*backward[b])) < 1e-12
    assert abs(forward["transmittance_front"] - backward["transmittance_back"]) < 1e-12


def test_scatter_reports_reciprocity(tmp_path):
    results = load_results(CONFIGS / "scatter.toml", tmp_path)
    assert results["tensor_symmetric"] is True
    scale = abs(complex(*results["amplitude_v"]))
    assert results["reciprocity_residual"] < 1e-10 * scale


def _read_sweep_csv(path):
    lines = pathlib.Path(path).read_text().splitlines()
    comments = [line for line in lines if line.startswith("#")]
    assert comments, "sweep CSV must document its columns in header comments"
    header = lines[len(comments)].split(",")
    rows = np.array([[float(v) for v in line.split(",")] for line in lines[len(comments) + 1:]])
    return header, rows


def test_mzi_sweep_matches_closed_form(tmp_path):
    out = tmp_path / "mzi.csv"
    run_config(CONFIGS / "mzi_sweep.toml", out)
    header, rows = _read_sweep_csv(out)
    phi = rows[:, header.index("phi2")]
    p1 = rows[:, header.index("exit1_probability")]
    assert np.max(np.abs(p1 - np.cos(phi / 2) ** 2)) < 1e-12


def test_hom_sweep_matches_closed_form(tmp_path):
    out = tmp_path / "hom.csv"
    run_config(CONFIGS / "hom_sweep.toml", out)
    header, rows = _read_sweep_csv(out)
    r = rows[:, header.index("splitter.reflectance")]
    coincidence = rows[:, header.index("coincidence_probability")]
    assert np.max(np.abs(coincidence - (2 * r - 1) ** 2)) < 1e-12


def test_thermal_sweep_mean_linear_in_reflectance(tmp_path):
    out = tmp_path / "thermal.csv"
    run_config(CONFIGS / "thermal_sweep.toml", out)
    header, rows = _read_sweep_csv(out)
    r = rows[:, header.index("splitter.reflectance")]
    mean = rows[:, header.index("reflected_mean")]
    assert np.max(np.abs(mean - 2.0 * r)) < 1e-12


def test_sweep_rejects_json_format(tmp_path):
    config = tmp_path / "sweep.toml"
    config.write_text(
        '[splitter]\nreflectance = 0.5\n'
        '[sweep]\nparam = "splitter.reflectance"\nfrom = 0.1\nto = 0.9\nsteps = 3\n'
    )
    assert run_cli(["hom", "--config", config, "--format", "json"]) == 2


def test_sweep_rejects_multiple_parameters(tmp_path):
    config = tmp_path / "bad_sweep.toml"
    config.write_text(
        '[splitter]\nreflectance = 0.5\n'
        '[sweep]\nparam = "splitter.reflectance"\nfrom = 0.0\nto = 1.0\nsteps = 4\n'
        'extra = 1\n'
    )
    assert run_cli(["hom", "--config", config]) == 2


def test_schema_violations_exit_2_with_named_field(tmp_path, capsys):
    config = tmp_path / "bad.toml"
    config.write_text('n1 = "one"\nn2 = 1\n[splitter]\nmod_rho = 0.5\n')
    assert run_cli(["fock", "--config", config]) == 2
    assert "'n1'" in capsys.readouterr().err

    config.write_text("n2 = 1\n[splitter]\nmod_rho = 0.5\n")
    assert run_cli(["fock", "--config", config]) == 2
    assert "'n1'" in capsys.readouterr().err

    config.write_text("n1 = 1\nn2 = 1\n[splitter]\nmod_rho = 1.5\n")
    assert run_cli(["fock", "--config", config]) == 2
    assert "mod_rho" in capsys.readouterr().err


def test_command_mismatch_rejected(tmp_path, capsys):
    assert run_cli(["hom", "--config", CONFIGS / "fock.toml"]) == 2
    assert "command" in capsys.readouterr().err


def test_domain_errors_exit_3(tmp_path, capsys):
    config = tmp_path / "too_many.toml"
    config.write_text("n1 = 30\nn2 = 1\n[splitter]\nmod_rho = 0.5\n")
    assert run_cli(["fock", "--config", config]) == 3
    assert "bound" in capsys.readouterr().err


def test_missing_config_file_exits_2():
    assert run_cli(["fock", "--config", "/nonexistent/nowhere.toml"]) == 2


def test_validate_only(tmp_path):
    assert run_cli(["fock", "--config", CONFIGS / "fock.toml", "--validate-only"]) == 0
    bad = tmp_path / "bad.toml"
    bad.write_text('n1 = "one"\nn2 = 1\n[splitter]\nmod_rho = 0.5\n')
    assert run_cli(["fock", "--config", bad, "--validate-only"]) == 2


def test_single_run_csv_format(tmp_path):
    out = tmp_path / "hom.csv"
    run_config(CONFIGS / "hom.toml", out, extra=["--format", "csv"])
    text = out.read_text().splitlines()
    assert text[0].startswith("#")
    header = text[2].split(",")
    values = text[3].split(",")
    idx = header.index("coincidence_probability")
    assert abs(float(values[idx]) - 0.16) < 1e-12
    # 17 significant digits, lowercase scientific
    assert "e" in values[idx] and "E" not in values[idx]


def test_outputs_carry_no_nonfinite_values(tmp_path):
    for config in sorted(CONFIGS.glob("*.toml")):
        out = tmp_path / (config.stem + ".out")
        raw = run_config(config, out).decode()
        assert "NaN" not in raw and "Infinity" not in raw and "inf" not in raw.lower()


def test_output_table_in_config(tmp_path):
    out = tmp_path / "from_table.csv"
    config = tmp_path / "hom.toml"
    config.write_text(
        '[splitter]\nreflectance = 0.7\nphi_rho = 0.0\n'
        f'[output]\nformat = "csv"\npath = "{out}"\n'
    )
    assert run_cli(["hom", "--config", config]) == 0
    assert out.exists()
    assert "coincidence_probability" in out.read_text()


def test_sweep_thread_cap_keeps_output_identical(tmp_path, monkeypatch):
    sequential = tmp_path / "seq.csv"
    run_config(CONFIGS / "mzi_sweep.toml", sequential)
    monkeypatch.setenv("PHOTONPATH_THREADS", "4")
    threaded = tmp_path / "par.csv"
    run_config(CONFIGS / "mzi_sweep.toml", threaded)
    assert sequential.read_bytes() == threaded.read_bytes()


def test_thermal_example_results(tmp_path):
    results = load_results(CONFIGS / "thermal.toml", tmp_path)
    assert abs(results["reflected_mean"] - 1.0) < 1e-12
    assert abs(results["reflected_variance"] - 2.0) < 1e-12


def test_mzi_example_results(tmp_path):
    results = load_results(CONFIGS / "mzi.toml", tmp_path)
    assert abs(results["exit1_probability"] - math.cos(math.pi / 6) ** 2) < 1e-12
