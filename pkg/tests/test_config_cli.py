"""Config parsing, unit round-trips, CLI exit codes, output determinism."""

import json
import math
import os
import subprocess
import sys

import pytest

import floquet_cat as fc
from floquet_cat.cli import main as cli_main
from floquet_cat.config import PRESETS, parse_config
from floquet_cat.errors import ConfigError
from floquet_cat.params import TWO_PI


def test_preset_paper_set_1():
    cfg = parse_config(preset="paper-set-1", scenario="fig2_wigner")
    p = cfg.params
    assert p.omega_m == pytest.approx(TWO_PI * 5.0)
    assert p.omega_c == pytest.approx(TWO_PI * 4.827)
    assert p.omega_f1 == pytest.approx(TWO_PI * 5.0023)
    assert p.Omega_f1 / p.omega_f1 == pytest.approx(0.92)
    assert p.g1 == pytest.approx(TWO_PI * 0.120)
    assert p.g3 == pytest.approx(TWO_PI * 0.020)
    assert p.phi == pytest.approx(math.pi / 2)
    assert fc.derive_params(p).n0 == 1


def test_preset_paper_set_2():
    cfg = parse_config(preset="paper-set-2", scenario="fig5_fullmodel_wigner")
    assert cfg.params.omega_f1 == pytest.approx(TWO_PI * 8.0023)
    assert cfg.params.omega_c == pytest.approx(TWO_PI * 7.827)
    assert fc.derive_params(cfg.params).n0 == 1


def test_unit_round_trip():
    cfg = parse_config(preset="paper-set-1", scenario="fig2_wigner")
    ghz_back = cfg.params.omega_c / TWO_PI
    assert abs(ghz_back - PRESETS["paper-set-1"]["omega_c_ghz"]) < 1e-12 * ghz_back


def test_config_file_overrides_preset(tmp_path):
    path = tmp_path / "cfg.toml"
    path.write_text(
        'scenario = "fig2_wigner"\npreset = "paper-set-1"\n'
        "[params]\nkappa_m_mhz = 0.5\nn_magnon = 12\n"
        "[time]\nt_final_ns = 10.0\n"
        "[output]\ndirectory = 'xyz'\n")
    cfg = parse_config(str(path))
    assert cfg.params.kappa_m == pytest.approx(TWO_PI * 1e-3 * 0.5)
    assert cfg.params.n_magnon == 12
    assert cfg.t_final_ns == 10.0
    assert cfg.outdir == "xyz"


def test_missing_file():
    with pytest.raises(ConfigError, match="not found"):
        parse_config("/nonexistent/cfg.toml")


def test_parse_error_reports_position(tmp_path):
    path = tmp_path / "bad.toml"
    path.write_text("scenario = fig2\n")
    with pytest.raises(ConfigError, match="parse error"):
        parse_config(str(path))


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "cfg.toml"
    path.write_text('scenario = "fig2_wigner"\npreset = "paper-set-1"\n'
                    "[params]\nomega_x_ghz = 1.0\n")
    with pytest.raises(ConfigError, match="omega_x_ghz"):
        parse_config(str(path))


def test_empty_scenario_rejected(tmp_path):
    path = tmp_path / "cfg.toml"
    path.write_text('preset = "paper-set-1"\n')
    with pytest.raises(ConfigError, match="scenario"):
        parse_config(str(path))


def test_unknown_scenario_rejected():
    with pytest.raises(ConfigError, match="unknown scenario"):
        parse_config(preset="paper-set-1", scenario="fig9")


def test_out_of_range_value(tmp_path):
    path = tmp_path / "cfg.toml"
    path.write_text('scenario = "fig2_wigner"\npreset = "paper-set-1"\n'
                    "[params]\ng3_mhz = -3.0\n")
    with pytest.raises(ConfigError):
        parse_config(str(path))


def _tiny_fig2_config(tmp_path, outdir):
    path = tmp_path / "run.toml"
    path.write_text(
        'scenario = "fig2_wigner"\npreset = "paper-set-1"\n'
        "[params]\nn_magnon = 12\nn_cavity = 2\n"
        "[time]\nt_final_ns = 6.0\n"
        "[wigner]\nextent = 1.5\npoints = 21\n"
        f"[output]\ndirectory = '{outdir}'\n")
    return str(path)


def test_cli_exit_codes(tmp_path):
    assert cli_main(["run", "--config", "/nope.toml"]) == 2
    bad = tmp_path / "bad.toml"
    bad.write_text("scenario = ???\n")
    assert cli_main(["run", "--config", str(bad)]) == 2


def test_cli_fig2_end_to_end_and_determinism(tmp_path):
    out1 = tmp_path / "o1"
    out2 = tmp_path / "o2"
    cfg = _tiny_fig2_config(tmp_path, out1)
    assert cli_main(["run", "--config", cfg]) == 0
    files = sorted(os.listdir(out1))
    assert "wigner_pp.csv" in files and "metadata.json" in files
    with open(out1 / "wigner_pp.csv") as fh:
        header = fh.readline().strip()
    assert header == "re,im,w"
    meta = json.loads((out1 / "metadata.json").read_text())
    assert meta["config_hash"]
    assert meta["conventions"]["resolved_pair_spec_axes"]["alpha_scaling"] == "eta1"

    cfg2 = _tiny_fig2_config(tmp_path, out2)
    assert cli_main(["run", "--config", cfg2]) == 0
    for name in ("wigner_pp.csv", "wigner_mm.csv", "fock_pp.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    # metadata differs only in the output directory recorded in raw_config
    m1 = json.loads((out1 / "metadata.json").read_text())
    m2 = json.loads((out2 / "metadata.json").read_text())
    m1["raw_config"]["output"] = m2["raw_config"]["output"] = None
    m1["config_hash"] = m2["config_hash"] = None
    assert m1 == m2


def test_cli_custom_scenario(tmp_path):
    out = tmp_path / "custom"
    cfg = tmp_path / "c.toml"
    cfg.write_text(
        'scenario = "custom"\npreset = "paper-set-1"\n'
        "[params]\nn_magnon = 10\n[time]\nt_final_ns = 5.0\n"
        "[wigner]\nextent = 1.2\npoints = 11\n"
        f"[output]\ndirectory = '{out}'\n")
    assert cli_main(["run", "--config", str(cfg)]) == 0
    assert (out / "wigner_pp.csv").exists()
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["raw_config"]["scenario"] == "custom"


def test_cli_fig3_end_to_end(tmp_path):
    out = tmp_path / "scan"
    cfg = tmp_path / "scan.toml"
    cfg.write_text(
        'scenario = "fig3_dissipation_scan"\npreset = "paper-set-1"\n'
        "[params]\nn_magnon = 8\n"
        "[time]\nt_final_ns = 4.0\n"
        "[scan]\nrates_mhz = [0.0, 1.0]\nfixed_rate_mhz = 0.5\n"
        f"[output]\ndirectory = '{out}'\n")
    assert cli_main(["run", "--config", str(cfg), "--workers", "2"]) == 0
    lines = (out / "dissipation_scan.csv").read_text().strip().splitlines()
    assert len(lines) == 1 + 6 * 4 * 2
    meta = json.loads((out / "metadata.json").read_text())
    assert "dissipation_scan.csv" in meta["output_files"]


def test_cli_module_invocation():
    res = subprocess.run([sys.executable, "-m", "floquet_cat.cli", "run",
                          "--config", "/definitely/missing.toml"],
                         capture_output=True, text=True)
    assert res.returncode == 2
    assert "config error" in res.stderr
