"""End-to-end CLI: exit codes, file outputs, manifests, determinism."""

import csv
import json
from pathlib import Path

import numpy as np
import pytest

from emcavity.cli import main
from emcavity.constants import TWO_PI
from emcavity.core import thermal_occupation

REFERENCE_CONFIG = str(Path(__file__).resolve().parents[1] / "configs" / "tripartite_sec63.json")

CAVITY_CONFIG = {
    "cavity": {"f_c_hz": 10.29184e9, "kappa_in_hz": 0.41e6, "kappa_ex_hz": 1.45e6},
    "mech": {"f_m_hz": 4.0e6, "gamma_hz": 100.0, "m_eff_kg": 2.0e-15},
    "pump": {"f_p_hz": 10.29184e9 - 4.0e6, "power_w": 1e-12},
    "coupling": {"g0_hz": 100.0, "n_cavity": 4.0e2},
    "background": {"amplitude": 0.2, "tau_s": 6.0e-8, "phi_rad": 0.8, "delta_hz": 0.0},
}


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "system.json"
    path.write_text(json.dumps(CAVITY_CONFIG))
    return str(path)


def run(args):
    return main(list(args))


class TestThermal:
    def test_value_and_exit_code(self, capsys):
        assert run(["thermal", "--f-hz", "10e9", "--t-k", "4.0"]) == 0
        out = capsys.readouterr().out.strip()
        assert float(out) == pytest.approx(thermal_occupation(TWO_PI * 10e9, 4.0), rel=1e-15)

    def test_negative_frequency_is_numerical_error(self):
        assert run(["thermal", "--f-hz", "-1.0", "--t-k", "4.0"]) == 3

    def test_missing_option_is_usage_error(self):
        assert run(["thermal", "--f-hz", "1e9"]) == 1


class TestReflect:
    def test_writes_csv_and_manifest(self, config_file, tmp_path, capsys):
        out = tmp_path / "spectrum.csv"
        code = run(
            [
                "reflect",
                "--config", config_file,
                "--f-start-hz", "10.27184e9",
                "--f-stop-hz", "10.31184e9",
                "--points", "101",
                "--out", str(out),
            ]
        )
        assert code == 0
        with open(out) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 101
        assert set(rows[0]) == {"f_hz", "re", "im", "mag_db", "phase_rad"}
        mags = [10 ** (float(r["mag_db"]) / 20.0) for r in rows]
        # dip floor (kappa_ex - kappa_in)/kappa ~ 0.559, wings near 1
        assert min(mags) < 0.6
        assert max(mags) > 0.95
        manifest = json.loads((tmp_path / "spectrum.csv.manifest.json").read_text())
        assert manifest["tool_version"]
        assert manifest["config_sha256"]
        assert str(out) in manifest["outputs"]

    def test_missing_config_is_data_error(self, tmp_path):
        code = run(
            [
                "reflect",
                "--config", str(tmp_path / "nope.json"),
                "--f-start-hz", "1e9",
                "--f-stop-hz", "2e9",
                "--out", str(tmp_path / "x.csv"),
            ]
        )
        assert code == 1  # unreadable config is a config error

    def test_bad_grid_is_usage_error(self, config_file, tmp_path):
        code = run(
            [
                "reflect",
                "--config", config_file,
                "--f-start-hz", "2e9",
                "--f-stop-hz", "1e9",
                "--out", str(tmp_path / "x.csv"),
            ]
        )
        assert code == 1

    def test_config_without_cavity_block(self, tmp_path):
        path = tmp_path / "mech_only.json"
        path.write_text(json.dumps({"mech": CAVITY_CONFIG["mech"]}))
        code = run(
            [
                "reflect",
                "--config", str(path),
                "--f-start-hz", "1e9",
                "--f-stop-hz", "2e9",
                "--out", str(tmp_path / "x.csv"),
            ]
        )
        assert code == 1


class TestOmitAndDamping:
    def test_omit_single_point(self, config_file, capsys):
        f_probe = CAVITY_CONFIG["pump"]["f_p_hz"] + 4.0e6
        assert run(["omit", "--config", config_file, "--f-hz", str(f_probe)]) == 0
        out = capsys.readouterr().out
        assert "re=" in out and "mag_db=" in out

    def test_damping_sign_flips_with_detuning(self, config_file, capsys):
        assert run(["damping", "--config", config_file, "--detuning-hz", "4e6"]) == 0
        cooling = float(capsys.readouterr().out.strip())
        assert run(["damping", "--config", config_file, "--detuning-hz", "-4e6"]) == 0
        heating = float(capsys.readouterr().out.strip())
        assert cooling > 0 > heating
        assert cooling == pytest.approx(-heating, rel=1e-12)


class TestTripartite:
    def test_sweep_csv(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code = run(
            [
                "tripartite", "sweep",
                "--config", REFERENCE_CONFIG,
                "--axis", "g_b_hz=0:4e6:9",
                "--out", str(out),
            ]
        )
        assert code == 0
        with open(out) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 9
        assert rows[0]["stable"] == "true"
        assert float(rows[0]["log_negativity"]) <= 1e-9  # g_b = 0
        assert rows[-1]["stable"] == "false" and rows[-1]["zeta_minus"] == ""
        mid = [float(r["log_negativity"]) for r in rows if r["stable"] == "true"][1:]
        assert max(mid) > 0.1

    def test_sweep_axis_parsing_errors(self, tmp_path):
        base = [
            "tripartite", "sweep", "--config", REFERENCE_CONFIG,
            "--out", str(tmp_path / "x.csv"),
        ]
        assert run(base + ["--axis", "g_b=0:1e6:5"]) == 1  # missing _hz
        assert run(base + ["--axis", "gamma_hz=0:1e6:5"]) == 1  # not sweepable
        assert run(base + ["--axis", "g_b_hz=0:1e6"]) == 1  # malformed range

    def test_two_axis_sweep_row_count(self, tmp_path):
        out = tmp_path / "grid.csv"
        code = run(
            [
                "tripartite", "sweep",
                "--config", REFERENCE_CONFIG,
                "--axis", "g_b_hz=0:3e6:4",
                "--axis2", "g_c_hz=5e6:7e6:3",
                "--out", str(out),
            ]
        )
        assert code == 0
        rows = out.read_text().strip().splitlines()
        assert len(rows) == 1 + 12
        assert rows[0].startswith("g_b_hz,g_c_hz,")

    def test_critical_coupling(self, capsys):
        code = run(
            [
                "tripartite", "critical",
                "--config", REFERENCE_CONFIG,
                "--axis", "g_b",
                "--bracket-hz", "2e6,5e6",
            ]
        )
        assert code == 0
        g_crit = float(capsys.readouterr().out.strip())
        assert 2.7e6 < g_crit < 3.0e6

    def test_critical_bad_bracket_is_numerical_error(self):
        code = run(
            [
                "tripartite", "critical",
                "--config", REFERENCE_CONFIG,
                "--axis", "g_b",
                "--bracket-hz", "0,1e6",
            ]
        )
        assert code == 3


class TestSynthFitPipeline:
    def test_synth_deterministic(self, config_file, tmp_path):
        a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
        for path, seed in ((a, "7"), (b, "7"), (c, "8")):
            code = run(
                [
                    "synth", "--config", config_file,
                    "--snr-db", "40", "--seed", seed,
                    "--points", "201", "--out", str(path),
                ]
            )
            assert code == 0
        assert a.read_text() == b.read_text()
        assert a.read_text() != c.read_text()
        manifest = json.loads((tmp_path / "a.csv.manifest.json").read_text())
        assert manifest["seed"] == 7

    def test_synth_noise_requires_seed(self, config_file, tmp_path):
        code = run(
            [
                "synth", "--config", config_file,
                "--snr-db", "40", "--out", str(tmp_path / "x.csv"),
            ]
        )
        assert code == 1

    def test_synth_then_fit_recovers_config(self, config_file, tmp_path):
        trace = tmp_path / "trace.csv"
        fitjson = tmp_path / "fit.json"
        assert run(["synth", "--config", config_file, "--out", str(trace)]) == 0
        assert run(["fit", "reflect", "--in", str(trace), "--out", str(fitjson)]) == 0
        doc = json.loads(fitjson.read_text())
        assert doc["convergence"]["converged"]
        p = doc["params"]
        assert p["f_c_hz"] == pytest.approx(CAVITY_CONFIG["cavity"]["f_c_hz"], rel=1e-9)
        assert p["kappa_in_hz"] == pytest.approx(CAVITY_CONFIG["cavity"]["kappa_in_hz"], rel=1e-5)
        assert p["kappa_ex_hz"] == pytest.approx(CAVITY_CONFIG["cavity"]["kappa_ex_hz"], rel=1e-5)
        assert p["amplitude"] == pytest.approx(0.2, rel=1e-5)

    def test_fit_on_garbage_is_data_error(self, tmp_path):
        bad = tmp_path / "garbage.csv"
        bad.write_text("f_hz,re,im\n1.0,2.0\n")
        code = run(["fit", "reflect", "--in", str(bad), "--out", str(tmp_path / "f.json")])
        assert code == 2

    def test_fit_missing_input_is_data_error(self, tmp_path):
        code = run(
            ["fit", "reflect", "--in", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "f.json")]
        )
        assert code == 2


class TestDevice:
    @pytest.fixture
    def device_files(self, tmp_path):
        gap, area, volts, n = 100e-9, 1e-8, 1.0, 50
        z = (np.arange(n) + 0.5) * gap / n
        vol = tmp_path / "vol.csv"
        with open(vol, "w") as fh:
            fh.write("x_m,y_m,z_m,w_m3,eps_rel,ex_vpm,ey_vpm,ez_vpm,rho_kgpm3,qx_m,qy_m,qz_m\n")
            for zi in z:
                fh.write(
                    f"0,0,{float(zi)!r},{area*gap/n!r},1.0,0,0,{volts/gap!r},2329.0,0,0,1e-9\n"
                )
        surf = tmp_path / "surf.csv"
        from emcavity.constants import EPSILON_0 as eps0
        with open(surf, "w") as fh:
            fh.write(
                "x_m,y_m,z_m,a_m2,nx,ny,nz,qx_m,qy_m,qz_m,ex_vpm,ey_vpm,ez_vpm,"
                "dx_cpm2,dy_cpm2,dz_cpm2,eps1_rel,eps2_rel\n"
            )
            fh.write(
                f"0,0,{gap!r},{area!r},0,0,-1,0,0,-1e-9,0,0,{volts/gap!r},"
                f"0,0,{eps0*volts/gap!r},1e12,1.0\n"
            )
        lumped = tmp_path / "lumped.json"
        lumped.write_text('{"inductance_h": 2e-9, "stray_capacitance_f": 1.0e-14}')
        return vol, surf, lumped

    def test_meff_and_cap(self, device_files, capsys):
        vol, _, _ = device_files
        assert run(["device", "meff", "--volume", str(vol)]) == 0
        m_eff = float(capsys.readouterr().out.strip())
        assert m_eff == pytest.approx(2329.0 * 1e-8 * 100e-9, rel=1e-9)
        assert run(["device", "cap", "--volume", str(vol)]) == 0
        c_m = float(capsys.readouterr().out.strip())
        from emcavity.constants import EPSILON_0

        assert c_m == pytest.approx(EPSILON_0 * 1e-8 / 100e-9, rel=1e-9)

    def test_g0_pipeline(self, device_files, capsys):
        vol, surf, lumped = device_files
        code = run(
            [
                "device", "g0",
                "--volume", str(vol),
                "--surface", str(surf),
                "--lumped", str(lumped),
                "--f-m-hz", "4e6",
            ]
        )
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["g0_hz"] < 0  # plate closing the gap lowers the LC frequency
        assert 0 < doc["eta"] < 1
        assert doc["f_c_hz"] > 0
        # cross-check g0 against the scalar chain
        expected = (
            -doc["x_zpf_m"] * doc["eta"] * (TWO_PI * doc["f_c_hz"] / 2.0) * (1.0 / 100e-9)
        )
        assert doc["g0_hz"] * TWO_PI == pytest.approx(expected, rel=1e-6)

    def test_device_missing_file_is_data_error(self, tmp_path):
        assert run(["device", "meff", "--volume", str(tmp_path / "no.csv")]) == 2


class TestTopLevel:
    def test_version(self, capsys):
        assert run(["--version"]) == 0
        assert "emcavity" in capsys.readouterr().out

    def test_unknown_command(self):
        assert run(["frobnicate"]) == 1

    def test_threads_validation(self):
        assert run(["--threads", "0", "thermal", "--f-hz", "1e9", "--t-k", "1.0"]) == 1
        assert run(["--threads", "2", "thermal", "--f-hz", "1e9", "--t-k", "1.0"]) == 0
