"""Config schema: key validation, unit normalization, defaulting."""

import json

import numpy as np
import pytest

from emcavity.config import ConfigError, load_config, parse_config
from emcavity.constants import TWO_PI

GOOD = {
    "cavity": {"f_c_hz": 10.29184e9, "kappa_in_hz": 0.41e6, "kappa_ex_hz": 1.45e6},
    "mech": {"f_m_hz": 4.0e6, "gamma_hz": 100.0, "m_eff_kg": 2.0e-15},
    "pump": {"f_p_hz": 10.28784e9, "power_w": 1e-12},
    "coupling": {"g0_hz": 100.0, "n_cavity": 1e6},
}


def test_units_normalized_to_angular():
    params = parse_config(GOOD)
    assert params.cavity.omega_c == pytest.approx(TWO_PI * 10.29184e9)
    assert params.mech.gamma == pytest.approx(TWO_PI * 100.0)
    assert params.coupling.g0 == pytest.approx(TWO_PI * 100.0)


def test_missing_blocks_warn_but_parse():
    params = parse_config({"cavity": GOOD["cavity"]})
    assert params.mech is None
    assert any("mech" in w for w in params.warnings)


def test_unknown_top_level_block_rejected():
    with pytest.raises(ConfigError, match="extras"):
        parse_config({**GOOD, "extras": {}})


def test_unknown_key_rejected_with_path():
    bad = {"cavity": {**GOOD["cavity"], "q_factor": 1e5}}
    with pytest.raises(ConfigError, match=r"cavity\.q_factor"):
        parse_config(bad)


def test_missing_required_field():
    bad = {"cavity": {"f_c_hz": 1e9, "kappa_in_hz": 1e5}}
    with pytest.raises(ConfigError, match=r"cavity\.kappa_ex_hz"):
        parse_config(bad)


def test_non_numeric_value_rejected():
    bad = {"cavity": {**GOOD["cavity"], "f_c_hz": "ten"}}
    with pytest.raises(ConfigError, match=r"cavity\.f_c_hz"):
        parse_config(bad)


def test_negative_rate_rejected():
    bad = {"cavity": {**GOOD["cavity"], "kappa_in_hz": -1.0}}
    with pytest.raises(ConfigError):
        parse_config(bad)


def test_tripartite_occupations():
    data = {
        "tripartite": {
            "delta_a_hz": -4e6,
            "delta_c_hz": -4e6,
            "f_m_hz": 4e6,
            "g_b_hz": 2.78e6,
            "g_c_hz": 6.43e6,
            "kappa_a_in_hz": 0.8e6,
            "kappa_a_ex_hz": 1.2e6,
            "kappa_c_in_hz": 0.8e6,
            "kappa_c_ex_hz": 1.2e6,
            "gamma_hz": 100.0,
            "occupations": {"n_b_in": 12.5},
        }
    }
    p = parse_config(data).tripartite
    assert p.occupations.n_b_in == 12.5
    assert p.occupations.n_a_in == 0.0
    assert p.delta_a == pytest.approx(-TWO_PI * 4e6)
    with pytest.raises(ConfigError, match="n_bogus"):
        data["tripartite"]["occupations"]["n_bogus"] = 1.0
        parse_config(data)


def test_bundled_reference_config_loads():
    from pathlib import Path

    ref = Path(__file__).resolve().parents[1] / "configs" / "tripartite_sec63.json"
    p = load_config(ref).tripartite
    assert p.g_c == pytest.approx(TWO_PI * 6.43e6)
    assert p.delta_a == pytest.approx(-p.omega_m)


def test_load_config_file_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError, match="JSON"):
        load_config(bad)
