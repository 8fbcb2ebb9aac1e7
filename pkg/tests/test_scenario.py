"""Scenario documents: defaults, validation, round trips."""

import json
import math
import pathlib

import pytest

from qmemcell import CESIUM, ScenarioError, default_scenario, load_scenario, load_scenario_file
from qmemcell.scenario import DEFAULTS, scenario_to_document, scenario_with

REPO_ROOT = pathlib.Path(__file__).resolve().parents[1]
TWO_PI = 2.0 * math.pi


def test_default_scenario_values():
    cfg = default_scenario()
    assert cfg.omega_b == pytest.approx(TWO_PI * 3.0e5, rel=1e-15)
    assert cfg.pulse_duration == 1.0e-3
    assert cfg.probe_detuning == pytest.approx(TWO_PI * 7.0e8, rel=1e-15)
    assert cfg.stark_detuning == pytest.approx(TWO_PI * 3.0e9, rel=1e-15)
    assert cfg.microwave_detuning == pytest.approx(TWO_PI * 3.6e7, rel=1e-15)
    assert cfg.atom_number == 1.0e12
    assert cfg.photon_number == 1.0e12
    assert cfg.beam_area == 2.0e-4
    assert cfg.atom_density == 2.5e16
    assert cfg.boundary_loss == 0.01
    assert cfg.feedback_gain == -1.0
    assert cfg.species == CESIUM


def test_empty_document_equals_defaults():
    assert load_scenario("{}") == default_scenario()


def test_repo_root_config_matches_packaged_default():
    cfg = load_scenario_file(str(REPO_ROOT / "cesium.json"))
    assert cfg == default_scenario()


def test_microwave_default_detuning_consistency():
    # the documented default detuning is 120 Omega_B
    assert DEFAULTS["microwave_detuning_hz"] == pytest.approx(
        120.0 * DEFAULTS["omega_b_hz"], rel=1e-15)


def test_partial_document_overrides():
    cfg = load_scenario('{"omega_b_hz": 2.0e5, "boundary_loss": 0.02}')
    assert cfg.omega_b == pytest.approx(TWO_PI * 2.0e5, rel=1e-15)
    assert cfg.boundary_loss == 0.02
    assert cfg.pulse_duration == 1.0e-3


def test_unknown_key_rejected():
    with pytest.raises(ScenarioError, match="unknown scenario keys"):
        load_scenario('{"omega_b": 3.0e5}')


def test_unknown_species_key_rejected():
    with pytest.raises(ScenarioError, match="unknown species keys"):
        load_scenario('{"species": {"lambda_d3_m": 1.0e-6}}')


def test_invalid_json_rejected():
    with pytest.raises(ScenarioError, match="not valid JSON"):
        load_scenario("{")
    with pytest.raises(ScenarioError, match="JSON object"):
        load_scenario("[1, 2]")


def test_non_numeric_value_rejected():
    with pytest.raises(ScenarioError, match="must be a number"):
        load_scenario('{"omega_b_hz": "fast"}')
    with pytest.raises(ScenarioError, match="must be a number"):
        load_scenario('{"boundary_loss": true}')


def test_sign_validation():
    with pytest.raises(ScenarioError, match="positive"):
        load_scenario('{"tau_s": 0.0}')
    with pytest.raises(ScenarioError, match="non-negative"):
        load_scenario('{"omega_b_hz": -1.0}')
    with pytest.raises(ScenarioError, match="nonzero"):
        load_scenario('{"probe_detuning_hz": 0.0}')
    with pytest.raises(ScenarioError, match="boundary_loss"):
        load_scenario('{"boundary_loss": 1.0}')
    with pytest.raises(ScenarioError, match="boundary_loss"):
        load_scenario('{"boundary_loss": -0.1}')


def test_negative_detuning_allowed():
    cfg = load_scenario('{"probe_detuning_hz": -7.0e8}')
    assert cfg.probe_detuning == pytest.approx(-TWO_PI * 7.0e8, rel=1e-15)


def test_species_override():
    cfg = load_scenario('{"species": {"gamma_d1_hz": 5.0e6, "f_ground": 3}}')
    assert cfg.species.gamma_d1 == pytest.approx(TWO_PI * 5.0e6, rel=1e-15)
    assert cfg.species.f_ground == 3
    # untouched fields keep the cesium values
    assert cfg.species.lambda_d1 == CESIUM.lambda_d1


def test_species_validation():
    with pytest.raises(ScenarioError, match="f_ground"):
        load_scenario('{"species": {"f_ground": 2.5}}')
    with pytest.raises(ScenarioError, match="f_ground"):
        load_scenario('{"species": {"f_ground": 0}}')
    with pytest.raises(ScenarioError, match="positive"):
        load_scenario('{"species": {"mean_speed_m_s": -1.0}}')
    with pytest.raises(ScenarioError, match="JSON object"):
        load_scenario('{"species": 3}')


def test_document_round_trip():
    cfg = default_scenario()
    doc = scenario_to_document(cfg)
    assert "species" not in doc
    for key, value in DEFAULTS.items():
        assert doc[key] == pytest.approx(value, rel=1e-12)
    assert load_scenario(json.dumps(doc)) == cfg


def test_document_round_trip_with_species():
    cfg = load_scenario('{"species": {"g_f": 0.5}}')
    doc = scenario_to_document(cfg)
    assert doc["species"]["g_f"] == 0.5
    assert load_scenario(json.dumps(doc)) == cfg


def test_scenario_with_replaces_one_key():
    cfg = default_scenario()
    tweaked = scenario_with(cfg, "stark_detuning_hz", -3.0e9)
    assert tweaked.stark_detuning == pytest.approx(-TWO_PI * 3.0e9, rel=1e-12)
    assert tweaked.omega_b == cfg.omega_b
    # the replacement passes through full validation
    with pytest.raises(ScenarioError):
        scenario_with(cfg, "tau_s", -1.0)
    with pytest.raises(ScenarioError, match="unknown scenario key"):
        scenario_with(cfg, "species", 1.0)


def test_load_scenario_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text('{"omega_b_hz": 1.0e5}')
    cfg = load_scenario_file(str(path))
    assert cfg.omega_b == pytest.approx(TWO_PI * 1.0e5, rel=1e-15)
