"""Scenario configuration: operating point of the cell plus species data.

Config documents are JSON with frequencies given as cyclic Hz (the lab
convention); they are converted to angular rad/s on load.  Unknown keys
are rejected so typos fail loudly instead of silently using a default.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from importlib import resources

from .constants import CESIUM, SpeciesData, angular_to_hz, hz_to_angular

DEFAULT_CONFIG_RESOURCE = "cesium.json"


class ScenarioError(ValueError):
    """Raised when a scenario document fails validation."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Operating point of the memory, all values SI with rad/s frequencies.

    omega_b            Larmor frequency of the bias field
    pulse_duration     light pulse / interaction time tau (also the
                       quantization window of the pulse modes)
    probe_detuning     detuning of the quantum probe from the D2 line
    stark_detuning     detuning of the compensation light from the D1
                       line center
    microwave_detuning detuning of the dressing microwave from the
                       ground hyperfine transition
    atom_number        atoms per pumped class
    photon_number      photons in the probe pulse
    beam_area          beam cross section, m^2
    atom_density       vapor density, m^-3
    boundary_loss      intensity loss per cell-window crossing
    feedback_gain      homodyne feedback gain g of the write step
    species            line data (defaults to cesium)
    """

    omega_b: float
    pulse_duration: float
    probe_detuning: float
    stark_detuning: float
    microwave_detuning: float
    atom_number: float
    photon_number: float
    beam_area: float
    atom_density: float
    boundary_loss: float
    feedback_gain: float
    species: SpeciesData


# JSON key -> (ScenarioConfig field, converter). Frequencies are cyclic Hz
# in the document and angular rad/s in the config object.
_SCALAR_KEYS = {
    "omega_b_hz": ("omega_b", hz_to_angular),
    "tau_s": ("pulse_duration", float),
    "probe_detuning_hz": ("probe_detuning", hz_to_angular),
    "stark_detuning_hz": ("stark_detuning", hz_to_angular),
    "microwave_detuning_hz": ("microwave_detuning", hz_to_angular),
    "atom_number": ("atom_number", float),
    "photon_number": ("photon_number", float),
    "beam_area_m2": ("beam_area", float),
    "atom_density_m3": ("atom_density", float),
    "boundary_loss": ("boundary_loss", float),
    "feedback_gain": ("feedback_gain", float),
}

_SPECIES_KEYS = {
    "lambda_d1_m": ("lambda_d1", float),
    "lambda_d2_m": ("lambda_d2", float),
    "gamma_d1_hz": ("gamma_d1", hz_to_angular),
    "gamma_d2_hz": ("gamma_d2", hz_to_angular),
    "delta_hf_hz": ("delta_hf", hz_to_angular),
    "delta2_hz": ("delta2", hz_to_angular),
    "doppler_halfwidth_hz": ("doppler_halfwidth", hz_to_angular),
    "mean_speed_m_s": ("mean_speed", float),
    "spin_exchange_cross_section_m2": ("spin_exchange_cross_section", float),
    "f_ground": ("f_ground", int),
    "g_f": ("g_f", float),
}

# Documented defaults, in document units. Matches data/cesium.json.
DEFAULTS = {
    "omega_b_hz": 3.0e5,
    "tau_s": 1.0e-3,
    "probe_detuning_hz": 7.0e8,
    "stark_detuning_hz": 3.0e9,
    "microwave_detuning_hz": 3.6e7,
    "atom_number": 1.0e12,
    "photon_number": 1.0e12,
    "beam_area_m2": 2.0e-4,
    "atom_density_m3": 2.5e16,
    "boundary_loss": 0.01,
    "feedback_gain": -1.0,
}

_POSITIVE_FIELDS = ("tau_s", "atom_number", "photon_number", "beam_area_m2",
                    "atom_density_m3")
_NONZERO_FIELDS = ("probe_detuning_hz", "stark_detuning_hz", "microwave_detuning_hz")


def _coerce_number(key, raw):
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ScenarioError(f"field '{key}' must be a number, got {raw!r}")
    return float(raw)


def load_scenario(text: str) -> ScenarioConfig:
    """Parse a JSON scenario document; missing keys fall back to defaults."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")

    unknown = set(doc) - set(_SCALAR_KEYS) - {"species"}
    if unknown:
        raise ScenarioError(f"unknown scenario keys: {sorted(unknown)}")

    merged = dict(DEFAULTS)
    for key, raw in doc.items():
        if key == "species":
            continue
        merged[key] = _coerce_number(key, raw)

    for key in _POSITIVE_FIELDS:
        if merged[key] <= 0.0:
            raise ScenarioError(f"field '{key}' must be positive, got {merged[key]}")
    if merged["omega_b_hz"] < 0.0:
        raise ScenarioError(f"field 'omega_b_hz' must be non-negative, got {merged['omega_b_hz']}")
    for key in _NONZERO_FIELDS:
        if merged[key] == 0.0:
            raise ScenarioError(f"field '{key}' must be nonzero (it appears in denominators)")
    if not 0.0 <= merged["boundary_loss"] < 1.0:
        raise ScenarioError(
            f"field 'boundary_loss' must lie in [0, 1), got {merged['boundary_loss']}")

    species = CESIUM
    if "species" in doc:
        block = doc["species"]
        if not isinstance(block, dict):
            raise ScenarioError("field 'species' must be a JSON object")
        unknown = set(block) - set(_SPECIES_KEYS)
        if unknown:
            raise ScenarioError(f"unknown species keys: {sorted(unknown)}")
        overrides = {}
        for key, raw in block.items():
            field, conv = _SPECIES_KEYS[key]
            if key == "f_ground":
                if isinstance(raw, bool) or not isinstance(raw, int):
                    raise ScenarioError(f"field 'f_ground' must be an integer, got {raw!r}")
                if raw < 1:
                    raise ScenarioError(f"field 'f_ground' must be >= 1, got {raw}")
                overrides[field] = raw
            else:
                overrides[field] = conv(_coerce_number(key, raw))
        species = dataclasses.replace(CESIUM, **overrides)
        for field in ("lambda_d1", "lambda_d2", "gamma_d1", "gamma_d2",
                      "delta_hf", "delta2", "doppler_halfwidth", "mean_speed"):
            if getattr(species, field) <= 0.0:
                raise ScenarioError(f"species field '{field}' must be positive")

    kwargs = {}
    for key, (field, conv) in _SCALAR_KEYS.items():
        kwargs[field] = conv(merged[key]) if conv is not float else merged[key]
    return ScenarioConfig(species=species, **kwargs)


def load_scenario_file(path: str) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return load_scenario(fh.read())


def scenario_to_document(config: ScenarioConfig) -> dict:
    """Config back in document form (cyclic Hz), for editing and sweeps."""
    doc = {}
    for key, (fieldname, conv) in _SCALAR_KEYS.items():
        value = getattr(config, fieldname)
        doc[key] = angular_to_hz(value) if conv is hz_to_angular else value
    if config.species != CESIUM:
        block = {}
        for key, (fieldname, conv) in _SPECIES_KEYS.items():
            value = getattr(config.species, fieldname)
            block[key] = angular_to_hz(value) if conv is hz_to_angular else value
        doc["species"] = block
    return doc


def scenario_with(config: ScenarioConfig, key: str, value: float) -> ScenarioConfig:
    """Copy of ``config`` with one scalar document key replaced.

    ``key`` uses the document spelling (e.g. ``stark_detuning_hz``); the
    new value passes through the same validation as a loaded document.
    """
    if key not in _SCALAR_KEYS:
        raise ScenarioError(
            f"unknown scenario key '{key}'; choose from {sorted(_SCALAR_KEYS)}")
    doc = scenario_to_document(config)
    doc[key] = value
    return load_scenario(json.dumps(doc))


def default_scenario() -> ScenarioConfig:
    """The packaged cesium operating point."""
    text = resources.files("qmemcell").joinpath("data", DEFAULT_CONFIG_RESOURCE).read_text()
    return load_scenario(text)
