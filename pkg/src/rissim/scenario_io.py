"""Scenario files: YAML documents describing link operating points.

A bundle holds panel geometry, codebook bits, element mode, one MCS table,
per-scenario defaults, and a list of scenarios. Scenario entries override
defaults key by key. Validation is strict: unknown keys are errors unless
``lenient`` is set, in which case they warn.

The packaged ``tables_4_5_6.scenario`` bundle encodes the desk-scale
measurement campaign (array gain, obstacle, and beam-steering rows) with MCS
thresholds calibrated once against this model; ``scripts/calibrate_mcs.py``
regenerates it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml

from .channel import GainProfile
from .elements import Mode
from .errors import ConfigError
from .geometry import ArrayGeometry, Pose
from .link import LinkScenario, MCSRow, MCSTable, Obstacle

BUNDLED_SCENARIO_NAME = "tables_4_5_6.scenario"

_GEOMETRY_KEYS = {"num_x", "num_y", "spacing_x_m", "spacing_y_m"}
_GAIN_KEYS = {"tx_dbi", "rx_dbi", "ris_rx_side_dbi", "ris_tx_side_dbi"}
_POSE_KEYS = {"range_m", "polar_deg", "azimuth_deg"}
_OBSTACLE_KEYS = {"attenuation_db", "position"}
_MCS_KEYS = {"min_snr_db", "rate_mbps", "label"}
_SCENARIO_KEYS = {
    "name",
    "transmit_power_dbm",
    "carrier_hz",
    "bandwidth_hz",
    "noise_figure_db",
    "gains",
    "tx_pose",
    "rx_pose",
    "ris_present",
    "obstacle",
    "expected_rate_mbps",
}
_TOP_KEYS = {"description", "geometry", "bits", "mode", "mcs", "defaults", "scenarios"}


@dataclass(frozen=True)
class ScenarioBundle:
    description: str
    geometry: ArrayGeometry
    bits: int
    mode: Mode
    mcs: MCSTable
    scenarios: tuple[LinkScenario, ...]


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise ConfigError(f"{context}: missing required key '{key}'")
    return mapping[key]


def _check_keys(mapping: dict, allowed: set[str], context: str, lenient: bool) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        msg = f"{context}: unknown key(s) {sorted(unknown)}"
        if lenient:
            warnings.warn(msg)
        else:
            raise ConfigError(msg)


def _parse_number(value, key: str, context: str) -> float:
    if isinstance(value, str):
        # YAML 1.1 reads exponent literals like 27.0e9 as strings
        try:
            return float(value)
        except ValueError:
            pass
    elif isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    raise ConfigError(f"{context}: key '{key}' must be a number, got {value!r}")


def _parse_geometry(raw: dict, context: str, lenient: bool) -> ArrayGeometry:
    _check_keys(raw, _GEOMETRY_KEYS, context, lenient)
    return ArrayGeometry(
        num_x=int(_require(raw, "num_x", context)),
        num_y=int(_require(raw, "num_y", context)),
        spacing_x=_parse_number(_require(raw, "spacing_x_m", context), "spacing_x_m", context),
        spacing_y=_parse_number(_require(raw, "spacing_y_m", context), "spacing_y_m", context),
    )


def _parse_gains(raw: dict, context: str, lenient: bool) -> GainProfile:
    _check_keys(raw, _GAIN_KEYS, context, lenient)
    return GainProfile.from_gains(
        tx_gain_dbi=_parse_number(_require(raw, "tx_dbi", context), "tx_dbi", context),
        rx_gain_dbi=_parse_number(_require(raw, "rx_dbi", context), "rx_dbi", context),
        ris_rx_side_gain_dbi=_parse_number(
            _require(raw, "ris_rx_side_dbi", context), "ris_rx_side_dbi", context
        ),
        ris_tx_side_gain_dbi=_parse_number(
            _require(raw, "ris_tx_side_dbi", context), "ris_tx_side_dbi", context
        ),
    )


def _parse_pose(raw: dict, context: str, lenient: bool) -> Pose:
    _check_keys(raw, _POSE_KEYS, context, lenient)
    return Pose.from_spherical(
        range_m=_parse_number(_require(raw, "range_m", context), "range_m", context),
        polar=math.radians(_parse_number(raw.get("polar_deg", 0.0), "polar_deg", context)),
        azimuth=math.radians(_parse_number(raw.get("azimuth_deg", 0.0), "azimuth_deg", context)),
    )


def _parse_obstacle(raw, context: str, lenient: bool) -> Obstacle | None:
    if raw is None:
        return None
    _check_keys(raw, _OBSTACLE_KEYS, context, lenient)
    return Obstacle(
        attenuation_db=_parse_number(
            raw.get("attenuation_db", Obstacle().attenuation_db), "attenuation_db", context
        ),
        position=str(raw.get("position", "tx_side")),
    )


def _parse_mcs(raw, context: str, lenient: bool) -> MCSTable:
    if not isinstance(raw, list) or not raw:
        raise ConfigError(f"{context}: 'mcs' must be a non-empty list of rows")
    rows = []
    for i, entry in enumerate(raw):
        ctx = f"{context}: mcs[{i}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"{ctx}: each row must be a mapping")
        _check_keys(entry, _MCS_KEYS, ctx, lenient)
        rows.append(
            MCSRow(
                min_snr_db=_parse_number(_require(entry, "min_snr_db", ctx), "min_snr_db", ctx),
                rate_mbps=_parse_number(_require(entry, "rate_mbps", ctx), "rate_mbps", ctx),
                label=str(entry.get("label", "")),
            )
        )
    return MCSTable(rows=tuple(rows))


def load_scenario_bundle(path: str | Path, lenient: bool = False) -> ScenarioBundle:
    """Parse and validate a scenario bundle file."""
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    ctx = str(path)
    _check_keys(raw, _TOP_KEYS, ctx, lenient)
    geometry = _parse_geometry(_require(raw, "geometry", ctx), f"{ctx}: geometry", lenient)
    bits = int(_require(raw, "bits", ctx))
    mode = str(raw.get("mode", "realized"))
    if mode not in ("nominal", "realized"):
        raise ConfigError(f"{ctx}: mode must be 'nominal' or 'realized', got {mode!r}")
    mcs = _parse_mcs(_require(raw, "mcs", ctx), ctx, lenient)

    defaults = raw.get("defaults", {})
    if not isinstance(defaults, dict):
        raise ConfigError(f"{ctx}: 'defaults' must be a mapping")
    _check_keys(defaults, _SCENARIO_KEYS - {"name", "expected_rate_mbps"}, f"{ctx}: defaults", lenient)

    entries = _require(raw, "scenarios", ctx)
    if not isinstance(entries, list) or not entries:
        raise ConfigError(f"{ctx}: 'scenarios' must be a non-empty list")

    scenarios = []
    for i, entry in enumerate(entries):
        sctx = f"{ctx}: scenarios[{i}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"{sctx}: each scenario must be a mapping")
        _check_keys(entry, _SCENARIO_KEYS, sctx, lenient)
        merged = {**defaults, **entry}
        obstacle_raw = merged.get("obstacle")
        scenarios.append(
            LinkScenario(
                name=str(merged.get("name", f"scenario_{i}")),
                transmit_power_dbm=_parse_number(
                    _require(merged, "transmit_power_dbm", sctx), "transmit_power_dbm", sctx
                ),
                carrier_hz=_parse_number(_require(merged, "carrier_hz", sctx), "carrier_hz", sctx),
                bandwidth_hz=_parse_number(
                    _require(merged, "bandwidth_hz", sctx), "bandwidth_hz", sctx
                ),
                noise_figure_db=_parse_number(
                    merged.get("noise_figure_db", 0.0), "noise_figure_db", sctx
                ),
                gains=_parse_gains(_require(merged, "gains", sctx), f"{sctx}: gains", lenient),
                tx_pose=_parse_pose(_require(merged, "tx_pose", sctx), f"{sctx}: tx_pose", lenient),
                rx_pose=_parse_pose(_require(merged, "rx_pose", sctx), f"{sctx}: rx_pose", lenient),
                ris_present=bool(merged.get("ris_present", True)),
                obstacle=_parse_obstacle(obstacle_raw, f"{sctx}: obstacle", lenient),
                mcs=mcs,
                expected_rate_mbps=(
                    None
                    if merged.get("expected_rate_mbps") is None
                    else _parse_number(
                        merged["expected_rate_mbps"], "expected_rate_mbps", sctx
                    )
                ),
            )
        )
    return ScenarioBundle(
        description=str(raw.get("description", "")),
        geometry=geometry,
        bits=bits,
        mode=mode,
        mcs=mcs,
        scenarios=tuple(scenarios),
    )


def bundled_scenario_path() -> Path:
    """Filesystem path of the packaged calibration bundle."""
    return Path(resources.files("rissim").joinpath("data", BUNDLED_SCENARIO_NAME))


def load_bundled_scenarios() -> ScenarioBundle:
    return load_scenario_bundle(bundled_scenario_path())


def default_mcs_table() -> MCSTable:
    """The calibrated MCS table shipped with the package."""
    return load_bundled_scenarios().mcs
