"""Batch front end: subcommand dispatch, config ingestion, file outputs.

Subcommands: ``codebook`` (code grid + bias bitstream), ``pattern``
(radiation cuts + metrics), ``scan`` (steer sweep + scan loss), ``quantloss``
(loss vs bits), ``link`` (evaluate a scenario file), ``reproduce`` (scenario
bundle plus the chamber-style metric suite). Exit code 0 on success, 1 on
domain errors, 2 on usage errors. All numeric CSV columns carry unit
suffixes, and outputs are byte-deterministic for a fixed config.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .beams import BeamSpec, exhaustive_oracle, quantization_loss, sweep_phase_offset, synthesize_codebook
from .channel import exponent_from_gain, unity_gain_profile
from .codebook import bitstream_to_hex, encode_bias_bitstream, pack_bitstream
from .elements import ElementStateTable, default_element_table
from .errors import ConfigError, RisSimError
from .geometry import ArrayGeometry, Pose
from .link import required_transmit_power, evaluate_scenario
from .patterns import (
    directivity_and_gain,
    aperture_efficiency,
    hemisphere_grid,
    pattern_metrics,
    pattern_to_csv,
    principal_cut,
    radiation_pattern,
    scan_loss,
)
from .scenario_io import bundled_scenario_path, load_scenario_bundle

OUT_DIR_ENV = "RISSIM_OUT"

DEFAULT_FEED_RANGE_M = 0.05
DEFAULT_FEED_GAIN_DBI = 12.7  # panel feed horn; exponent follows from G = 2(q+1)
FAR_FIELD_RANGE_M = 100.0

_CONFIG_KEYS = {
    "output_dir",
    "grid_deg",
    "hemisphere_grid_deg",
    "bits",
    "mode",
    "seed",
    "element_table",
    "geometry",
    "feed",
    "beam",
    "scenario",
}
_FEED_KEYS = {"range_m", "gain_dbi", "exponent"}
_BEAM_KEYS = {"tx_pose", "rx_pose", "tx_model", "rx_model", "offset_deg"}


@dataclass
class RunConfig:
    """Resolved run options shared by the subcommands."""

    output_dir: Path
    geometry: ArrayGeometry = field(default_factory=lambda: ArrayGeometry(16, 16))
    element_table: ElementStateTable = field(default_factory=default_element_table)
    element_table_path: str = "(built-in)"
    carrier_hz: float = 27.0e9
    grid_deg: float = 0.25
    hemisphere_grid_deg: float = 1.0
    bits: tuple[int, ...] = (2,)
    mode: str = "nominal"
    seed: int = 0
    feed_range_m: float = DEFAULT_FEED_RANGE_M
    feed_exponent: float = exponent_from_gain(DEFAULT_FEED_GAIN_DBI)
    beam: BeamSpec | None = None
    scenario_path: Path | None = None

    def single_bits(self) -> int:
        if len(self.bits) != 1:
            raise ConfigError("this subcommand needs a single --bits value, not a range")
        return self.bits[0]

    def feed_pose(self) -> Pose:
        return Pose.from_spherical(self.feed_range_m, 0.0, 0.0)

    def header_lines(self) -> list[str]:
        g = self.geometry
        return [
            f"panel: {g.num_x}x{g.num_y} elements at ({g.spacing_x * 1e3:.3f}, "
            f"{g.spacing_y * 1e3:.3f}) mm pitch",
            f"element table: {self.element_table_path} ({self.element_table.bits}-bit)",
            f"bits: {','.join(str(b) for b in self.bits)}  mode: {self.mode}  "
            f"grid: {self.grid_deg} deg  seed: {self.seed}",
            f"output dir: {self.output_dir}",
        ]


def parse_bits(text: str) -> tuple[int, ...]:
    """Parse '2' or a range '1..4' into a tuple of bit counts."""
    try:
        if ".." in text:
            lo_s, hi_s = text.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
            if hi < lo:
                raise ValueError
            return tuple(range(lo, hi + 1))
        return (int(text),)
    except ValueError:
        raise ConfigError(f"--bits expects an integer or a range like 1..4, got {text!r}") from None


def _parse_pose_mapping(raw: dict, context: str) -> Pose:
    unknown = set(raw) - {"range_m", "polar_deg", "azimuth_deg"}
    if unknown:
        raise ConfigError(f"{context}: unknown key(s) {sorted(unknown)}")
    if "range_m" not in raw:
        raise ConfigError(f"{context}: missing required key 'range_m'")
    return Pose.from_spherical(
        float(raw["range_m"]),
        math.radians(float(raw.get("polar_deg", 0.0))),
        math.radians(float(raw.get("azimuth_deg", 0.0))),
    )


def load_run_config(path: str | Path) -> dict:
    """Read and strictly validate a run-config YAML file into plain options."""
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML: {exc}") from exc
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {sorted(unknown)}")
    if "feed" in raw:
        bad = set(raw["feed"]) - _FEED_KEYS
        if bad:
            raise ConfigError(f"{path}: feed: unknown key(s) {sorted(bad)}")
    if "beam" in raw:
        bad = set(raw["beam"]) - _BEAM_KEYS
        if bad:
            raise ConfigError(f"{path}: beam: unknown key(s) {sorted(bad)}")
    return raw


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """Merge config-file values and CLI flags (flags win) into a RunConfig."""
    file_cfg = load_run_config(args.config) if args.config else {}

    out = args.out or file_cfg.get("output_dir") or os.environ.get(OUT_DIR_ENV) or "rissim_out"
    cfg = RunConfig(output_dir=Path(out))

    if "geometry" in file_cfg:
        g = file_cfg["geometry"]
        unknown = set(g) - {"num_x", "num_y", "spacing_x_m", "spacing_y_m"}
        if unknown:
            raise ConfigError(f"geometry: unknown key(s) {sorted(unknown)}")
        cfg.geometry = ArrayGeometry(
            num_x=int(g.get("num_x", 16)),
            num_y=int(g.get("num_y", 16)),
            spacing_x=float(g.get("spacing_x_m", 4.9e-3)),
            spacing_y=float(g.get("spacing_y_m", 4.9e-3)),
        )
    if "element_table" in file_cfg:
        cfg.element_table = ElementStateTable.from_csv(file_cfg["element_table"])
        cfg.element_table_path = str(file_cfg["element_table"])
    if "feed" in file_cfg:
        feed = file_cfg["feed"]
        cfg.feed_range_m = float(feed.get("range_m", cfg.feed_range_m))
        if "exponent" in feed:
            cfg.feed_exponent = float(feed["exponent"])
        elif "gain_dbi" in feed:
            cfg.feed_exponent = exponent_from_gain(float(feed["gain_dbi"]))
    if "beam" in file_cfg:
        beam = file_cfg["beam"]
        cfg.beam = BeamSpec(
            tx=_parse_pose_mapping(beam.get("tx_pose", {"range_m": FAR_FIELD_RANGE_M}), "beam.tx_pose"),
            rx=_parse_pose_mapping(beam.get("rx_pose", {"range_m": FAR_FIELD_RANGE_M}), "beam.rx_pose"),
            tx_model=str(beam.get("tx_model", "auto")),
            rx_model=str(beam.get("rx_model", "auto")),
            phase_offset=math.radians(float(beam.get("offset_deg", 0.0))),
        )
    if "scenario" in file_cfg:
        cfg.scenario_path = Path(file_cfg["scenario"])

    cfg.grid_deg = args.grid_deg if args.grid_deg is not None else float(file_cfg.get("grid_deg", cfg.grid_deg))
    cfg.hemisphere_grid_deg = float(file_cfg.get("hemisphere_grid_deg", cfg.hemisphere_grid_deg))
    if args.bits is not None:
        cfg.bits = parse_bits(args.bits)
    elif "bits" in file_cfg:
        cfg.bits = parse_bits(str(file_cfg["bits"]))
    if args.mode is not None:
        cfg.mode = args.mode
    elif "mode" in file_cfg:
        mode = str(file_cfg["mode"])
        if mode not in ("nominal", "realized"):
            raise ConfigError(f"mode must be 'nominal' or 'realized', got {mode!r}")
        cfg.mode = mode
    cfg.seed = args.seed if args.seed is not None else int(file_cfg.get("seed", 0))
    if cfg.grid_deg <= 0:
        raise ConfigError(f"grid resolution must be positive, got {cfg.grid_deg}")
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    return cfg


def _pose_from_args(prefix: str, args: argparse.Namespace) -> Pose:
    return Pose.from_spherical(
        getattr(args, f"{prefix}_range"),
        math.radians(getattr(args, f"{prefix}_polar_deg")),
        math.radians(getattr(args, f"{prefix}_azimuth_deg")),
    )


def _steer_target(steer_deg: float, plane: str) -> Pose:
    """Far-field target for a signed steer angle in a principal plane."""
    base = 0.0 if plane == "E" else math.pi / 2.0
    azimuth = base if steer_deg >= 0 else base + math.pi
    return Pose.from_spherical(FAR_FIELD_RANGE_M, math.radians(abs(steer_deg)), azimuth)


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


# ---------------------------------------------------------------- codebook


def cmd_codebook(cfg: RunConfig, args: argparse.Namespace) -> int:
    bits = cfg.single_bits()
    spec = cfg.beam or BeamSpec(
        tx=_pose_from_args("tx", args),
        rx=_pose_from_args("rx", args),
        tx_model=args.tx_model,
        rx_model=args.rx_model,
        phase_offset=math.radians(args.offset_deg),
    )
    config = synthesize_codebook(spec, cfg.geometry, args.carrier_hz, bits)
    codes_path = cfg.output_dir / "codes.csv"
    config.to_csv(codes_path)
    outputs = [str(codes_path)]
    if bits == 2:
        bitstream = encode_bias_bitstream(config)
        bin_path = cfg.output_dir / "bias_bitstream.bin"
        bin_path.write_bytes(pack_bitstream(bitstream))
        hex_path = cfg.output_dir / "bias_bitstream.hex"
        hex_path.write_text(bitstream_to_hex(bitstream) + "\n")
        outputs += [str(bin_path), str(hex_path)]
    for line in cfg.header_lines():
        print(line)
    print(f"tx: d={spec.tx.range} m polar={math.degrees(spec.tx.polar):.2f} deg "
          f"({spec.tx_model}); rx: d={spec.rx.range} m polar={math.degrees(spec.rx.polar):.2f} deg "
          f"({spec.rx_model}); C={math.degrees(spec.phase_offset):.2f} deg")
    hist = np.bincount(config.codes.reshape(-1), minlength=1 << bits)
    print("code histogram: " + " ".join(f"{c}:{n}" for c, n in enumerate(hist)))
    print("wrote: " + ", ".join(outputs))
    return 0


# ----------------------------------------------------------------- pattern


def _study_cut(cfg: RunConfig, steer_deg: float, plane: str, element_exponent: float):
    target = _steer_target(steer_deg, plane)
    spec = BeamSpec(tx=cfg.feed_pose(), rx=target)
    config = synthesize_codebook(spec, cfg.geometry, cfg.carrier_hz, cfg.single_bits())
    return config, principal_cut(
        config,
        cfg.geometry,
        cfg.carrier_hz,
        plane=plane,
        step_deg=cfg.grid_deg,
        feed=cfg.feed_pose(),
        feed_exponent=cfg.feed_exponent,
        element_exponent=element_exponent,
        table=cfg.element_table,
        mode=cfg.mode,
    )


def cmd_pattern(cfg: RunConfig, args: argparse.Namespace) -> int:
    planes = ["E", "H"] if args.plane == "both" else [args.plane]
    for line in cfg.header_lines():
        print(line)
    rows = []
    for plane in planes:
        config, cut = _study_cut(cfg, args.steer_deg, plane, args.element_exponent)
        path = cfg.output_dir / f"pattern_cut_{plane.lower()}.csv"
        pattern_to_csv(cut, path)
        m = pattern_metrics(cut)
        rows.append([plane, f"{m.peak_direction_deg:.3f}", f"{m.sidelobe_level_db:.3f}",
                     f"{m.hpbw_deg:.3f}"])
        print(f"{plane}-plane: peak {m.peak_direction_deg:+.2f} deg, "
              f"SLL {m.sidelobe_level_db:.2f} dB, HPBW {m.hpbw_deg:.2f} deg -> {path}")
    _write_csv(
        cfg.output_dir / "pattern_metrics.csv",
        ["plane", "peak_direction_deg", "sidelobe_level_db", "hpbw_deg"],
        rows,
    )
    theta, phi = hemisphere_grid(cfg.hemisphere_grid_deg)
    spec = BeamSpec(tx=cfg.feed_pose(), rx=_steer_target(args.steer_deg, planes[0]))
    config = synthesize_codebook(spec, cfg.geometry, cfg.carrier_hz, cfg.single_bits())
    full = radiation_pattern(
        config, cfg.geometry, cfg.carrier_hz,
        feed=cfg.feed_pose(), feed_exponent=cfg.feed_exponent,
        element_exponent=args.element_exponent,
        theta=theta, phi=phi, table=cfg.element_table, mode=cfg.mode,
    )
    directivity_dbi, gain_dbi = directivity_and_gain(full, args.loss_budget_db)
    print(f"directivity {directivity_dbi:.2f} dBi, gain {gain_dbi:.2f} dBi "
          f"(loss budget {args.loss_budget_db:.2f} dB)")
    return 0


# -------------------------------------------------------------------- scan


def cmd_scan(cfg: RunConfig, args: argparse.Namespace) -> int:
    cfg.single_bits()  # reject bit ranges before any work
    angles = [args.step_deg * i for i in range(int(args.max_deg / args.step_deg) + 1)]
    for line in cfg.header_lines():
        print(line)
    rows = []
    reference: dict[str, object] = {}
    for plane in ("E", "H"):
        _, cut = _study_cut(cfg, 0.0, plane, args.element_exponent)
        reference[plane] = cut
    for angle in angles:
        row = [f"{angle:.1f}"]
        for plane in ("E", "H"):
            _, cut = _study_cut(cfg, -angle, plane, args.element_exponent)
            _, af_cut = _study_cut(cfg, -angle, plane, 0.0)
            loss = scan_loss(reference[plane], cut)
            pointing = af_cut.theta[int(np.argmax(af_cut.power[:, 0]))]
            row += [f"{loss:.3f}", f"{math.degrees(pointing):.3f}"]
        rows.append(row)
        print(f"steer {angle:5.1f} deg: E loss {row[1]} dB @ {row[2]} deg, "
              f"H loss {row[3]} dB @ {row[4]} deg")
    path = cfg.output_dir / "scan_loss.csv"
    _write_csv(
        path,
        ["steer_deg", "e_plane_loss_db", "e_plane_peak_deg", "h_plane_loss_db", "h_plane_peak_deg"],
        rows,
    )
    print(f"wrote: {path}")
    return 0


# --------------------------------------------------------------- quantloss


def cmd_quantloss(cfg: RunConfig, args: argparse.Namespace) -> int:
    spec = BeamSpec(
        tx=Pose.from_spherical(args.tx_range, 0.0, 0.0),
        rx=Pose.from_spherical(args.rx_range, 0.0, 0.0),
    )
    for line in cfg.header_lines():
        print(line)
    rows = []
    for bits in cfg.bits:
        loss = quantization_loss(cfg.geometry, spec, cfg.carrier_hz, bits,
                                 offset_samples=args.offset_samples)
        closed_form = -20.0 * math.log10(math.sin(math.pi / (1 << bits)) / (math.pi / (1 << bits)))
        rows.append([str(bits), f"{loss:.4f}", f"{closed_form:.4f}"])
        print(f"b={bits}: loss {loss:.3f} dB (uniform-phase closed form {closed_form:.3f} dB)")
    path = cfg.output_dir / "quantization_loss.csv"
    _write_csv(path, ["bits_count", "loss_db", "uniform_phase_closed_form_db"], rows)
    print(f"wrote: {path}")
    return 0


# -------------------------------------------------------------------- link


def _evaluate_bundle(cfg: RunConfig, path: Path):
    bundle = load_scenario_bundle(path)
    results = []
    for scenario in bundle.scenarios:
        res = evaluate_scenario(scenario, bundle.geometry, bundle.bits,
                                table=cfg.element_table, mode=bundle.mode)
        results.append((scenario, res))
    return bundle, results


def _link_rows(results) -> list[list[str]]:
    rows = []
    for scenario, res in results:
        expected = scenario.expected_rate_mbps
        status = ""
        if expected is not None:
            status = "ok" if res.rate_mbps == expected else "MISMATCH"
        rows.append([
            scenario.name,
            f"{scenario.transmit_power_dbm:.1f}",
            "1" if scenario.ris_present else "0",
            f"{scenario.obstacle.attenuation_db:.1f}" if scenario.obstacle else "0.0",
            f"{scenario.tx_steer_angle_deg:.1f}",
            f"{res.received_power_dbm:.3f}",
            f"{res.snr_db:.3f}",
            f"{res.rate_mbps:.0f}",
            "" if expected is None else f"{expected:.0f}",
            status,
        ])
    return rows


_LINK_HEADER = [
    "name", "transmit_power_dbm", "ris_present_flag", "obstacle_db", "steer_deg",
    "received_power_dbm", "snr_db", "rate_mbps", "expected_rate_mbps", "status",
]


def cmd_link(cfg: RunConfig, args: argparse.Namespace) -> int:
    path = Path(args.scenario) if args.scenario else (cfg.scenario_path or bundled_scenario_path())
    bundle, results = _evaluate_bundle(cfg, path)
    for line in cfg.header_lines():
        print(line)
    print(f"scenario file: {path} ({bundle.description})")
    rows = _link_rows(results)
    widths = [max(len(h), max(len(r[i]) for r in rows)) for i, h in enumerate(_LINK_HEADER)]
    print("  ".join(h.ljust(w) for h, w in zip(_LINK_HEADER, widths)))
    for row in rows:
        print("  ".join(v.ljust(w) for v, w in zip(row, widths)))
    out = cfg.output_dir / "link_report.csv"
    _write_csv(out, _LINK_HEADER, rows)
    print(f"wrote: {out}")
    mismatches = [r for r in rows if r[-1] == "MISMATCH"]
    if mismatches:
        print(f"{len(mismatches)} scenario(s) missed their expected rate", file=sys.stderr)
        return 1
    return 0


# --------------------------------------------------------------- reproduce


def cmd_reproduce(cfg: RunConfig, args: argparse.Namespace) -> int:
    checks: list[tuple[str, bool]] = []

    def check(name: str, ok: bool, detail: str) -> None:
        checks.append((name, ok))
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")

    for line in cfg.header_lines():
        print(line)

    # scenario bundle
    path = cfg.scenario_path or bundled_scenario_path()
    bundle, results = _evaluate_bundle(cfg, path)
    _write_csv(cfg.output_dir / "link_report.csv", _LINK_HEADER, _link_rows(results))
    bad = [s.name for s, r in results
           if s.expected_rate_mbps is not None and r.rate_mbps != s.expected_rate_mbps]
    check("scenario rates", not bad,
          f"{len(results)} rows from {path.name}" + (f"; mismatches: {bad}" if bad else ""))

    # required-power reduction for the back-to-back rate pair
    no_panel = next(s for s, _ in results if s.name == "array_gain_without_panel")
    with_panel = next(s for s, _ in results if s.name == "array_gain_with_panel")
    p_direct = required_transmit_power(no_panel, bundle.geometry, bundle.bits,
                                       1024.0, table=cfg.element_table, mode=bundle.mode)
    p_panel = required_transmit_power(with_panel, bundle.geometry, bundle.bits,
                                      1121.0, table=cfg.element_table, mode=bundle.mode)
    delta = p_direct - p_panel
    check("transmit-power reduction", 7.0 <= delta <= 10.5,
          f"{p_direct:.1f} dBm for 1024 Mbps direct vs {p_panel:.1f} dBm for 1121 Mbps "
          f"with panel: {delta:.2f} dB saved")

    # quantization loss ladder
    carrier = bundle.scenarios[0].carrier_hz
    spec = BeamSpec(tx=Pose.from_spherical(FAR_FIELD_RANGE_M, 0.0, 0.0),
                    rx=Pose.from_spherical(0.05, 0.0, 0.0))
    qrows = []
    for bits in (1, 2, 3, 4):
        loss = quantization_loss(bundle.geometry, spec, carrier, bits)
        closed = -20.0 * math.log10(math.sin(math.pi / (1 << bits)) / (math.pi / (1 << bits)))
        qrows.append([str(bits), f"{loss:.4f}", f"{closed:.4f}"])
    _write_csv(cfg.output_dir / "quantization_loss.csv",
               ["bits_count", "loss_db", "uniform_phase_closed_form_db"], qrows)
    loss2 = float(qrows[1][1])
    loss1 = float(qrows[0][1])
    check("2-bit quantization loss", loss2 <= 1.0 and abs(loss2 - 0.912) <= 0.3,
          f"{loss2:.3f} dB (closed form 0.912 dB)")
    check("1-bit quantization loss", 3.0 <= loss1 <= 4.5, f"{loss1:.3f} dB")

    # broadside pattern metrics and gain estimate
    feed = cfg.feed_pose()
    bspec = BeamSpec(tx=feed, rx=Pose.from_spherical(FAR_FIELD_RANGE_M, 0.0, 0.0))
    config = synthesize_codebook(bspec, bundle.geometry, carrier, bundle.bits)
    cut = principal_cut(config, bundle.geometry, carrier, plane="E", step_deg=cfg.grid_deg,
                        feed=feed, feed_exponent=cfg.feed_exponent, element_exponent=1.0)
    m = pattern_metrics(cut)
    check("broadside sidelobes", m.sidelobe_level_db <= -18.0, f"SLL {m.sidelobe_level_db:.2f} dB")
    check("broadside beamwidth", 6.0 <= m.hpbw_deg <= 10.0, f"HPBW {m.hpbw_deg:.2f} deg")
    theta, phi = hemisphere_grid(cfg.hemisphere_grid_deg)
    full = radiation_pattern(config, bundle.geometry, carrier, feed=feed,
                             feed_exponent=cfg.feed_exponent, element_exponent=1.0,
                             theta=theta, phi=phi)
    budget = cfg.element_table.mean_insertion_loss_db() + loss2
    directivity_dbi, gain_dbi = directivity_and_gain(full, budget)
    eff = aperture_efficiency(gain_dbi, bundle.geometry.aperture_area, carrier)
    check("broadside gain", 20.0 <= gain_dbi <= 24.0,
          f"directivity {directivity_dbi:.2f} dBi - {budget:.2f} dB budget = {gain_dbi:.2f} dBi "
          f"(aperture efficiency {100 * eff:.1f}%)")
    _write_csv(cfg.output_dir / "pattern_metrics.csv",
               ["plane", "peak_direction_deg", "sidelobe_level_db", "hpbw_deg",
                "directivity_dbi", "gain_dbi", "aperture_efficiency_pct"],
               [["E", f"{m.peak_direction_deg:.3f}", f"{m.sidelobe_level_db:.3f}",
                 f"{m.hpbw_deg:.3f}", f"{directivity_dbi:.3f}", f"{gain_dbi:.3f}",
                 f"{100 * eff:.3f}"]])

    # aperture-efficiency identity at the measured panel gain
    eff_meas = aperture_efficiency(22.0, 0.0784 * 0.0784, 27.0e9)
    check("aperture-efficiency identity", abs(100 * eff_meas - 25.3) <= 0.1,
          f"22.0 dBi over 78.4x78.4 mm at 27 GHz -> {100 * eff_meas:.2f}%")

    # steering: pointing on array-factor cuts, scan loss with the element factor
    scan_rows = []
    pointing_ok = True
    loss_window_ok = True
    for plane in ("E", "H"):
        ref = None
        for angle in (0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0):
            target = _steer_target(-angle, plane)
            sspec = BeamSpec(tx=feed, rx=target)
            sconfig = synthesize_codebook(sspec, bundle.geometry, carrier, bundle.bits)
            cut_g = principal_cut(sconfig, bundle.geometry, carrier, plane=plane,
                                  step_deg=cfg.grid_deg, feed=feed,
                                  feed_exponent=cfg.feed_exponent, element_exponent=1.0)
            cut_af = principal_cut(sconfig, bundle.geometry, carrier, plane=plane,
                                   step_deg=cfg.grid_deg, feed=feed,
                                   feed_exponent=cfg.feed_exponent, element_exponent=0.0)
            if ref is None:
                ref = cut_g
            loss = scan_loss(ref, cut_g)
            peak_deg = math.degrees(cut_af.theta[int(np.argmax(cut_af.power[:, 0]))])
            if angle >= 10.0 and abs(peak_deg - (-angle)) > 1.0:
                pointing_ok = False
            if angle == 60.0 and not (2.5 <= loss <= 6.0):
                loss_window_ok = False
            scan_rows.append([plane, f"{angle:.1f}", f"{loss:.3f}", f"{peak_deg:.3f}"])
    _write_csv(cfg.output_dir / "scan_loss.csv",
               ["plane", "steer_deg", "scan_loss_db", "af_peak_deg"], scan_rows)
    check("steered pointing", pointing_ok, "array-factor peaks within 1 deg of target, both planes")
    sixty = {r[0]: r[2] for r in scan_rows if r[1] == "60.0"}
    check("60-deg scan loss", loss_window_ok,
          f"E {sixty['E']} dB, H {sixty['H']} dB (window 2.5..6.0)")

    # small-panel oracle agreement
    rng = np.random.default_rng(cfg.seed)
    small = ArrayGeometry(2, 2, bundle.geometry.spacing_x, bundle.geometry.spacing_y)
    worst = 0.0
    trials = args.oracle_trials
    for _ in range(trials):
        tx = Pose.from_spherical(rng.uniform(0.5, 3.0), rng.uniform(0, math.pi / 3),
                                 rng.uniform(0, 2 * math.pi))
        rx = Pose.from_spherical(rng.uniform(0.03, 0.5), rng.uniform(0, math.pi / 3),
                                 rng.uniform(0, 2 * math.pi))
        ospec = BeamSpec(tx=tx, rx=rx)
        profile = unity_gain_profile()
        _, p_sweep, _ = sweep_phase_offset(ospec, small, carrier, 2, profile=profile, samples=64)
        _, p_oracle = exhaustive_oracle(ospec, small, carrier, 2, profile=profile)
        worst = max(worst, 10.0 * math.log10(p_oracle / p_sweep))
    check("codebook-vs-oracle gap", worst <= 0.05,
          f"worst gap {worst:.4f} dB over {trials} random 2x2 poses (seed {cfg.seed})")

    failed = [name for name, ok in checks if not ok]
    print(f"\n{len(checks) - len(failed)}/{len(checks)} checks passed"
          + (f"; failed: {failed}" if failed else ""))
    return 1 if failed else 0


# ---------------------------------------------------------------- dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rissim",
        description="Transmissive-panel mmWave link simulator",
    )
    parser.add_argument("--version", action="version", version=f"rissim {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="run-config YAML file")
    common.add_argument("--out", help=f"output directory (default ${OUT_DIR_ENV} or ./rissim_out)")
    common.add_argument("--grid-deg", type=float, default=None, help="cut resolution in degrees")
    common.add_argument("--bits", default=None, help="phase bits: N or a range like 1..4")
    common.add_argument("--mode", choices=("nominal", "realized"), default=None,
                        help="element model: ideal grid phases or measured states")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized checks")
    common.add_argument("--carrier-hz", type=float, default=27.0e9, help="carrier frequency in Hz")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("codebook", parents=[common],
                       help="synthesize a code grid and its bias bitstream")
    p.add_argument("--tx-range", type=float, default=FAR_FIELD_RANGE_M)
    p.add_argument("--tx-polar-deg", type=float, default=0.0)
    p.add_argument("--tx-azimuth-deg", type=float, default=0.0)
    p.add_argument("--rx-range", type=float, default=FAR_FIELD_RANGE_M)
    p.add_argument("--rx-polar-deg", type=float, default=0.0)
    p.add_argument("--rx-azimuth-deg", type=float, default=0.0)
    p.add_argument("--tx-model", choices=("auto", "spherical", "planar"), default="auto")
    p.add_argument("--rx-model", choices=("auto", "spherical", "planar"), default="auto")
    p.add_argument("--offset-deg", type=float, default=0.0, help="phase constant C in degrees")
    p.set_defaults(func=cmd_codebook)

    p = sub.add_parser("pattern", parents=[common], help="radiation-pattern cuts and metrics")
    p.add_argument("--steer-deg", type=float, default=0.0, help="signed steer angle")
    p.add_argument("--plane", choices=("E", "H", "both"), default="both")
    p.add_argument("--element-exponent", type=float, default=1.0)
    p.add_argument("--loss-budget-db", type=float, default=0.0,
                   help="subtracted from directivity to report gain")
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("scan", parents=[common], help="steer sweep: scan loss and pointing")
    p.add_argument("--max-deg", type=float, default=60.0)
    p.add_argument("--step-deg", type=float, default=10.0)
    p.add_argument("--element-exponent", type=float, default=1.0)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("quantloss", parents=[common], help="quantization loss vs bit count")
    p.add_argument("--tx-range", type=float, default=FAR_FIELD_RANGE_M)
    p.add_argument("--rx-range", type=float, default=0.05)
    p.add_argument("--offset-samples", type=int, default=16)
    p.set_defaults(func=cmd_quantloss)

    p = sub.add_parser("link", parents=[common], help="evaluate a scenario file")
    p.add_argument("--scenario", help="scenario bundle path (default: packaged bundle)")
    p.set_defaults(func=cmd_link)

    p = sub.add_parser("reproduce", parents=[common],
                       help="run the packaged scenario bundle and metric suite")
    p.add_argument("--oracle-trials", type=int, default=20)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_run_config(args)
        cfg.carrier_hz = args.carrier_hz
        if args.mode is None and args.command in ("link", "reproduce"):
            cfg.mode = "realized"
        return args.func(cfg, args)
    except (RisSimError, ValueError, OSError) as exc:
        print(f"rissim: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
