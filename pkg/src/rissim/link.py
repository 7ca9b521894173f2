"""End-to-end scenario evaluation: received power, SNR, and data rate.

Two link types are modeled. Without the panel, the Tx and Rx horns see each
other directly through a Friis link, including any pattern misalignment when
the transmitter sits off the panel axis (both horns stay boresighted on the
panel center). With the panel, the link is the per-element cascade of
:mod:`rissim.channel` driven by a codebook synthesized for the scenario's
endpoint poses, and the direct path is ignored.

Endpoint poses are face-local: each side's coordinates are relative to the
panel face it illuminates, with z positive away from that face. The direct
Tx-Rx separation therefore mirrors the receiver through the panel plane.

An obstacle attenuates, once, every path that crosses it: always the direct
link, plus the panel hop on whichever side it sits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .beams import BeamSpec, synthesize_codebook
from .channel import GainProfile, coherent_power_bound, cos_power_pattern, received_power
from .codebook import RISConfiguration
from .elements import ElementStateTable, Mode, default_element_table
from .errors import InfeasibleTargetError
from .geometry import ArrayGeometry, Pose
from .units import dbm_to_watts, watts_to_dbm, wavelength

THERMAL_NOISE_DBM_PER_HZ = -174.0
MAX_TRANSMIT_POWER_DBM = 60.0
DEFAULT_OBSTACLE_ATTENUATION_DB = 25.0

_OBSTACLE_POSITIONS = ("tx_side", "rx_side")


@dataclass(frozen=True)
class Obstacle:
    """A blocking slab between one endpoint and the panel."""

    attenuation_db: float = DEFAULT_OBSTACLE_ATTENUATION_DB
    position: str = "tx_side"

    def __post_init__(self):
        if self.attenuation_db < 0:
            raise ValueError(f"attenuation must be >= 0 dB, got {self.attenuation_db}")
        if self.position not in _OBSTACLE_POSITIONS:
            raise ValueError(f"position must be one of {_OBSTACLE_POSITIONS}")


@dataclass(frozen=True)
class MCSRow:
    min_snr_db: float
    rate_mbps: float
    label: str = ""


@dataclass(frozen=True)
class MCSTable:
    """Monotone SNR-threshold-to-rate steps, with an implicit (-inf, 0) floor."""

    rows: tuple[MCSRow, ...]

    def __post_init__(self):
        if not self.rows:
            raise ValueError("MCS table needs at least one row")
        for prev, cur in zip(self.rows, self.rows[1:]):
            if cur.min_snr_db <= prev.min_snr_db or cur.rate_mbps <= prev.rate_mbps:
                raise ValueError("MCS rows must be strictly increasing in SNR and rate")
        if self.rows[0].rate_mbps <= 0:
            raise ValueError("MCS rates must be positive (the zero-rate floor is implicit)")

    def rate_for_snr(self, snr_db: float) -> float:
        rate = 0.0
        for row in self.rows:
            if snr_db >= row.min_snr_db:
                rate = row.rate_mbps
            else:
                break
        return rate

    def threshold_for_rate(self, rate_mbps: float) -> float:
        for row in self.rows:
            if row.rate_mbps == rate_mbps:
                return row.min_snr_db
        raise ValueError(f"rate {rate_mbps} Mbps is not a row of this MCS table")

    def max_rate(self) -> float:
        return self.rows[-1].rate_mbps


@dataclass(frozen=True)
class LinkScenario:
    """One operating point: powers, geometry, gains, obstacle, and MCS map."""

    transmit_power_dbm: float
    carrier_hz: float
    bandwidth_hz: float
    gains: GainProfile
    tx_pose: Pose
    rx_pose: Pose
    mcs: MCSTable
    noise_figure_db: float = 0.0
    ris_present: bool = True
    obstacle: Obstacle | None = None
    name: str = ""
    expected_rate_mbps: float | None = None

    def __post_init__(self):
        if self.bandwidth_hz <= 0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth_hz}")
        if not math.isfinite(self.transmit_power_dbm):
            raise ValueError("transmit power must be finite")
        if self.tx_pose.range <= 0 or self.rx_pose.range <= 0:
            raise ValueError("endpoint poses must have positive range")

    @property
    def tx_steer_angle_deg(self) -> float:
        """Polar angle of the transmitter off the panel normal, in degrees."""
        return math.degrees(self.tx_pose.polar)

    def with_power(self, transmit_power_dbm: float) -> "LinkScenario":
        return replace(self, transmit_power_dbm=transmit_power_dbm)


@dataclass(frozen=True)
class LinkResult:
    received_power_dbm: float
    snr_db: float
    rate_mbps: float
    codebook: RISConfiguration | None


def noise_power(bandwidth_hz: float, noise_figure_db: float) -> float:
    """Thermal noise floor in dBm: -174 + 10 log10(BW) + NF."""
    if bandwidth_hz <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_hz}")
    return THERMAL_NOISE_DBM_PER_HZ + 10.0 * math.log10(bandwidth_hz) + noise_figure_db


def _mirrored_rx(rx: Pose) -> np.ndarray:
    """Receiver position in the transmitter's frame (through-panel)."""
    return np.array([rx.x, rx.y, -rx.z])


def direct_received_power_w(scenario: LinkScenario) -> float:
    """Friis power of the horn-to-horn link, with pattern misalignment.

    Both horns are boresighted on the panel center; each contributes its
    cos^q power pattern evaluated at the angle between that boresight and
    the line between the horns.
    """
    tx = np.array([scenario.tx_pose.x, scenario.tx_pose.y, scenario.tx_pose.z])
    rx = _mirrored_rx(scenario.rx_pose)
    sep = rx - tx
    d = float(np.linalg.norm(sep))
    if d <= 0:
        raise ValueError("transmitter and receiver coincide")
    lam = wavelength(scenario.carrier_hz)
    to_rx = sep / d
    tx_bore = -tx / np.linalg.norm(tx)
    rx_bore = -rx / np.linalg.norm(rx)
    angle_tx = math.acos(float(np.clip(np.dot(tx_bore, to_rx), -1.0, 1.0)))
    angle_rx = math.acos(float(np.clip(np.dot(rx_bore, -to_rx), -1.0, 1.0)))
    g = scenario.gains
    pattern = float(
        cos_power_pattern(angle_tx, g.q_tx) * cos_power_pattern(angle_rx, g.q_rx)
    )
    p_tx = dbm_to_watts(scenario.transmit_power_dbm)
    gain = 10.0 ** ((g.tx_gain_dbi + g.rx_gain_dbi) / 10.0)
    return p_tx * gain * pattern * (lam / (4.0 * math.pi * d)) ** 2


def _obstacle_factor(scenario: LinkScenario) -> float:
    if scenario.obstacle is None:
        return 1.0
    return 10.0 ** (-scenario.obstacle.attenuation_db / 10.0)


def evaluate_scenario(
    scenario: LinkScenario,
    geom: ArrayGeometry,
    bits: int,
    *,
    table: ElementStateTable | None = None,
    mode: Mode = "realized",
    phase_offset: float = 0.0,
) -> LinkResult:
    """Received power, SNR, and achievable rate for one scenario.

    With the panel present, a codebook is synthesized for the scenario's
    poses (auto near/far model per side) and evaluated in the given element
    mode; the obstacle, if any, attenuates the panel hop on its side. Without
    the panel the direct Friis link is used and the obstacle always applies.
    """
    table = table or default_element_table()
    codebook = None
    if scenario.ris_present:
        spec = BeamSpec(tx=scenario.tx_pose, rx=scenario.rx_pose, phase_offset=phase_offset)
        codebook = synthesize_codebook(spec, geom, scenario.carrier_hz, bits)
        p_w = received_power(
            dbm_to_watts(scenario.transmit_power_dbm),
            scenario.carrier_hz,
            scenario.gains,
            geom,
            codebook,
            scenario.tx_pose,
            scenario.rx_pose,
            table=table,
            mode=mode,
        )
        p_w *= _obstacle_factor(scenario)
    else:
        p_w = direct_received_power_w(scenario) * _obstacle_factor(scenario)
    if p_w <= 0:
        return LinkResult(received_power_dbm=-math.inf, snr_db=-math.inf, rate_mbps=0.0,
                          codebook=codebook)
    p_dbm = watts_to_dbm(p_w)
    snr = p_dbm - noise_power(scenario.bandwidth_hz, scenario.noise_figure_db)
    return LinkResult(
        received_power_dbm=p_dbm,
        snr_db=snr,
        rate_mbps=scenario.mcs.rate_for_snr(snr),
        codebook=codebook,
    )


def required_transmit_power(
    scenario: LinkScenario,
    geom: ArrayGeometry,
    bits: int,
    target_rate_mbps: float,
    *,
    table: ElementStateTable | None = None,
    mode: Mode = "realized",
    tolerance_db: float = 0.1,
    floor_dbm: float = -100.0,
) -> float:
    """Minimum transmit power (dBm, to the given tolerance) reaching the rate.

    Bisects over transmit power between the floor and the +60 dBm cap;
    raises :class:`InfeasibleTargetError` if even the cap falls short.
    """
    threshold = scenario.mcs.threshold_for_rate(target_rate_mbps)

    def snr_at(p_dbm: float) -> float:
        return evaluate_scenario(
            scenario.with_power(p_dbm), geom, bits, table=table, mode=mode
        ).snr_db

    if snr_at(MAX_TRANSMIT_POWER_DBM) < threshold:
        raise InfeasibleTargetError(
            f"rate {target_rate_mbps} Mbps unreachable at {MAX_TRANSMIT_POWER_DBM} dBm"
        )
    lo, hi = floor_dbm, MAX_TRANSMIT_POWER_DBM
    if snr_at(lo) >= threshold:
        return lo
    while hi - lo > tolerance_db / 2.0:
        mid = 0.5 * (lo + hi)
        if snr_at(mid) >= threshold:
            hi = mid
        else:
            lo = mid
    return round(hi / tolerance_db) * tolerance_db


def array_gain(
    geom: ArrayGeometry,
    scenario: LinkScenario,
    bits: int | None,
    *,
    reference: str = "single_element",
    table: ElementStateTable | None = None,
    mode: Mode = "nominal",
    phase_offset: float = 0.0,
) -> float:
    """Received-power improvement of the panel link over a reference, in dB.

    ``reference`` is either ``single_element`` (the same link through a 1x1
    panel) or ``direct`` (the horn-to-horn Friis link). ``bits`` of None
    evaluates the continuous-phase upper bound instead of a quantized
    codebook; element magnitudes are ideal in that case.
    """
    table = table or default_element_table()

    def panel_power(g: ArrayGeometry) -> float:
        if bits is None:
            return coherent_power_bound(
                dbm_to_watts(scenario.transmit_power_dbm), scenario.carrier_hz,
                scenario.gains, g, scenario.tx_pose, scenario.rx_pose,
            )
        spec = BeamSpec(tx=scenario.tx_pose, rx=scenario.rx_pose, phase_offset=phase_offset)
        config = synthesize_codebook(spec, g, scenario.carrier_hz, bits)
        return received_power(
            dbm_to_watts(scenario.transmit_power_dbm), scenario.carrier_hz,
            scenario.gains, g, config, scenario.tx_pose, scenario.rx_pose,
            table=table, mode=mode,
        )

    p_ris = panel_power(geom)
    if reference == "single_element":
        p_ref = panel_power(ArrayGeometry(1, 1, geom.spacing_x, geom.spacing_y))
    elif reference == "direct":
        p_ref = direct_received_power_w(scenario)
    else:
        raise ValueError(f"reference must be 'single_element' or 'direct', got {reference!r}")
    return 10.0 * math.log10(p_ris / p_ref)
