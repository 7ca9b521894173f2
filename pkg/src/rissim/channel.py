"""Free-space channel coefficients and received power through the panel.

The per-element channel on each side is sqrt(lambda G F / 4 pi) *
exp(-j 2 pi d / lambda) / d with d the exact element-to-endpoint distance.
Cascading both sides over all elements gives the received power

    P_r = P_t G F lambda^2 / (16 pi^2) *
          | sum_mn Gamma_mn / (d^t_mn d^r_mn) exp(j (phi_mn - 2 pi (d^t+d^r)/lambda)) |^2

with G the product of the four endpoint/panel-face gains and F the product
of their normalized power patterns. Both horns are modeled as boresighted
on the panel center, so only the two panel-face patterns contribute, each
evaluated at the endpoint's polar angle. The direct Tx-Rx path is not part
of this model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codebook import RISConfiguration
from .elements import ElementStateTable, Mode, state_coefficients
from .geometry import ArrayGeometry, Pose, exact_distance, exact_distances, _check_indices
from .units import db_to_linear, wavelength

FOUR_PI = 4.0 * math.pi


def exponent_from_gain(gain_dbi: float) -> float:
    """Pattern exponent q of a cos^q power pattern with directivity 2(q+1)."""
    q = db_to_linear(gain_dbi) / 2.0 - 1.0
    if q < 0:
        raise ValueError(f"gain {gain_dbi} dBi is below the hemispheric minimum (3.01 dBi)")
    return q


def cos_power_pattern(angle: float | np.ndarray, exponent: float) -> float | np.ndarray:
    """Normalized power pattern cos^q(angle), zero beyond 90 degrees."""
    if exponent < 0:
        raise ValueError(f"pattern exponent must be >= 0, got {exponent}")
    c = np.clip(np.cos(angle), 0.0, None)
    return c**exponent


@dataclass(frozen=True)
class GainProfile:
    """Endpoint and panel-face gains (dBi) with their cos^q pattern exponents.

    ``ris_rx_side`` is the panel face illuminated by the transmitter,
    ``ris_tx_side`` the face radiating toward the receiver.
    """

    tx_gain_dbi: float
    rx_gain_dbi: float
    ris_rx_side_gain_dbi: float
    ris_tx_side_gain_dbi: float
    q_tx: float
    q_rx: float
    q_ris_rx_side: float
    q_ris_tx_side: float

    def __post_init__(self):
        for name in ("tx_gain_dbi", "rx_gain_dbi", "ris_rx_side_gain_dbi", "ris_tx_side_gain_dbi"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        for name in ("q_tx", "q_rx", "q_ris_rx_side", "q_ris_tx_side"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @classmethod
    def from_gains(
        cls,
        tx_gain_dbi: float,
        rx_gain_dbi: float,
        ris_rx_side_gain_dbi: float = 5.0,
        ris_tx_side_gain_dbi: float = 5.0,
    ) -> "GainProfile":
        """Derive every pattern exponent from its gain via G = 2(q+1)."""
        return cls(
            tx_gain_dbi=tx_gain_dbi,
            rx_gain_dbi=rx_gain_dbi,
            ris_rx_side_gain_dbi=ris_rx_side_gain_dbi,
            ris_tx_side_gain_dbi=ris_tx_side_gain_dbi,
            q_tx=exponent_from_gain(tx_gain_dbi),
            q_rx=exponent_from_gain(rx_gain_dbi),
            q_ris_rx_side=exponent_from_gain(ris_rx_side_gain_dbi),
            q_ris_tx_side=exponent_from_gain(ris_tx_side_gain_dbi),
        )

    def total_gain_linear(self) -> float:
        return db_to_linear(
            self.tx_gain_dbi
            + self.rx_gain_dbi
            + self.ris_rx_side_gain_dbi
            + self.ris_tx_side_gain_dbi
        )

    def panel_pattern_factor(self, tx: Pose, rx: Pose) -> float:
        """F of the panel link: both face patterns at their endpoint's polar angle."""
        return float(
            cos_power_pattern(tx.polar, self.q_ris_rx_side)
            * cos_power_pattern(rx.polar, self.q_ris_tx_side)
        )


def unity_gain_profile() -> GainProfile:
    """0 dBi isotropic endpoints/faces; useful where gains cancel in ratios."""
    return GainProfile(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


def channel_coefficient(
    side: str,
    endpoint: Pose,
    m: int,
    n: int,
    geom: ArrayGeometry,
    carrier_hz: float,
    profile: GainProfile,
) -> complex:
    """One-hop channel between element (m, n) and an endpoint.

    ``side`` is "toward_tx" for the illuminated face or "toward_rx" for the
    radiating face; it selects that face's gain and pattern, evaluated at the
    endpoint's polar angle.
    """
    _check_indices(m, n, geom)
    if side == "toward_tx":
        gain_db, q = profile.ris_rx_side_gain_dbi, profile.q_ris_rx_side
    elif side == "toward_rx":
        gain_db, q = profile.ris_tx_side_gain_dbi, profile.q_ris_tx_side
    else:
        raise ValueError(f"side must be 'toward_tx' or 'toward_rx', got {side!r}")
    lam = wavelength(carrier_hz)
    d = exact_distance(endpoint, m, n, geom)
    amp = math.sqrt(lam * db_to_linear(gain_db) * cos_power_pattern(endpoint.polar, q) / FOUR_PI)
    phase = -2.0 * math.pi * d / lam
    return amp * complex(math.cos(phase), math.sin(phase)) / d


def feed_illumination(
    feed: Pose, m: int, n: int, geom: ArrayGeometry, carrier_hz: float, exponent: float
) -> complex:
    """Per-element excitation from a feed horn boresighted on the panel center.

    Amplitude is cos^q(psi) / d with psi the angle at the feed between its
    boresight and the element, and the phase is the spherical propagation
    term exp(-j 2 pi d / lambda).
    """
    _check_indices(m, n, geom)
    if feed.z <= 0:
        raise ValueError("feed must be in front of the panel (z > 0)")
    grid = feed_illuminations(feed, geom, carrier_hz, exponent)
    return complex(grid[m, n])


def feed_illuminations(
    feed: Pose, geom: ArrayGeometry, carrier_hz: float, exponent: float
) -> np.ndarray:
    """(Nx, Ny) grid of :func:`feed_illumination` values."""
    if feed.z <= 0:
        raise ValueError("feed must be in front of the panel (z > 0)")
    if exponent < 0:
        raise ValueError(f"feed exponent must be >= 0, got {exponent}")
    lam = wavelength(carrier_hz)
    xe, ye = geom.element_grid()
    d = exact_distances(feed, geom)
    # cos(psi) = (boresight unit vector) . (feed-to-element unit vector)
    bore = -np.array([feed.x, feed.y, feed.z]) / feed.range
    cos_psi = (
        bore[0] * (xe - feed.x) + bore[1] * (ye - feed.y) + bore[2] * (0.0 - feed.z)
    ) / d
    cos_psi = np.clip(cos_psi, 0.0, 1.0)
    return cos_psi**exponent * np.exp(-2j * math.pi * d / lam) / d


def _element_coefficients(
    excitation: RISConfiguration | np.ndarray,
    table: ElementStateTable | None,
    mode: Mode,
) -> np.ndarray:
    """Gamma * exp(j phi) per element, from codes or from continuous phases."""
    if isinstance(excitation, RISConfiguration):
        assert table is not None
        return state_coefficients(table, excitation.codes, mode)
    phases = np.asarray(excitation, dtype=float)
    return np.exp(1j * phases)  # continuous surrogate: ideal magnitude


def received_power(
    tx_power_w: float,
    carrier_hz: float,
    profile: GainProfile,
    geom: ArrayGeometry,
    excitation: RISConfiguration | np.ndarray,
    tx: Pose,
    rx: Pose,
    *,
    table: ElementStateTable | None = None,
    mode: Mode = "nominal",
) -> float:
    """Received power (W) of the panel link for a code grid or phase grid.

    ``excitation`` is either a :class:`RISConfiguration` (evaluated in the
    given mode against ``table``) or an (Nx, Ny) array of continuous phases
    in radians with ideal unit magnitude. Summation order is fixed, so
    results are deterministic.
    """
    if tx_power_w < 0:
        raise ValueError(f"transmit power must be >= 0, got {tx_power_w}")
    if isinstance(excitation, RISConfiguration):
        if excitation.geom != geom:
            raise ValueError("configuration geometry does not match the panel")
        if table is None:
            raise ValueError("a state table is required to evaluate a code grid")
    else:
        phases = np.asarray(excitation, dtype=float)
        if phases.shape != (geom.num_x, geom.num_y):
            raise ValueError(
                f"phase grid shape {phases.shape} does not match panel "
                f"({geom.num_x}, {geom.num_y})"
            )
    lam = wavelength(carrier_hz)
    dt = exact_distances(tx, geom)
    dr = exact_distances(rx, geom)
    coeff = _element_coefficients(excitation, table, mode)
    total = np.sum(coeff * np.exp(-2j * math.pi * (dt + dr) / lam) / (dt * dr))
    g = profile.total_gain_linear()
    f = profile.panel_pattern_factor(tx, rx)
    return tx_power_w * g * f * lam**2 / (16.0 * math.pi**2) * abs(total) ** 2


def coherent_power_bound(
    tx_power_w: float,
    carrier_hz: float,
    profile: GainProfile,
    geom: ArrayGeometry,
    tx: Pose,
    rx: Pose,
    *,
    magnitudes: np.ndarray | float = 1.0,
) -> float:
    """Fully coherent upper bound: every element phased so terms add in phase.

    Equals :func:`received_power` with the continuous-optimal phase grid;
    closed form P_t G F lambda^2 / (16 pi^2) (sum Gamma / (d^t d^r))^2.
    """
    lam = wavelength(carrier_hz)
    dt = exact_distances(tx, geom)
    dr = exact_distances(rx, geom)
    total = np.sum(np.asarray(magnitudes, dtype=float) / (dt * dr))
    g = profile.total_gain_linear()
    f = profile.panel_pattern_factor(tx, rx)
    return tx_power_w * g * f * lam**2 / (16.0 * math.pi**2) * float(total) ** 2
