import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rissim import (
    ArrayGeometry,
    BeamSpec,
    ElementStateTable,
    GainProfile,
    Pose,
    RISConfiguration,
    SPEED_OF_LIGHT,
    channel_coefficient,
    coherent_power_bound,
    cos_power_pattern,
    exponent_from_gain,
    feed_illumination,
    feed_illuminations,
    optimal_phases,
    received_power,
    unity_gain_profile,
    wavelength,
)

from conftest import CARRIER_HZ


def test_exponent_from_gain_values():
    assert exponent_from_gain(12.7) == pytest.approx(8.31, abs=5e-3)
    assert exponent_from_gain(5.0) == pytest.approx(0.5811, abs=1e-4)
    assert exponent_from_gain(3.0103) == pytest.approx(0.0, abs=1e-4)
    with pytest.raises(ValueError):
        exponent_from_gain(0.0)


def test_cos_power_pattern_shape():
    angles = np.linspace(0, math.pi / 2, 200)
    for q in (0.0, 0.58, 3.16, 92.0):
        pat = cos_power_pattern(angles, q)
        assert pat[0] == pytest.approx(1.0)
        assert np.all(np.diff(pat) <= 1e-15)
    assert cos_power_pattern(math.pi / 2 + 0.3, 2.0) == 0.0
    with pytest.raises(ValueError):
        cos_power_pattern(0.2, -1.0)


def test_gain_profile_validation():
    with pytest.raises(ValueError):
        GainProfile(math.inf, 0, 0, 0, 0, 0, 0, 0)
    with pytest.raises(ValueError):
        GainProfile(0, 0, 0, 0, -0.1, 0, 0, 0)


def test_channel_coefficient_prefactor():
    lam = 0.0111
    geom = ArrayGeometry(1, 1)
    endpoint = Pose.from_spherical(1.0, 0.0, 0.0)
    c = channel_coefficient("toward_rx", endpoint, 0, 0, geom, SPEED_OF_LIGHT / lam,
                            unity_gain_profile())
    assert abs(c) == pytest.approx(math.sqrt(lam / (4 * math.pi)), rel=1e-12)
    assert abs(c) == pytest.approx(0.02973, abs=1e-5)


def test_channel_coefficient_inverse_distance():
    geom = ArrayGeometry(1, 1)
    profile = unity_gain_profile()
    near = channel_coefficient("toward_tx", Pose.from_spherical(1.0, 0.0, 0.0), 0, 0,
                               geom, CARRIER_HZ, profile)
    far = channel_coefficient("toward_tx", Pose.from_spherical(2.0, 0.0, 0.0), 0, 0,
                              geom, CARRIER_HZ, profile)
    assert abs(far) == pytest.approx(abs(near) / 2, rel=1e-12)


def test_channel_coefficient_phase():
    lam = wavelength(CARRIER_HZ)
    geom = ArrayGeometry(1, 1)
    profile = unity_gain_profile()
    d = 0.7133
    c = channel_coefficient("toward_rx", Pose.from_spherical(d, 0.0, 0.0), 0, 0,
                            geom, CARRIER_HZ, profile)
    expected = (-2 * math.pi * d / lam) % (2 * math.pi)
    assert np.angle(c) % (2 * math.pi) == pytest.approx(expected, abs=1e-9)
    at_lam = channel_coefficient("toward_rx", Pose.from_spherical(lam, 0.0, 0.0), 0, 0,
                                 geom, CARRIER_HZ, profile)
    assert np.angle(at_lam) == pytest.approx(0.0, abs=1e-9)


def test_channel_coefficient_side_validation():
    geom = ArrayGeometry(1, 1)
    with pytest.raises(ValueError):
        channel_coefficient("sideways", Pose.from_spherical(1, 0, 0), 0, 0, geom,
                            CARRIER_HZ, unity_gain_profile())


def test_received_power_single_element_hand_value():
    geom = ArrayGeometry(1, 1)
    lam = wavelength(CARRIER_HZ)
    config = RISConfiguration.uniform(geom, 2)
    p = received_power(
        1.0, CARRIER_HZ, unity_gain_profile(), geom, config,
        Pose.from_spherical(2.6, 0.0, 0.0), Pose.from_spherical(0.05, 0.0, 0.0),
        table=ElementStateTable.ideal(2), mode="nominal",
    )
    expected = lam**2 / (16 * math.pi**2) / (2.6 * 0.05) ** 2
    assert p == pytest.approx(expected, rel=1e-12)
    assert p == pytest.approx(4.62e-5, abs=5e-8)


def test_received_power_single_element_phase_irrelevant(table):
    geom = ArrayGeometry(1, 1)
    tx, rx = Pose.from_spherical(1.3, 0.2, 0.0), Pose.from_spherical(0.08, 0.0, 0.0)
    powers = {
        received_power(1.0, CARRIER_HZ, unity_gain_profile(), geom,
                       RISConfiguration.uniform(geom, 2, code=c), tx, rx,
                       table=ElementStateTable.ideal(2))
        for c in range(4)
    }
    assert max(powers) == pytest.approx(min(powers), rel=1e-12)


def test_received_power_opaque_panel(panel16):
    opaque = ElementStateTable.from_states(
        [(0.0, math.inf), (90.0, math.inf), (180.0, math.inf), (270.0, math.inf)]
    )
    p = received_power(
        1.0, CARRIER_HZ, unity_gain_profile(), panel16,
        RISConfiguration.uniform(panel16, 2),
        Pose.from_spherical(2.6, 0.0, 0.0), Pose.from_spherical(0.05, 0.0, 0.0),
        table=opaque, mode="realized",
    )
    assert p == 0.0


def test_coherent_sum_matches_direct_summation(panel16, desk_gains, tx_far, rx_near):
    spec = BeamSpec(tx=tx_far, rx=rx_near, tx_model="spherical", rx_model="spherical")
    phases = optimal_phases(spec, panel16, CARRIER_HZ)
    direct = received_power(1.0, CARRIER_HZ, desk_gains, panel16, phases, tx_far, rx_near)
    bound = coherent_power_bound(1.0, CARRIER_HZ, desk_gains, panel16, tx_far, rx_near)
    assert direct == pytest.approx(bound, rel=1e-9)


def test_received_power_reciprocity(panel16):
    tx = Pose.from_spherical(2.6, 0.3, 0.5)
    rx = Pose.from_spherical(0.05, 0.15, 2.0)
    profile = GainProfile.from_gains(22.7, 9.2, 5.0, 7.0)
    swapped = GainProfile.from_gains(9.2, 22.7, 7.0, 5.0)
    spec = BeamSpec(tx=tx, rx=rx, tx_model="spherical", rx_model="spherical")
    phases = optimal_phases(spec, panel16, CARRIER_HZ)
    forward = received_power(1.0, CARRIER_HZ, profile, panel16, phases, tx, rx)
    reverse = received_power(1.0, CARRIER_HZ, swapped, panel16, phases, rx, tx)
    assert forward == pytest.approx(reverse, rel=1e-12)


def test_single_phase_perturbation_strictly_decreases(panel16, tx_far, rx_near):
    spec = BeamSpec(tx=tx_far, rx=rx_near, tx_model="spherical", rx_model="spherical")
    base = optimal_phases(spec, panel16, CARRIER_HZ)
    profile = unity_gain_profile()
    p0 = received_power(1.0, CARRIER_HZ, profile, panel16, base, tx_far, rx_near)
    for eps in (0.05, 0.5, math.pi):
        perturbed = base.copy()
        perturbed[7, 3] += eps
        p = received_power(1.0, CARRIER_HZ, profile, panel16, perturbed, tx_far, rx_near)
        assert p < p0


def test_magnitude_scaling_quadratic(panel16, tx_far, rx_near):
    profile = unity_gain_profile()
    full = coherent_power_bound(1.0, CARRIER_HZ, profile, panel16, tx_far, rx_near)
    half = coherent_power_bound(1.0, CARRIER_HZ, profile, panel16, tx_far, rx_near,
                                magnitudes=0.5)
    assert half == pytest.approx(0.25 * full, rel=1e-12)
    # realized table with uniform 6.0206 dB loss scales nominal power by 0.25
    damped = ElementStateTable.from_states(
        [(0.0, 6.0206), (90.0, 6.0206), (180.0, 6.0206), (270.0, 6.0206)]
    )
    config = RISConfiguration.uniform(panel16, 2)
    nominal = received_power(1.0, CARRIER_HZ, profile, panel16, config, tx_far, rx_near,
                             table=damped, mode="nominal")
    realized = received_power(1.0, CARRIER_HZ, profile, panel16, config, tx_far, rx_near,
                              table=damped, mode="realized")
    assert realized == pytest.approx(0.25 * nominal, rel=1e-4)


def test_transmit_power_linearity(panel16, desk_gains, tx_far, rx_near, table):
    config = RISConfiguration.uniform(panel16, 2)
    p1 = received_power(1.0, CARRIER_HZ, desk_gains, panel16, config, tx_far, rx_near,
                        table=table, mode="realized")
    p3 = received_power(3.0, CARRIER_HZ, desk_gains, panel16, config, tx_far, rx_near,
                        table=table, mode="realized")
    assert p3 == pytest.approx(3 * p1, rel=1e-12)


def test_received_power_dimension_mismatch(panel16, table):
    other = ArrayGeometry(8, 8)
    config = RISConfiguration.uniform(other, 2)
    with pytest.raises(ValueError):
        received_power(1.0, CARRIER_HZ, unity_gain_profile(), panel16, config,
                       Pose.from_spherical(1, 0, 0), Pose.from_spherical(0.05, 0, 0),
                       table=table)
    with pytest.raises(ValueError):
        received_power(1.0, CARRIER_HZ, unity_gain_profile(), panel16, np.zeros((8, 8)),
                       Pose.from_spherical(1, 0, 0), Pose.from_spherical(0.05, 0, 0))


def test_feed_illumination_center():
    geom = ArrayGeometry(17, 17)
    feed = Pose.from_spherical(0.05, 0.0, 0.0)
    a = feed_illumination(feed, 8, 8, geom, CARRIER_HZ, exponent=8.31)
    assert abs(a) == pytest.approx(1 / 0.05, rel=1e-12)


def test_feed_illumination_corner_taper(panel16):
    feed = Pose.from_spherical(0.05, 0.0, 0.0)
    d = math.sqrt(0.05**2 + 2 * 0.03675**2)
    expected = (0.05 / d) ** 8.31 / d
    a = feed_illumination(feed, 0, 0, panel16, CARRIER_HZ, exponent=8.31)
    assert abs(a) == pytest.approx(expected, rel=1e-12)
    assert (0.05 / d) ** 8.31 == pytest.approx(0.0476, abs=2e-4)  # taper alone


def test_feed_illumination_symmetry(panel16):
    feed = Pose.from_spherical(0.05, 0.0, 0.0)
    grid = feed_illuminations(feed, panel16, CARRIER_HZ, exponent=8.31)
    np.testing.assert_allclose(grid, grid[::-1, ::-1], rtol=1e-12)


def test_feed_illumination_validation(panel16):
    behind = Pose.from_cartesian(0.0, 0.0, -0.05)
    with pytest.raises(ValueError):
        feed_illuminations(behind, panel16, CARRIER_HZ, exponent=1.0)
    with pytest.raises(ValueError):
        feed_illuminations(Pose.from_spherical(0.05, 0, 0), panel16, CARRIER_HZ, exponent=-1.0)


def test_received_power_rejects_negative_power(panel16, table, tx_far, rx_near):
    config = RISConfiguration.uniform(panel16, 2)
    with pytest.raises(ValueError):
        received_power(-1.0, CARRIER_HZ, unity_gain_profile(), panel16, config,
                       tx_far, rx_near, table=table)
    with pytest.raises(ValueError):
        received_power(1.0, CARRIER_HZ, unity_gain_profile(), panel16, config,
                       tx_far, rx_near, table=None)


def test_channel_coefficient_degenerate_geometry(panel16):
    from rissim import DegenerateGeometryError, element_position

    x, y, _ = element_position(2, 2, panel16)
    on_panel = Pose.from_cartesian(x, y, 0.0)
    with pytest.raises(DegenerateGeometryError):
        channel_coefficient("toward_rx", on_panel, 2, 2, panel16, CARRIER_HZ,
                            unity_gain_profile())


@given(exponent=st.floats(0.0, 200.0))
def test_cos_power_pattern_monotone_any_exponent(exponent):
    angles = np.linspace(0.0, math.pi / 2, 91)
    pattern = cos_power_pattern(angles, exponent)
    assert pattern[0] == pytest.approx(1.0)
    assert np.all(np.diff(pattern) <= 1e-12)
    assert np.all((0.0 <= pattern) & (pattern <= 1.0))
