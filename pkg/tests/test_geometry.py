import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rissim import (
    ArrayGeometry,
    DegenerateGeometryError,
    Pose,
    cartesian_to_spherical,
    element_position,
    exact_distance,
    exact_distances,
    fraunhofer_distance,
    planar_distance,
    planar_distances,
    spherical_to_cartesian,
    wavelength,
)

from conftest import CARRIER_HZ


def test_spherical_to_cartesian_on_axis():
    assert spherical_to_cartesian(1.0, 0.0, 0.7) == pytest.approx((0.0, 0.0, 1.0))


def test_spherical_to_cartesian_hand_value():
    x, y, z = spherical_to_cartesian(2.4, math.radians(30.0), 0.0)
    assert x == pytest.approx(2.4 * 0.5, rel=1e-12)
    assert y == 0.0
    assert z == pytest.approx(2.4 * math.sqrt(3.0) / 2.0, rel=1e-12)
    assert z == pytest.approx(2.0785, abs=1e-4)


def test_negative_range_rejected():
    with pytest.raises(ValueError):
        spherical_to_cartesian(-0.1, 0.0, 0.0)
    with pytest.raises(ValueError):
        Pose.from_spherical(-1.0, 0.0, 0.0)


def test_round_trip_fixed_point():
    d, th, ph = cartesian_to_spherical(0.3, -0.4, 1.2)
    assert spherical_to_cartesian(d, th, ph) == pytest.approx((0.3, -0.4, 1.2), rel=1e-12)


@given(
    x=st.floats(-10, 10),
    y=st.floats(-10, 10),
    z=st.floats(-10, 10),
)
def test_round_trip_property(x, y, z):
    d, th, ph = cartesian_to_spherical(x, y, z)
    assert d >= 0
    xx, yy, zz = spherical_to_cartesian(d, th, ph)
    scale = max(d, 1e-30)
    assert abs(xx - x) <= 1e-12 * scale
    assert abs(yy - y) <= 1e-12 * scale
    assert abs(zz - z) <= 1e-12 * scale


def test_pose_consistency_enforced():
    with pytest.raises(ValueError):
        Pose(x=1.0, y=0.0, z=0.0, range=1.0, polar=0.0, azimuth=0.0)
    # the same values built through the constructor are fine
    p = Pose.from_cartesian(1.0, 0.0, 0.0)
    assert p.polar == pytest.approx(math.pi / 2)


def test_element_position_corner(panel16):
    assert element_position(0, 0, panel16) == pytest.approx((-36.75e-3, -36.75e-3, 0.0))


def test_element_position_center_odd():
    geom = ArrayGeometry(17, 17)
    assert element_position(8, 8, geom) == (0.0, 0.0, 0.0)


@pytest.mark.parametrize("m,n", [(0, 0), (3, 7), (15, 1)])
def test_element_position_mirror_symmetry(panel16, m, n):
    x1, y1, _ = element_position(m, n, panel16)
    x2, y2, _ = element_position(panel16.num_x - 1 - m, panel16.num_y - 1 - n, panel16)
    assert (x1, y1) == pytest.approx((-x2, -y2))


@pytest.mark.parametrize("nx,ny", [(1, 1), (2, 3), (16, 16), (17, 5)])
def test_positions_sum_to_origin(nx, ny):
    geom = ArrayGeometry(nx, ny, 3.1e-3, 4.9e-3)
    xe, ye = geom.element_grid()
    assert abs(xe.sum()) < 1e-12
    assert abs(ye.sum()) < 1e-12
    assert geom.offsets_x().sum() == pytest.approx(0.0, abs=1e-12)


def test_element_position_index_errors(panel16):
    for m, n in [(-1, 0), (16, 0), (0, 16)]:
        with pytest.raises(ValueError):
            element_position(m, n, panel16)
        with pytest.raises(ValueError):
            exact_distance(Pose.from_spherical(1.0, 0.0, 0.0), m, n, panel16)


def test_exact_distance_center_element():
    geom = ArrayGeometry(17, 17)
    rx = Pose.from_spherical(0.05, 0.0, 0.0)
    assert exact_distance(rx, 8, 8, geom) == pytest.approx(0.05, rel=1e-12)


def test_exact_distance_corner(panel16):
    rx = Pose.from_spherical(0.05, 0.0, 0.0)
    expected = math.sqrt(0.05**2 + 2 * 0.03675**2)
    assert exact_distance(rx, 15, 15, panel16) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(0.07212, abs=5e-6)


def test_exact_distances_never_below_z(panel16):
    rx = Pose.from_cartesian(0.01, -0.02, 0.05)
    assert np.all(exact_distances(rx, panel16) >= 0.05)


def test_exact_distance_degenerate(panel16):
    x, y, _ = element_position(4, 9, panel16)
    with pytest.raises(DegenerateGeometryError):
        exact_distance(Pose.from_cartesian(x, y, 0.0), 4, 9, panel16)
    with pytest.raises(DegenerateGeometryError):
        exact_distances(Pose.from_cartesian(x, y, 0.0), panel16)


def test_exact_distance_relabel_invariance(panel16):
    point = Pose.from_cartesian(0.13, -0.07, 0.4)
    flipped = Pose.from_cartesian(-0.13, 0.07, 0.4)
    d = exact_distances(point, panel16)
    assert np.allclose(d, exact_distances(flipped, panel16)[::-1, ::-1], rtol=1e-14)


def test_planar_distance_broadside(panel16):
    src = Pose.from_spherical(2.6, 0.0, 0.0)
    assert np.allclose(planar_distances(src, panel16), 2.6)


def test_planar_distance_hand_value(panel16):
    src = Pose.from_spherical(2.6, math.radians(30.0), 0.0)
    # element m=15 has offset +7.5 -> 7.5 * 4.9 mm = 36.75 mm along x
    assert planar_distance(src, 15, 0, panel16) == pytest.approx(2.6 - 0.03675 * 0.5, rel=1e-12)


def test_planar_distance_requires_positive_range(panel16):
    origin = Pose.from_cartesian(0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        planar_distance(origin, 0, 0, panel16)


def test_fresnel_remainder_bound(panel16):
    xe, ye = panel16.element_grid()
    rho_sq = xe**2 + ye**2
    for r in (0.5, 1.0, 2.6, 10.0):
        for theta_deg in (0.0, 15.0, 30.0, 45.0, 60.0):
            for phi_deg in (0.0, 45.0, 90.0):
                src = Pose.from_spherical(r, math.radians(theta_deg), math.radians(phi_deg))
                gap = np.abs(planar_distances(src, panel16) - exact_distances(src, panel16))
                # the second-order term can exceed the leading bound by O((rho/r)^2)
                assert np.all(gap <= rho_sq / (2 * r) * 1.01)


def test_planar_matches_exact_far_out(panel16):
    r = 1000.0 * panel16.aperture_diagonal
    src = Pose.from_spherical(r, math.radians(25.0), math.radians(40.0))
    rel = np.abs(planar_distances(src, panel16) - exact_distances(src, panel16)) / r
    assert np.all(rel <= 1e-6)


def test_fraunhofer_16x16(panel16):
    assert fraunhofer_distance(panel16, CARRIER_HZ) == pytest.approx(2.214, abs=1e-3)


def test_fraunhofer_scales_with_carrier(panel16):
    assert fraunhofer_distance(panel16, 2 * CARRIER_HZ) == pytest.approx(
        2 * fraunhofer_distance(panel16, CARRIER_HZ), rel=1e-12
    )


def test_fraunhofer_single_element_half_wave():
    lam = wavelength(CARRIER_HZ)
    geom = ArrayGeometry(1, 1, lam / 2, lam / 2)
    assert fraunhofer_distance(geom, CARRIER_HZ) == pytest.approx(lam, rel=1e-12)


def test_geometry_validation():
    with pytest.raises(ValueError):
        ArrayGeometry(0, 4)
    with pytest.raises(ValueError):
        ArrayGeometry(4, 4, spacing_x=0.0)
