"""Panel layout, coordinate conversions, and per-element distance models.

Conventions: the panel lies in the x-y plane with its geometric center at
the origin. The polar angle ``theta`` is measured from the +z axis (panel
normal) and the azimuth ``phi`` in the x-y plane from +x. Element (m, n)
sits at (delta_m * dx, delta_n * dy, 0) with delta_m = m - (Nx - 1) / 2,
so even-sized panels have half-integer offsets and no center element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError
from .units import wavelength

_POSE_RTOL = 1e-9


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform planar array: element counts and spacings in meters."""

    num_x: int
    num_y: int
    spacing_x: float = 4.9e-3
    spacing_y: float = 4.9e-3

    def __post_init__(self):
        if self.num_x < 1 or self.num_y < 1:
            raise ValueError(f"element counts must be >= 1, got {self.num_x}x{self.num_y}")
        if self.spacing_x <= 0 or self.spacing_y <= 0:
            raise ValueError(
                f"spacings must be positive, got ({self.spacing_x}, {self.spacing_y})"
            )

    @property
    def num_elements(self) -> int:
        return self.num_x * self.num_y

    def offsets_x(self) -> np.ndarray:
        """Index offsets delta_m, symmetric about zero."""
        return np.arange(self.num_x) - (self.num_x - 1) / 2.0

    def offsets_y(self) -> np.ndarray:
        return np.arange(self.num_y) - (self.num_y - 1) / 2.0

    def element_grid(self) -> tuple[np.ndarray, np.ndarray]:
        """(Nx, Ny) meshgrids of element x and y coordinates in meters."""
        xs = self.offsets_x() * self.spacing_x
        ys = self.offsets_y() * self.spacing_y
        return np.meshgrid(xs, ys, indexing="ij")

    @property
    def aperture_width(self) -> float:
        return self.num_x * self.spacing_x

    @property
    def aperture_height(self) -> float:
        return self.num_y * self.spacing_y

    @property
    def aperture_area(self) -> float:
        return self.aperture_width * self.aperture_height

    @property
    def aperture_diagonal(self) -> float:
        return math.hypot(self.aperture_width, self.aperture_height)


@dataclass(frozen=True)
class Pose:
    """A point relative to the panel center, in both Cartesian and spherical form.

    Both representations are stored and must agree; use :meth:`from_cartesian`
    or :meth:`from_spherical` rather than filling all six fields by hand.
    """

    x: float
    y: float
    z: float
    range: float
    polar: float
    azimuth: float

    def __post_init__(self):
        if self.range < 0:
            raise ValueError(f"range must be non-negative, got {self.range}")
        ex, ey, ez = spherical_to_cartesian(self.range, self.polar, self.azimuth)
        tol = _POSE_RTOL * max(self.range, 1e-30)
        if abs(self.x - ex) > tol or abs(self.y - ey) > tol or abs(self.z - ez) > tol:
            raise ValueError(
                "inconsistent pose: cartesian "
                f"({self.x}, {self.y}, {self.z}) vs spherical "
                f"(d={self.range}, theta={self.polar}, phi={self.azimuth})"
            )

    @classmethod
    def from_cartesian(cls, x: float, y: float, z: float) -> "Pose":
        d, theta, phi = cartesian_to_spherical(x, y, z)
        return cls(x=x, y=y, z=z, range=d, polar=theta, azimuth=phi)

    @classmethod
    def from_spherical(cls, range_m: float, polar: float, azimuth: float) -> "Pose":
        x, y, z = spherical_to_cartesian(range_m, polar, azimuth)
        return cls(x=x, y=y, z=z, range=range_m, polar=polar, azimuth=azimuth)


def spherical_to_cartesian(range_m: float, polar: float, azimuth: float) -> tuple[float, float, float]:
    """(d, theta, phi) -> (d sin(theta) cos(phi), d sin(theta) sin(phi), d cos(theta))."""
    if range_m < 0:
        raise ValueError(f"range must be non-negative, got {range_m}")
    st = math.sin(polar)
    return (
        range_m * st * math.cos(azimuth),
        range_m * st * math.sin(azimuth),
        range_m * math.cos(polar),
    )


def cartesian_to_spherical(x: float, y: float, z: float) -> tuple[float, float, float]:
    """Inverse of :func:`spherical_to_cartesian`; angles are 0 where undefined."""
    d = math.sqrt(x * x + y * y + z * z)
    rho = math.hypot(x, y)
    theta = math.atan2(rho, z) if d > 0 else 0.0
    phi = math.atan2(y, x) if rho > 0 else 0.0
    return d, theta, phi


def _check_indices(m: int, n: int, geom: ArrayGeometry) -> None:
    if not (0 <= m < geom.num_x and 0 <= n < geom.num_y):
        raise ValueError(
            f"element index ({m}, {n}) outside {geom.num_x}x{geom.num_y} panel"
        )


def element_position(m: int, n: int, geom: ArrayGeometry) -> tuple[float, float, float]:
    """Position of element (m, n) in meters: (delta_m dx, delta_n dy, 0)."""
    _check_indices(m, n, geom)
    return (
        (m - (geom.num_x - 1) / 2.0) * geom.spacing_x,
        (n - (geom.num_y - 1) / 2.0) * geom.spacing_y,
        0.0,
    )


def exact_distance(point: Pose, m: int, n: int, geom: ArrayGeometry) -> float:
    """Spherical-wave distance from element (m, n) to the point."""
    _check_indices(m, n, geom)
    ex, ey, _ = element_position(m, n, geom)
    d = math.sqrt((point.x - ex) ** 2 + (point.y - ey) ** 2 + point.z**2)
    if d == 0.0:
        raise DegenerateGeometryError(
            f"point coincides with element ({m}, {n}); distances are undefined"
        )
    return d


def exact_distances(point: Pose, geom: ArrayGeometry) -> np.ndarray:
    """(Nx, Ny) array of spherical-wave distances from every element to the point."""
    xe, ye = geom.element_grid()
    d = np.sqrt((point.x - xe) ** 2 + (point.y - ye) ** 2 + point.z**2)
    if np.any(d == 0.0):
        raise DegenerateGeometryError("point lies on the panel surface at an element")
    return d


def planar_distance(source: Pose, m: int, n: int, geom: ArrayGeometry) -> float:
    """Planar-wave (far-field) distance approximation for element (m, n).

    Returns r - delta_m dx sin(theta) cos(phi) - delta_n dy sin(theta) sin(phi);
    the first-order expansion of :func:`exact_distance` in element offset.
    """
    _check_indices(m, n, geom)
    if source.range <= 0:
        raise ValueError("planar model requires a source with positive range")
    ex, ey, _ = element_position(m, n, geom)
    st = math.sin(source.polar)
    return source.range - ex * st * math.cos(source.azimuth) - ey * st * math.sin(source.azimuth)


def planar_distances(source: Pose, geom: ArrayGeometry) -> np.ndarray:
    """(Nx, Ny) array of planar-model distances (see :func:`planar_distance`)."""
    if source.range <= 0:
        raise ValueError("planar model requires a source with positive range")
    xe, ye = geom.element_grid()
    st = math.sin(source.polar)
    return source.range - xe * st * math.cos(source.azimuth) - ye * st * math.sin(source.azimuth)


def fraunhofer_distance(geom: ArrayGeometry, carrier_hz: float) -> float:
    """Far-field boundary 2 D^2 / lambda with D the aperture diagonal."""
    d = geom.aperture_diagonal
    return 2.0 * d * d / wavelength(carrier_hz)
