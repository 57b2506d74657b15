"""
Vector and angle primitives for the dipole-carrying drones.

Positions and directions are plain ``numpy`` arrays of shape ``(3,)`` in the
world frame (x east, y north, z up, meters). Orientations are roll/pitch/yaw
Euler angles in radians. The antenna axis of a drone is the third column of
its attitude, see :func:`orientation_vector`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DegenerateGeometryError, InvalidArgumentError

HALF_PI = 0.5 * math.pi

# points closer than this are treated as coincident
_COINCIDENT_TOL = 1e-9


class EulerAngles(NamedTuple):
    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0

    def is_finite(self) -> bool:
        return all(math.isfinite(a) for a in self)


def as_vec3(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise InvalidArgumentError(f"expected a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"non-finite vector {arr}")
    return arr


@dataclass(frozen=True)
class Pose:
    """Position of one drone and the orientation it is commanded to hold."""

    position: np.ndarray
    orientation: EulerAngles = field(default_factory=EulerAngles)

    def __post_init__(self):
        object.__setattr__(self, "position", as_vec3(self.position))
        object.__setattr__(self, "orientation", EulerAngles(*self.orientation))

    @property
    def altitude(self) -> float:
        return float(self.position[2])

    def __eq__(self, other):
        if not isinstance(other, Pose):
            return NotImplemented
        return bool(np.array_equal(self.position, other.position)) and tuple(
            self.orientation
        ) == tuple(other.orientation)


@dataclass(frozen=True)
class GroundLine:
    """Line through the origin of the ground plane, ``y = tan(nu) x``.

    ``nu`` lives in ``[-pi/2, pi/2]``; both endpoints denote the line x = 0.
    ``normal`` is the in-plane unit normal used for point-to-line distances.
    """

    nu: float

    @property
    def direction(self) -> np.ndarray:
        if abs(self.nu) >= HALF_PI:
            return np.array([0.0, 1.0, 0.0])
        return np.array([math.cos(self.nu), math.sin(self.nu), 0.0])

    @property
    def normal(self) -> np.ndarray:
        if abs(self.nu) >= HALF_PI:
            return np.array([1.0, 0.0, 0.0])
        return np.array([-math.sin(self.nu), math.cos(self.nu), 0.0])

    @property
    def slope(self) -> float:
        return math.tan(self.nu)

    def point(self, t: float) -> np.ndarray:
        return t * self.direction

    def distance(self, points) -> np.ndarray:
        """Horizontal distance from each point to the line (z ignored)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.abs(pts[:, :2] @ self.normal[:2])


def orientation_vector(angles: EulerAngles) -> np.ndarray:
    """Antenna axis for roll/pitch/yaw angles; always unit norm."""
    angles = EulerAngles(*angles)
    if not angles.is_finite():
        raise InvalidArgumentError(f"non-finite Euler angles {tuple(angles)}")
    phi, theta, psi = angles
    cphi, sphi = math.cos(phi), math.sin(phi)
    cth, sth = math.cos(theta), math.sin(theta)
    cpsi, spsi = math.cos(psi), math.sin(psi)
    return np.array(
        [
            cphi * sth * cpsi + sphi * spsi,
            cphi * sth * spsi - sphi * cpsi,
            cphi * cth,
        ]
    )


def unit(v, what: str = "vector") -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = float(np.linalg.norm(v))
    if n < _COINCIDENT_TOL:
        raise DegenerateGeometryError(f"{what} has (near) zero length")
    return v / n


def elevation_cosine(observer, realized_angles: EulerAngles, target) -> float:
    """Cosine between the antenna axis and the line of sight to ``target``."""
    los = unit(as_vec3(target) - as_vec3(observer), "line of sight")
    c = float(los @ orientation_vector(realized_angles))
    return min(1.0, max(-1.0, c))


def antenna_gain(cos_gamma: float) -> float:
    """Normalized dipole power gain ``sin^2`` expressed through the cosine."""
    c = float(cos_gamma)
    if not math.isfinite(c) or abs(c) > 1.0 + 1e-12:
        raise InvalidArgumentError(f"cosine {c!r} outside [-1, 1]")
    c = min(1.0, max(-1.0, c))
    return 1.0 - c * c


# The helpers below work on plain float triples; the planner calls them once
# per candidate, where numpy's per-call overhead on 3-vectors dominates.


def _canonical(x: float, y: float, z: float) -> tuple[float, float, float]:
    if z > 0:
        return x, y, z
    if z < 0:
        return -x, -y, -z
    first = x if x != 0 else y
    if first == 0:
        raise DegenerateGeometryError("cannot canonicalize the zero vector")
    return (x, y, z) if first > 0 else (-x, -y, -z)


def _angles(x: float, y: float, z: float) -> EulerAngles:
    y = min(1.0, max(-1.0, y))
    phi = -math.asin(y)
    if abs(y) >= 1.0:
        return EulerAngles(phi, 0.0, 0.0)
    cphi = math.cos(math.asin(y))
    return EulerAngles(phi, math.atan2(x / cphi, z / cphi), 0.0)


def _plane_normal(p: tuple[float, float, float], d: tuple[float, float, float]):
    """Canonical unit normal of the plane through point ``p`` and the line
    ``t * d`` through the origin, built from the line points at t = -1, +1."""
    px, py, pz = p
    ax, ay, az = -d[0] - px, -d[1] - py, -d[2] - pz
    bx, by, bz = d[0] - px, d[1] - py, d[2] - pz
    na = math.sqrt(ax * ax + ay * ay + az * az)
    nb = math.sqrt(bx * bx + by * by + bz * bz)
    if na < _COINCIDENT_TOL or nb < _COINCIDENT_TOL:
        raise DegenerateGeometryError("drone lies on the ground line")
    ax, ay, az = ax / na, ay / na, az / na
    bx, by, bz = bx / nb, by / nb, bz / nb
    nx, ny, nz = ay * bz - az * by, az * bx - ax * bz, ax * by - ay * bx
    n = math.sqrt(nx * nx + ny * ny + nz * nz)
    # |u1 x u2| is the sine of the angle the two line points subtend
    if n < 1e-12:
        raise DegenerateGeometryError("drone lies on the ground line")
    return _canonical(nx / n, ny / n, nz / n)


def canonicalize_axis(axis) -> np.ndarray:
    """Pick the sign of an axis so that z > 0, or the first nonzero entry > 0."""
    x, y, z = (float(c) for c in np.asarray(axis, dtype=float).reshape(3))
    return np.array(_canonical(x, y, z))


def angles_from_axis(axis) -> EulerAngles:
    """Roll and pitch (yaw fixed at zero) that point the antenna along ``axis``.

    Expects a canonical unit axis (z >= 0) so both angles land in
    ``[-pi/2, pi/2]``. At ``|axis_y| = 1`` pitch is indeterminate and set to 0.
    """
    return _angles(*(float(c) for c in as_vec3(axis)))


def plane_normal_from_ground_line(drone_position, line: GroundLine) -> np.ndarray:
    """Axis whose broadside plane contains both the drone and ``line``."""
    p = tuple(float(c) for c in as_vec3(drone_position))
    return np.array(_plane_normal(p, tuple(float(c) for c in line.direction)))
