"""
Path-loss SINR and secrecy-rate model.

Two routes compute the same quantities. The scalar functions
(:func:`sinr_at_node`, :func:`secrecy_rate`, :func:`utility_unclamped`) take
poses and angles one link at a time and are meant for inspection and checks.
The array kernels (:func:`sinr_matrix`, :func:`rate_samples`) take stacks of
antenna axes and are what the optimizers call in their inner loops.

Node index 0 is always the legitimate user; indices 1..N are eavesdroppers.
Rates are in bits per second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import DegenerateGeometryError, InvalidArgumentError
from .geometry import EulerAngles, Pose, antenna_gain, as_vec3, orientation_vector


@dataclass(frozen=True)
class RadioParams:
    power_info: float
    power_jam: float
    noise: tuple[float, ...]
    bandwidth: float
    power_cap: float

    def __post_init__(self):
        object.__setattr__(self, "noise", tuple(float(s) for s in self.noise))
        for name in ("power_info", "power_jam"):
            p = getattr(self, name)
            if not (0.0 <= p <= self.power_cap):
                raise InvalidArgumentError(
                    f"{name}={p} outside [0, power_cap={self.power_cap}]"
                )
        if not self.noise or min(self.noise) <= 0:
            raise InvalidArgumentError("noise variances must be positive")
        if self.bandwidth <= 0:
            raise InvalidArgumentError("bandwidth must be positive")

    def with_powers(self, power_info: float, power_jam: float) -> "RadioParams":
        return replace(self, power_info=power_info, power_jam=power_jam)


@dataclass(frozen=True)
class SinrVector:
    gamma_user: float
    gamma_eaves: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "gamma_eaves", tuple(float(g) for g in self.gamma_eaves))


def _link(position, angles: EulerAngles, node) -> tuple[float, float]:
    """Gain toward ``node`` and squared distance, in the kernel's operation order."""
    ox, oy, oz = (float(a) - float(b) for a, b in zip(node, position))
    d2 = ox * ox + oy * oy + oz * oz
    if d2 <= 1e-18:
        raise DegenerateGeometryError("a node coincides with a drone")
    r = math.sqrt(d2)
    ax, ay, az = orientation_vector(angles)
    c = ax * (ox / r) + ay * (oy / r) + az * (oz / r)
    return antenna_gain(min(1.0, max(-1.0, c))), d2


def sinr_at_node(
    info_pose: Pose,
    info_angles_realized: EulerAngles,
    jam_pose: Pose,
    jam_angles_realized: EulerAngles,
    node_position,
    radio: RadioParams,
    node_index: int,
) -> float:
    node = as_vec3(node_position)
    try:
        g_info, d2_info = _link(info_pose.position, info_angles_realized, node)
        g_jam, d2_jam = _link(jam_pose.position, jam_angles_realized, node)
    except DegenerateGeometryError:
        raise DegenerateGeometryError(f"node {node_index} coincides with a drone") from None
    signal = g_info * (radio.power_info / d2_info)
    interference = g_jam * (radio.power_jam / d2_jam)
    return signal / (interference + radio.noise[node_index])


def _rate_gap(sinr: SinrVector, bandwidth: float) -> float:
    if not sinr.gamma_eaves:
        raise InvalidArgumentError("at least one eavesdropper is required")
    # numpy's log2 so that scalar and array routes agree bit for bit
    best_eaves = max(float(np.log2(1.0 + g)) for g in sinr.gamma_eaves)
    return bandwidth * (float(np.log2(1.0 + sinr.gamma_user)) - best_eaves)


def secrecy_rate(sinr: SinrVector, bandwidth: float) -> float:
    return max(0.0, _rate_gap(sinr, bandwidth))


def utility_unclamped(sinr: SinrVector, bandwidth: float) -> float:
    """Secrecy rate without the positive-part clamp; negative when leaking."""
    return _rate_gap(sinr, bandwidth)


def sinr_vector(
    info_pose: Pose,
    info_angles: EulerAngles,
    jam_pose: Pose,
    jam_angles: EulerAngles,
    nodes: Sequence,
    radio: RadioParams,
) -> SinrVector:
    """SINR at the user (``nodes[0]``) and at each eavesdropper."""
    gammas = [
        sinr_at_node(info_pose, info_angles, jam_pose, jam_angles, p, radio, j)
        for j, p in enumerate(nodes)
    ]
    return SinrVector(gammas[0], tuple(gammas[1:]))


# ---------------------------------------------------------------------------
# array kernels


def sight_lines(position: np.ndarray, nodes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unit lines of sight from ``position`` to each node and squared distances."""
    offsets = nodes - position
    d2 = (offsets * offsets).sum(axis=1)
    if np.any(d2 <= 1e-18):
        raise DegenerateGeometryError("a node coincides with a drone")
    return offsets / np.sqrt(d2)[:, None], d2


def _gain(axes: np.ndarray, los: np.ndarray) -> np.ndarray:
    # elementwise products keep every row bit-identical for identical axes
    c = (
        axes[:, 0:1] * los[:, 0]
        + axes[:, 1:2] * los[:, 1]
        + axes[:, 2:3] * los[:, 2]
    )
    np.clip(c, -1.0, 1.0, out=c)
    return 1.0 - c * c


def sinr_matrix(
    info_position: np.ndarray,
    info_axes: np.ndarray,
    jam_position: np.ndarray,
    jam_axes: np.ndarray,
    nodes: np.ndarray,
    power_info: float,
    power_jam: float,
    noise: np.ndarray,
) -> np.ndarray:
    """SINR for every (axis sample, node) pair, shape ``(M, K)``.

    ``info_axes`` and ``jam_axes`` are ``(M, 3)`` stacks of realized antenna
    axes, ``nodes`` is ``(K, 3)`` with the user first.
    """
    los_i, d2_i = sight_lines(info_position, nodes)
    los_j, d2_j = sight_lines(jam_position, nodes)
    signal = _gain(info_axes, los_i) * (power_info / d2_i)
    interference = _gain(jam_axes, los_j) * (power_jam / d2_j)
    return signal / (interference + noise)


def rate_samples(sinr: np.ndarray, bandwidth: float, clamped: bool = True) -> np.ndarray:
    """Per-sample secrecy rate (or unclamped utility) from an ``(M, K)`` SINR stack."""
    if sinr.shape[1] < 2:
        raise InvalidArgumentError("at least one eavesdropper is required")
    rates = np.log2(1.0 + sinr)
    gap = bandwidth * (rates[:, 0] - rates[:, 1:].max(axis=1))
    if clamped:
        np.maximum(gap, 0.0, out=gap)
    return gap
