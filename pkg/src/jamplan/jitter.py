"""
Gaussian attitude jitter and the Monte Carlo secrecy estimator.

Jitter is added to the commanded roll and pitch of each drone. Yaw jitter is
not drawn: the dipole pattern is symmetric about its axis, and the realized
axis below keeps the commanded yaw.

A :class:`JitterBatch` is drawn once and reused for every candidate an
optimizer looks at (common random numbers), which turns the estimate into a
deterministic function of the decision variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import RadioParams, rate_samples, sinr_matrix
from .errors import InvalidArgumentError
from .geometry import EulerAngles, Pose

# draws are generated per named stream so optimization and reporting never
# share random numbers
TRAIN_STREAM = 0
REPORT_STREAM = 1
TEST_STREAM = 2


@dataclass(frozen=True)
class JitterModel:
    sigma_info: float
    sigma_jam: float
    sample_count: int = 512
    seed: int = 0
    stream: int = TRAIN_STREAM

    def __post_init__(self):
        if self.sigma_info < 0 or self.sigma_jam < 0:
            raise InvalidArgumentError("jitter standard deviations must be >= 0")
        if int(self.sample_count) < 1:
            raise InvalidArgumentError("sample_count must be >= 1")


@dataclass(frozen=True, eq=False)
class JitterBatch:
    """``(M, 4)`` angle offsets, columns roll_I, pitch_I, roll_J, pitch_J."""

    offsets: np.ndarray
    _cos: np.ndarray = field(init=False, repr=False)
    _sin: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        w = np.ascontiguousarray(self.offsets, dtype=float)
        if w.ndim != 2 or w.shape[1] != 4 or w.shape[0] < 1:
            raise InvalidArgumentError(f"jitter offsets must be (M, 4), got {w.shape}")
        w.setflags(write=False)
        object.__setattr__(self, "offsets", w)
        object.__setattr__(self, "_cos", np.cos(w))
        object.__setattr__(self, "_sin", np.sin(w))

    def __len__(self) -> int:
        return self.offsets.shape[0]

    @property
    def degenerate(self) -> bool:
        """True when every offset is zero, i.e. the jitter is a point mass."""
        return not np.any(self.offsets)

    def realized_axes(self, info: EulerAngles, jam: EulerAngles) -> tuple[np.ndarray, np.ndarray]:
        """Antenna axes of both drones for every row, each ``(M, 3)``."""
        return (
            _perturbed_axes(info, self._cos[:, 0], self._sin[:, 0], self._cos[:, 1], self._sin[:, 1]),
            _perturbed_axes(jam, self._cos[:, 2], self._sin[:, 2], self._cos[:, 3], self._sin[:, 3]),
        )


def zero_batch() -> JitterBatch:
    return JitterBatch(np.zeros((1, 4)))


def _perturbed_axes(angles, cw_phi, sw_phi, cw_th, sw_th) -> np.ndarray:
    phi, theta, psi = angles
    cp, sp = math.cos(phi), math.sin(phi)
    ct, st = math.cos(theta), math.sin(theta)
    # angle addition keeps a zero offset exact: cos(a + 0) == cos(a) bitwise
    c_phi = cp * cw_phi - sp * sw_phi
    s_phi = sp * cw_phi + cp * sw_phi
    c_th = ct * cw_th - st * sw_th
    s_th = st * cw_th + ct * sw_th
    cpsi, spsi = math.cos(psi), math.sin(psi)
    axes = np.empty((c_phi.shape[0], 3))
    axes[:, 0] = c_phi * s_th * cpsi + s_phi * spsi
    axes[:, 1] = c_phi * s_th * spsi - s_phi * cpsi
    axes[:, 2] = c_phi * c_th
    return axes


def draw_batch(model: JitterModel) -> JitterBatch:
    m = int(model.sample_count)
    if m < 1:
        raise InvalidArgumentError("sample_count must be >= 1")
    if model.sigma_info == 0 and model.sigma_jam == 0:
        return JitterBatch(np.zeros((m, 4)))
    rng = np.random.default_rng([int(model.seed) & (2**64 - 1), int(model.stream)])
    z = rng.standard_normal((m, 4))
    scale = np.array([model.sigma_info, model.sigma_info, model.sigma_jam, model.sigma_jam])
    return JitterBatch(z * scale)


def mean_and_stderr(samples: np.ndarray) -> tuple[float, float]:
    """Sample mean and its standard error, reduced in a fixed order.

    The mean is taken around the first sample, so a constant sample returns
    that constant bit for bit.
    """
    x = np.asarray(samples, dtype=float)
    m = x.shape[0]
    if m == 1:
        return float(x[0]), 0.0
    dev = x - x[0]
    shift = float(np.sum(dev)) / m
    mean = float(x[0]) + shift
    resid = dev - shift
    var = float(np.sum(resid * resid)) / (m - 1)
    return mean, math.sqrt(var / m)


def secrecy_samples(
    info_pose: Pose,
    jam_pose: Pose,
    radio: RadioParams,
    nodes: np.ndarray,
    batch: JitterBatch,
    clamped: bool = True,
) -> np.ndarray:
    """Per-realization secrecy rate (or unclamped utility), shape ``(M,)``."""
    if batch.degenerate:
        batch = zero_batch()
    info_axes, jam_axes = batch.realized_axes(info_pose.orientation, jam_pose.orientation)
    noise = np.asarray(radio.noise, dtype=float)
    if noise.shape[0] != nodes.shape[0]:
        raise InvalidArgumentError(
            f"{noise.shape[0]} noise variances for {nodes.shape[0]} nodes"
        )
    gamma = sinr_matrix(
        info_pose.position,
        info_axes,
        jam_pose.position,
        jam_axes,
        nodes,
        radio.power_info,
        radio.power_jam,
        noise,
    )
    return rate_samples(gamma, radio.bandwidth, clamped)


def expected_secrecy(
    info_pose: Pose,
    jam_pose: Pose,
    radio: RadioParams,
    scenario,
    batch: JitterBatch,
    clamped: bool = True,
    eaves: str = "estimated",
) -> tuple[float, float]:
    """Monte Carlo mean of the secrecy rate over ``batch`` and its standard error.

    ``scenario`` supplies the node positions; ``eaves`` selects the estimated
    (what the planner sees) or true eavesdropper positions.
    """
    nodes = scenario.node_positions(eaves)
    return mean_and_stderr(secrecy_samples(info_pose, jam_pose, radio, nodes, batch, clamped))
