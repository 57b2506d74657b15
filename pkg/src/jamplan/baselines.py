"""
Benchmark planners the proposed pipeline is compared against.

``joint-12d``
    Log-barrier interior-point search over all twelve decision variables:
    both positions, both roll/pitch pairs and both powers.
``conventional-fixed``
    Under-actuated drones whose antennas stay vertical (all angles zero);
    only positions and powers are searched, with the same barrier method.

Both maximize the Monte Carlo mean of the clamped secrecy rate and start from
the same seeded points as the proposed planner.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .geometry import HALF_PI, EulerAngles, Pose
from .jitter import TRAIN_STREAM, draw_batch
from .optim import BarrierSchedule, barrier_ascent
from .planner import N_STARTS, PlanResult, _Frame, report_secrecy, start_points


class BaselineKind(str, Enum):
    JOINT_12D = "joint-12d"
    CONVENTIONAL_FIXED = "conventional-fixed"


_ZERO = EulerAngles(0.0, 0.0, 0.0)
ANGLE_STREAM = 101


def _bounds(frame: _Frame, with_angles: bool):
    parts_lo = [frame.pos_lo, frame.pos_lo]
    parts_hi = [frame.pos_hi, frame.pos_hi]
    if with_angles:
        parts_lo.append(np.full(4, -HALF_PI))
        parts_hi.append(np.full(4, HALF_PI))
    parts_lo.append([0.0, 0.0])
    parts_hi.append([frame.cap, frame.cap])
    return np.concatenate(parts_lo), np.concatenate(parts_hi)


def _unpack(x: np.ndarray, with_angles: bool):
    p_info, p_jam = x[0:3], x[3:6]
    if with_angles:
        a_info = EulerAngles(float(x[6]), float(x[7]), 0.0)
        a_jam = EulerAngles(float(x[8]), float(x[9]), 0.0)
    else:
        a_info = a_jam = _ZERO
    return p_info, a_info, p_jam, a_jam, float(x[-2]), float(x[-1])


def _starts(scenario, n_starts: int, with_angles: bool, zero_angles: bool = False) -> np.ndarray:
    """Shared position/power starts; joint starts add seeded roll/pitch draws.

    ``zero_angles`` replaces those draws by zero angles (the cube midpoint),
    projecting the joint starts onto the fixed-orientation subspace.
    """
    base = start_points(scenario, n_starts)
    if not with_angles:
        return base
    if zero_angles:
        angles = np.full((n_starts, 4), 0.5)
    else:
        rng = np.random.default_rng([int(scenario.seeds.optimizer) & (2**64 - 1), ANGLE_STREAM])
        angles = rng.uniform(size=(n_starts, 4))
    return np.hstack([base[:, :6], angles, base[:, 6:]])


def _solve_barrier(
    scenario,
    kind: BaselineKind,
    *,
    n_starts: int = N_STARTS,
    schedule: BarrierSchedule = BarrierSchedule(),
    max_evals: int = 20000,
    starts: np.ndarray | None = None,
) -> PlanResult:
    with_angles = kind is BaselineKind.JOINT_12D
    frame = _Frame(scenario, draw_batch(scenario.jitter_model(TRAIN_STREAM)))
    lo, hi = _bounds(frame, with_angles)
    span = hi - lo

    def decode(u):
        return np.clip(lo + u * span, lo, hi)

    def objective(u):
        return frame.mean(*_unpack(decode(u), with_angles), clamped=True)

    if starts is None:
        starts = _starts(scenario, n_starts, with_angles)
    best = None
    trace = []
    evaluations = 0
    converged = True
    for u0 in starts:
        res = barrier_ascent(objective, u0, scale=scenario.bandwidth, schedule=schedule,
                             max_evals=max_evals)
        evaluations += res.evaluations
        converged &= res.converged
        if best is None or res.value > best.value:
            best = res
        trace.append(best.value)

    p_info, a_info, p_jam, a_jam, pw_info, pw_jam = _unpack(decode(best.x), with_angles)
    plan = PlanResult(
        info_pose=Pose(p_info + frame.offset, a_info),
        jam_pose=Pose(p_jam + frame.offset, a_jam),
        powers=scenario.radio(pw_info, pw_jam),
        expected_secrecy=0.0,
        standard_error=0.0,
        line=None,
        iterations=len(starts),
        trace=trace,
        converged=converged,
        evaluations=evaluations,
        method=kind.value,
    )
    plan.expected_secrecy, plan.standard_error = report_secrecy(plan, scenario)
    return plan


def solve_joint_12d(scenario, **kwargs) -> PlanResult:
    """Interior-point search over positions, roll/pitch of both drones and powers."""
    return _solve_barrier(scenario, BaselineKind.JOINT_12D, **kwargs)


def solve_conventional(scenario, **kwargs) -> PlanResult:
    """Interior-point search with both antennas fixed vertical."""
    return _solve_barrier(scenario, BaselineKind.CONVENTIONAL_FIXED, **kwargs)
