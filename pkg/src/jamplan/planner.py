"""
Four-phase pose and power planner for an information drone and a jammer.

Per outer iteration:

1. pick the ground line through the user that stays as far as possible from
   every estimated eavesdropper and point the information drone's broadside
   plane through it (so the user sees full gain);
2. point the jammer's antenna axis, and thus its null, at the user;
3. and 4. search drone positions and transmit powers for the best Monte Carlo
   mean of the unclamped secrecy utility, re-deriving both orientations from
   the positions at every candidate.

The solver works in a frame centered on the user; results are translated
back to world coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .channel import RadioParams, rate_samples, sinr_matrix
from .errors import DegenerateGeometryError, InvalidArgumentError
from .geometry import (
    HALF_PI,
    EulerAngles,
    GroundLine,
    Pose,
    _angles,
    _canonical,
    _plane_normal,
    as_vec3,
)
from .jitter import (
    REPORT_STREAM,
    TRAIN_STREAM,
    JitterBatch,
    draw_batch,
    expected_secrecy,
    mean_and_stderr,
    zero_batch,
)
from .optim import nelder_mead_box

GRID_POINTS = 4096
TIE_RTOL = 1e-9
N_STARTS = 8
START_STREAM = 100

__all__ = [
    "GroundLine",
    "PlanResult",
    "PositionPowerResult",
    "line_maximin",
    "info_orientation",
    "jam_orientation",
    "optimize_positions_powers",
    "start_points",
    "solve",
]


# ---------------------------------------------------------------------------
# phase 1


def _min_sq_distance(nu: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """``min_j (w(nu) . p_j)^2`` for an array of line angles."""
    w = np.stack([-np.sin(nu), np.cos(nu)], axis=-1)
    h = w @ pts.T
    return np.min(h * h, axis=-1)


def _wrap(nu: float) -> float:
    """Map an angle onto ``[-pi/2, pi/2)``; the line is pi-periodic in nu."""
    return (nu + HALF_PI) % math.pi - HALF_PI


def _wrap_array(nu: np.ndarray) -> np.ndarray:
    return (nu + HALF_PI) % math.pi - HALF_PI


def _breakpoints(pts: np.ndarray) -> np.ndarray:
    """Angles where the maximin optimum can sit: a line perpendicular to one
    eavesdropper (its distance peaks) or parallel to p_i - p_j or p_i + p_j
    (two distances cross)."""
    dirs = [np.stack([-pts[:, 1], pts[:, 0]], axis=1)]
    i, j = np.triu_indices(len(pts), k=1)
    dirs += [pts[i] - pts[j], pts[i] + pts[j]]
    d = np.concatenate(dirs)
    d = d[np.hypot(d[:, 0], d[:, 1]) > 0.0]
    return _wrap_array(np.arctan2(d[:, 1], d[:, 0]))


def _golden_max(fun, a: float, b: float, tol: float = 1e-13) -> float:
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def line_maximin(estimated_eaves: Sequence) -> tuple[GroundLine, float]:
    """Ground line through the origin maximizing the smallest squared distance
    to the eavesdroppers' ground projections.

    A uniform grid of :data:`GRID_POINTS` angles locates the candidate peaks,
    each of which is polished by golden-section search on its grid bracket.
    Among peaks within a relative ``1e-9`` of the best, the smallest angle wins.
    """
    pts = np.asarray(estimated_eaves, dtype=float).reshape(-1, 3)[:, :2]
    if pts.shape[0] == 0:
        raise InvalidArgumentError("need at least one eavesdropper")
    if not np.all(np.isfinite(pts)):
        raise InvalidArgumentError("non-finite eavesdropper position")

    step = math.pi / GRID_POINTS
    grid = -HALF_PI + step * np.arange(GRID_POINTS)
    vals = _min_sq_distance(grid, pts)
    top = float(vals.max())
    if top <= 0.0:
        # an eavesdropper on the user: every line touches it
        return GroundLine(0.0), 0.0

    peaks = np.flatnonzero((vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1)))

    def f(nu):
        return float(_min_sq_distance(np.array([nu]), pts)[0])

    exact = _breakpoints(pts)
    candidates = []
    for k in peaks:
        nu = _wrap(_golden_max(f, grid[k] - step, grid[k] + step))
        val = f(nu)
        # golden section resolves a flat peak only to ~sqrt(eps); snap onto a
        # closed-form optimum nearby when it is at least as good
        near = exact[np.abs(_wrap_array(exact - nu)) <= 2.0 * step]
        if near.size:
            vals = _min_sq_distance(near, pts)
            j = int(np.argmax(vals))
            if vals[j] >= val * (1.0 - 1e-12):
                nu, val = float(near[j]), float(vals[j])
        candidates.append((nu, val))
    best = max(v for _, v in candidates)
    nu_star = min(nu for nu, v in candidates if v >= best * (1.0 - TIE_RTOL))
    return GroundLine(nu_star), f(nu_star)


def info_orientation(info_position, line: GroundLine) -> EulerAngles:
    """Desired orientation of the information drone for a line through the user.

    Positions are relative to the user, who sits at the origin on ``line``.
    """
    p = tuple(float(c) for c in as_vec3(info_position))
    return _info_angles(p, tuple(float(c) for c in line.direction))


def jam_orientation(jam_position, user_position) -> EulerAngles:
    """Desired jammer orientation: antenna axis (the dipole null) on the user."""
    offset = as_vec3(user_position) - as_vec3(jam_position)
    return _jam_angles(tuple(float(c) for c in offset))


def _info_angles(p, direction) -> EulerAngles:
    if p[2] <= 0.0:
        raise DegenerateGeometryError("information drone must fly above the ground")
    return _angles(*_plane_normal(p, direction))


def _jam_angles(offset) -> EulerAngles:
    x, y, z = offset
    n = math.sqrt(x * x + y * y + z * z)
    if n < 1e-9:
        raise DegenerateGeometryError("jammer coincides with the user")
    return _angles(*_canonical(x / n, y / n, z / n))


# ---------------------------------------------------------------------------
# phases 3 and 4


class _Frame:
    """User-centered view of a scenario with fixed Monte Carlo draws."""

    def __init__(self, scenario, batch: JitterBatch, eaves: str = "estimated"):
        self.scenario = scenario
        self.offset = scenario.user_position.copy()
        self.nodes = scenario.node_positions(eaves) - self.offset
        self.noise = np.array(scenario.radio(0.0, 0.0).noise)
        self.bandwidth = scenario.bandwidth
        self.cap = scenario.power_cap
        a = scenario.area_half_extent
        self.pos_lo = np.array([-a, -a, scenario.z_min])
        self.pos_hi = np.array([a, a, scenario.z_max])
        self.batch = zero_batch() if batch.degenerate else batch

    def samples(self, p_info, a_info, p_jam, a_jam, power_info, power_jam, clamped):
        info_axes, jam_axes = self.batch.realized_axes(a_info, a_jam)
        gamma = sinr_matrix(
            p_info, info_axes, p_jam, jam_axes, self.nodes, power_info, power_jam, self.noise
        )
        return rate_samples(gamma, self.bandwidth, clamped)

    def mean(self, *args, clamped: bool) -> float:
        return mean_and_stderr(self.samples(*args, clamped))[0]


class PositionPowerResult(NamedTuple):
    info_position: np.ndarray
    jam_position: np.ndarray
    power_info: float
    power_jam: float
    objective: float
    evaluations: int
    converged: bool


def _decision_bounds(frame: _Frame) -> tuple[np.ndarray, np.ndarray]:
    lo = np.concatenate([frame.pos_lo, frame.pos_lo, [0.0, 0.0]])
    hi = np.concatenate([frame.pos_hi, frame.pos_hi, [frame.cap, frame.cap]])
    return lo, hi


def _proposed_objective(frame: _Frame, line: GroundLine, lo, hi):
    span = hi - lo
    direction = tuple(float(c) for c in line.direction)

    def decode(u):
        return np.clip(lo + u * span, lo, hi)

    def objective(u):
        x = decode(u)
        p_info, p_jam = x[0:3], x[3:6]
        xs = x.tolist()
        a_info = _info_angles(tuple(xs[0:3]), direction)
        a_jam = _jam_angles((-xs[3], -xs[4], -xs[5]))
        return frame.mean(p_info, a_info, p_jam, a_jam, x[6], x[7], clamped=False)

    return objective, decode


def optimize_positions_powers(
    scenario,
    line: GroundLine,
    batch: JitterBatch,
    start,
    *,
    max_evals: int = 4000,
) -> PositionPowerResult:
    """Local search over both drone positions and both powers.

    ``start`` is ``((info_position, jam_position), (power_info, power_jam))`` in
    world coordinates and must satisfy the box constraints. Orientations
    follow from the positions (``line`` is in the user-centered frame). The
    objective is the batch mean of the unclamped secrecy utility.
    """
    (p_info0, p_jam0), (pw_info0, pw_jam0) = start
    frame = _Frame(scenario, batch)
    lo, hi = _decision_bounds(frame)
    x0 = np.concatenate(
        [as_vec3(p_info0) - frame.offset, as_vec3(p_jam0) - frame.offset, [pw_info0, pw_jam0]]
    )
    if np.any(x0 < lo) or np.any(x0 > hi):
        raise InvalidArgumentError("start point violates the position or power bounds")
    return _local_search(frame, line, (x0 - lo) / (hi - lo), max_evals)


def _local_search(frame: _Frame, line: GroundLine, u0: np.ndarray, max_evals: int):
    lo, hi = _decision_bounds(frame)
    objective, decode = _proposed_objective(frame, line, lo, hi)
    res = nelder_mead_box(objective, u0, max_evals=max_evals)
    f0 = res.history[0]
    u = res.x if res.value >= f0 else np.clip(u0, 0.0, 1.0)
    x = decode(u)
    return PositionPowerResult(
        x[0:3] + frame.offset,
        x[3:6] + frame.offset,
        float(x[6]),
        float(x[7]),
        max(res.value, f0),
        res.evaluations,
        res.converged,
    )


def start_points(scenario, count: int = N_STARTS) -> np.ndarray:
    """Seeded starting points on the unit cube, ``(count, 8)``.

    Columns: info position (3), jammer position (3), info power, jam power.
    Every method draws from the same stream so their starts coincide.
    """
    rng = np.random.default_rng([int(scenario.seeds.optimizer) & (2**64 - 1), START_STREAM])
    return rng.uniform(size=(count, 8))


# ---------------------------------------------------------------------------
# outer loop


@dataclass
class PlanResult:
    info_pose: Pose
    jam_pose: Pose
    powers: RadioParams
    expected_secrecy: float
    standard_error: float
    line: GroundLine | None
    iterations: int
    trace: list[float] = field(default_factory=list)
    converged: bool = True
    evaluations: int = 0
    method: str = "proposed"


def report_secrecy(plan_or_poses, scenario, *, stream: int = REPORT_STREAM, eaves: str = "estimated",
                   sample_count: int | None = None) -> tuple[float, float]:
    """Clamped expected secrecy of a plan on a fresh batch of the given stream."""
    info_pose, jam_pose, radio = plan_or_poses.info_pose, plan_or_poses.jam_pose, plan_or_poses.powers
    n = scenario.jitter.report_sample_count if sample_count is None else sample_count
    batch = draw_batch(scenario.jitter_model(stream, n))
    return expected_secrecy(info_pose, jam_pose, radio, scenario, batch, clamped=True, eaves=eaves)


def solve(
    scenario,
    *,
    max_outer_iterations: int = 10,
    rel_tol: float = 1e-6,
    n_starts: int = N_STARTS,
    max_evals: int = 4000,
) -> PlanResult:
    """Run the four phases until the surrogate objective stops improving."""
    frame = _Frame(scenario, draw_batch(scenario.jitter_model(TRAIN_STREAM)))
    lo, hi = _decision_bounds(frame)
    line, _ = line_maximin(frame.nodes[1:])

    trace: list[float] = []
    evaluations = 0
    converged = False
    best = None
    iterations = 0
    for it in range(max_outer_iterations):
        iterations = it + 1
        if best is None:
            starts = list(start_points(scenario, n_starts))
        else:
            x = np.concatenate(
                [best.info_position - frame.offset, best.jam_position - frame.offset,
                 [best.power_info, best.power_jam]]
            )
            starts = [(x - lo) / (hi - lo)]
        for u0 in starts:
            r = _local_search(frame, line, u0, max_evals)
            evaluations += r.evaluations
            if best is None or r.objective > best.objective:
                best = r
        trace.append(best.objective)
        if len(trace) > 1 and abs(trace[-1] - trace[-2]) <= rel_tol * abs(trace[-2]):
            converged = True
            break

    info_rel = best.info_position - frame.offset
    jam_rel = best.jam_position - frame.offset
    info_pose = Pose(best.info_position, info_orientation(info_rel, line))
    jam_pose = Pose(best.jam_position, jam_orientation(jam_rel, np.zeros(3)))
    radio = scenario.radio(best.power_info, best.power_jam)
    plan = PlanResult(info_pose, jam_pose, radio, 0.0, 0.0, line, iterations, trace,
                      converged, evaluations, "proposed")
    plan.expected_secrecy, plan.standard_error = report_secrecy(plan, scenario)
    return plan
