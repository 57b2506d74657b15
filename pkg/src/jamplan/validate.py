"""
Built-in self checks run by ``jamplan validate``.

Each check recomputes a known identity through an independent route and
returns ``(ok, detail)``. Functions are looked up through their modules at
call time, so a patched implementation is what gets checked.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import channel, geometry, jitter, planner

Check = Callable[[np.random.Generator], tuple[bool, str]]


def _unit_vectors(rng, n, canonical=False):
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    if canonical:
        v[:, 2] = np.abs(v[:, 2])
    return v


def check_orientation_norm(rng):
    worst = 0.0
    for eta in rng.uniform(-math.pi, math.pi, size=(500, 3)):
        worst = max(worst, abs(np.linalg.norm(geometry.orientation_vector(eta)) - 1.0))
    return worst <= 1e-12, f"max |norm - 1| = {worst:.2e}"


def check_antenna_gain(rng):
    gammas = rng.uniform(0.0, math.pi, size=500)
    worst = max(abs(geometry.antenna_gain(math.cos(g)) - math.sin(g) ** 2) for g in gammas)
    fixed = (
        geometry.antenna_gain(1.0) == 0.0
        and geometry.antenna_gain(0.0) == 1.0
        and abs(geometry.antenna_gain(math.cos(math.pi / 4)) - 0.5) <= 1e-15
    )
    return fixed and worst <= 1e-12, f"max |G(cos g) - sin^2 g| = {worst:.2e}"


def check_gain_sign_invariance(rng):
    worst = 0.0
    for v, d in zip(_unit_vectors(rng, 300), _unit_vectors(rng, 300)):
        c = float(v @ d)
        worst = max(worst, abs(geometry.antenna_gain(c) - geometry.antenna_gain(-c)))
    return worst == 0.0, f"max asymmetry = {worst:.2e}"


def check_round_trip(rng):
    v = _unit_vectors(rng, 1000, canonical=True)
    v = v[np.abs(v[:, 1]) < 1 - 1e-6]
    worst = max(
        float(np.max(np.abs(geometry.orientation_vector(geometry.angles_from_axis(a)) - a)))
        for a in v
    )
    return worst <= 1e-9, f"max component error = {worst:.2e}"


def check_plane_normal(rng):
    worst = 0.0
    for _ in range(200):
        line = geometry.GroundLine(rng.uniform(-math.pi / 2, math.pi / 2))
        p = np.array([*rng.uniform(-500, 500, 2), rng.uniform(80, 300)])
        n = geometry.plane_normal_from_ground_line(p, line)
        for t in (-300.0, 0.0, 7.0, 450.0):
            worst = max(worst, abs(float(n @ geometry.unit(line.point(t) - p))))
    return worst <= 1e-9, f"max |n . (l - p)| = {worst:.2e}"


def check_info_gain(rng):
    worst = 0.0
    for _ in range(200):
        line, _ = planner.line_maximin(np.c_[rng.uniform(-500, 500, (3, 2)), np.zeros(3)])
        p = np.array([*rng.uniform(-500, 500, 2), rng.uniform(80, 300)])
        eta = planner.info_orientation(p, line)
        g = geometry.antenna_gain(geometry.elevation_cosine(p, eta, np.zeros(3)))
        worst = max(worst, abs(g - 1.0))
    return worst <= 1e-9, f"max |gain - 1| toward user = {worst:.2e}"


def check_jammer_null(rng):
    worst = 0.0
    for _ in range(200):
        p = np.array([*rng.uniform(-500, 500, 2), rng.uniform(80, 300)])
        eta = planner.jam_orientation(p, np.zeros(3))
        worst = max(worst, geometry.antenna_gain(geometry.elevation_cosine(p, eta, np.zeros(3))))
    return worst <= 1e-12, f"max jam gain toward user = {worst:.2e}"


def check_line_maximin(rng):
    grid = np.linspace(-math.pi / 2, math.pi / 2, 200_001)
    w = np.stack([-np.sin(grid), np.cos(grid)], axis=1)
    worst = 0.0
    for n in range(1, 6):
        pts = rng.uniform(-500, 500, size=(n, 2))
        oracle = float(np.max(np.min((w @ pts.T) ** 2, axis=1)))
        _, value = planner.line_maximin(np.c_[pts, np.zeros(n)])
        worst = max(worst, abs(value - oracle) / oracle)
    return worst <= 1e-3, f"max relative gap to grid = {worst:.2e}"


def check_secrecy_clamp(rng):
    ok = True
    for _ in range(200):
        s = channel.SinrVector(rng.exponential(10.0), tuple(rng.exponential(10.0, size=3)))
        r, u = channel.secrecy_rate(s, 1e6), channel.utility_unclamped(s, 1e6)
        ok &= r == max(0.0, u) and r >= 0.0
    return bool(ok), "secrecy_rate == max(0, utility) on 200 draws"


def check_zero_jitter(rng):
    from .scenario import generate_random_scenario

    s = generate_random_scenario(2, int(rng.integers(1 << 31)))
    info = geometry.Pose([30.0, -20.0, 100.0], (0.2, 1.1, 0.0))
    jam = geometry.Pose([-200.0, 150.0, 90.0], planner.jam_orientation([-200.0, 150.0, 90.0], np.zeros(3)))
    radio = s.radio(0.5, 0.7)
    batch = jitter.draw_batch(jitter.JitterModel(0.0, 0.0, 256, 1))
    mean, se = jitter.expected_secrecy(info, jam, radio, s, batch)
    exact, _ = jitter.expected_secrecy(info, jam, radio, s, jitter.zero_batch())
    scalar = channel.secrecy_rate(
        channel.sinr_vector(info, info.orientation, jam, jam.orientation, s.node_positions(), radio),
        s.bandwidth,
    )
    ok = mean == exact == scalar and se == 0.0
    return ok, f"mean={mean:.6e} point={exact:.6e} scalar={scalar:.6e}"


CHECKS: dict[str, Check] = {
    "orientation_vector_unit_norm": check_orientation_norm,
    "antenna_gain": check_antenna_gain,
    "gain_sign_invariance": check_gain_sign_invariance,
    "angles_round_trip": check_round_trip,
    "plane_normal_orthogonality": check_plane_normal,
    "info_gain_toward_user": check_info_gain,
    "jammer_null": check_jammer_null,
    "line_maximin_oracle": check_line_maximin,
    "secrecy_clamp": check_secrecy_clamp,
    "zero_jitter_degeneracy": check_zero_jitter,
}


def run_checks(seed: int = 20240) -> list[tuple[str, bool, str]]:
    results = []
    for name, fn in CHECKS.items():
        rng = np.random.default_rng([seed, len(results)])
        try:
            ok, detail = fn(rng)
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
