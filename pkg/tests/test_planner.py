import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jamplan.errors import DegenerateGeometryError, InvalidArgumentError
from jamplan.geometry import GroundLine, antenna_gain, elevation_cosine, orientation_vector
from jamplan.jitter import JitterModel, draw_batch, zero_batch
from jamplan.planner import (
    _Frame,
    info_orientation,
    jam_orientation,
    line_maximin,
    optimize_positions_powers,
    solve,
)
from jamplan.scenario import generate_random_scenario

from conftest import make_scenario

ORIGIN = np.zeros(3)


def grid_oracle(pts, n=1_000_000):
    nu = np.linspace(-math.pi / 2, math.pi / 2, n)
    best = np.full(n, np.inf)
    for x, y in pts:
        best = np.minimum(best, (-np.sin(nu) * x + np.cos(nu) * y) ** 2)
    k = int(np.argmax(best))
    return nu[k], best[k]


# -- phase 1 -----------------------------------------------------------------


def test_single_eavesdropper_gives_perpendicular_line():
    line, value = line_maximin([[10.0, 0.0, 0.0]])
    assert abs(abs(line.nu) - math.pi / 2) < 1e-9
    assert value == pytest.approx(100.0, rel=1e-12)


def test_symmetric_pair_gives_perpendicular_line():
    line, value = line_maximin([[10.0, 0.0, 0.0], [-10.0, 0.0, 0.0]])
    assert abs(abs(line.nu) - math.pi / 2) < 1e-9
    assert value == pytest.approx(100.0, rel=1e-12)


def test_tied_optima_pick_smallest_angle():
    line, value = line_maximin([[10.0, 0.0, 0.0], [0.0, 10.0, 0.0]])
    assert value == pytest.approx(50.0, rel=1e-12)
    assert line.nu == pytest.approx(-math.pi / 4, abs=1e-9)
    # the dense grid sees both optima
    nu = np.array([-math.pi / 4, math.pi / 4])
    h = np.minimum((-np.sin(nu) * 10) ** 2, (np.cos(nu) * 10) ** 2)
    np.testing.assert_allclose(h, 50.0)


def test_eavesdropper_on_user_gives_zero():
    line, value = line_maximin([[0.0, 0.0, 0.0], [30.0, 40.0, 0.0]])
    assert value == 0.0 and line.nu == 0.0


def test_matches_dense_grid():
    rng = np.random.default_rng(12)
    for n in range(1, 8):
        pts = rng.uniform(-500, 500, (n, 2))
        _, oracle = grid_oracle(pts)
        _, value = line_maximin(np.c_[pts, np.zeros(n)])
        assert value >= oracle * (1 - 1e-3)
        assert value <= oracle * (1 + 1e-3)


@given(st.lists(st.tuples(st.floats(-500, 500), st.floats(-500, 500)), min_size=1, max_size=6))
@settings(max_examples=50, deadline=None)
def test_value_is_the_minimum_distance_of_the_returned_line(pts):
    pts = np.array(pts)
    line, value = line_maximin(np.c_[pts, np.zeros(len(pts))])
    assert -math.pi / 2 <= line.nu <= math.pi / 2
    d = line.distance(np.c_[pts, np.zeros(len(pts))])
    assert value == pytest.approx(float(np.min(d) ** 2), rel=1e-9, abs=1e-9)


def test_line_maximin_rejects_empty():
    with pytest.raises(InvalidArgumentError):
        line_maximin(np.zeros((0, 3)))


# -- phase 2 -----------------------------------------------------------------


def test_info_orientation_example():
    p = np.array([0.0, -50.0, 100.0])
    eta = info_orientation(p, GroundLine(0.0))
    axis = orientation_vector(eta)
    assert abs(axis @ [1.0, 0.0, 0.0]) < 1e-12
    assert abs(axis @ (ORIGIN - p)) < 1e-9
    assert antenna_gain(elevation_cosine(p, eta, ORIGIN)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("nu", [-1.2, 0.0, 0.4, math.pi / 2])
def test_info_orientation_above_user_is_horizontal(nu):
    p = np.array([0.0, 0.0, 150.0])
    line = GroundLine(nu)
    axis = orientation_vector(info_orientation(p, line))
    assert abs(axis[2]) < 1e-12
    assert abs(axis @ line.direction) < 1e-12


def test_info_orientation_on_ground_is_an_error():
    with pytest.raises(DegenerateGeometryError):
        info_orientation([5.0, 0.0, 0.0], GroundLine(0.0))


@given(st.floats(-500, 500), st.floats(-500, 500), st.floats(80, 300), st.floats(-1.5707, 1.5707))
@settings(max_examples=200)
def test_info_orientation_gives_full_gain_toward_user(x, y, z, nu):
    p = np.array([x, y, z])
    eta = info_orientation(p, GroundLine(nu))
    assert eta.yaw == 0.0
    assert antenna_gain(elevation_cosine(p, eta, ORIGIN)) == pytest.approx(1.0, abs=1e-9)


def test_jam_orientation_examples():
    assert tuple(jam_orientation([0, 0, 100], ORIGIN)) == (0.0, 0.0, 0.0)
    eta = jam_orientation([100, 0, 100], ORIGIN)
    assert eta.roll == pytest.approx(0.0, abs=1e-15)
    assert eta.pitch == pytest.approx(math.pi / 4, abs=1e-15)
    np.testing.assert_allclose(orientation_vector(eta), np.array([1, 0, 1]) / math.sqrt(2), atol=1e-15)


def test_jam_orientation_on_user_is_an_error():
    with pytest.raises(DegenerateGeometryError):
        jam_orientation([3, 4, 0], [3, 4, 0])


@given(st.floats(-500, 500), st.floats(-500, 500), st.floats(80, 300))
@settings(max_examples=200)
def test_jammer_null_on_user(x, y, z):
    p = np.array([x, y, z])
    assert antenna_gain(elevation_cosine(p, jam_orientation(p, ORIGIN), ORIGIN)) <= 1e-12


# -- phases 3 and 4 ------------------------------------------------------------


@pytest.fixture(scope="module")
def far_single():
    return make_scenario(eaves=((450.0, 420.0, 0.0),), power_cap=1.0)


@pytest.fixture(scope="module")
def far_plan(far_single):
    return solve(far_single)


def _assert_feasible(plan, s):
    lo, hi = s.position_bounds()
    for p in (plan.info_pose.position, plan.jam_pose.position):
        assert np.all(p >= lo) and np.all(p <= hi)
    assert 0 <= plan.powers.power_info <= s.power_cap
    assert 0 <= plan.powers.power_jam <= s.power_cap


def test_far_eavesdropper_uses_full_info_power(far_single, far_plan):
    _assert_feasible(far_plan, far_single)
    assert far_plan.expected_secrecy > 0
    assert far_plan.powers.power_info == pytest.approx(far_single.power_cap, rel=1e-4)


def test_info_power_sweep_is_monotone_at_the_solution(far_single, far_plan):
    frame = _Frame(far_single, zero_batch())
    p_i, p_j = far_plan.info_pose.position, far_plan.jam_pose.position
    vals = [
        frame.mean(p_i, far_plan.info_pose.orientation, p_j, far_plan.jam_pose.orientation,
                   pw, far_plan.powers.power_jam, clamped=False)
        for pw in np.linspace(0.05, 1.0, 40)
    ]
    assert np.all(np.diff(vals) >= -1e-6)


def test_jam_power_derivative_is_nonnegative(far_single, far_plan):
    frame = _Frame(far_single, zero_batch())
    args = (far_plan.info_pose.position, far_plan.info_pose.orientation,
            far_plan.jam_pose.position, far_plan.jam_pose.orientation, far_plan.powers.power_info)
    h = 1e-4
    pj = min(far_plan.powers.power_jam, 1.0 - h)
    up = frame.mean(*args, pj + h, clamped=False)
    down = frame.mean(*args, pj - h, clamped=False)
    assert up - down >= -1e-9
    # the eavesdropper sees part of the jamming, so the optimizer maxes P_J
    eave = far_single.eaves_estimated[0]
    jam_gain = antenna_gain(elevation_cosine(far_plan.jam_pose.position, far_plan.jam_pose.orientation, eave))
    assert jam_gain > 0
    assert far_plan.powers.power_jam == pytest.approx(1.0, rel=1e-3)


def test_local_search_never_worsens_start(two_eaves):
    line, _ = line_maximin(two_eaves.eaves_estimated)
    batch = draw_batch(two_eaves.jitter_model(0))
    start = (([100.0, -50.0, 150.0], [-20.0, 30.0, 200.0]), (0.5, 0.5))
    res = optimize_positions_powers(two_eaves, line, batch, start, max_evals=300)
    frame = _Frame(two_eaves, batch)
    p_i, p_j = np.array(start[0][0]), np.array(start[0][1])
    f0 = frame.mean(p_i, info_orientation(p_i, line), p_j, jam_orientation(p_j, ORIGIN), 0.5, 0.5,
                    clamped=False)
    assert res.objective >= f0


def test_infeasible_start_rejected(two_eaves):
    line, _ = line_maximin(two_eaves.eaves_estimated)
    with pytest.raises(InvalidArgumentError):
        optimize_positions_powers(two_eaves, line, zero_batch(),
                                  (([0, 0, 10.0], [0, 0, 100.0]), (0.5, 0.5)))


def test_solve_is_deterministic_and_feasible(two_eaves):
    a, b = solve(two_eaves), solve(two_eaves)
    _assert_feasible(a, two_eaves)
    assert a.expected_secrecy == b.expected_secrecy
    assert a.info_pose == b.info_pose and a.jam_pose == b.jam_pose
    assert a.trace == b.trace
    assert all(y >= x for x, y in zip(a.trace, a.trace[1:]))
    assert a.converged


def test_solve_orientations_follow_the_rules(two_eaves):
    plan = solve(two_eaves)
    u = two_eaves.user_position
    g_user = antenna_gain(elevation_cosine(plan.info_pose.position, plan.info_pose.orientation, u))
    g_null = antenna_gain(elevation_cosine(plan.jam_pose.position, plan.jam_pose.orientation, u))
    assert g_user == pytest.approx(1.0, abs=1e-9)
    assert g_null <= 1e-12


def test_solve_is_translation_covariant(two_eaves):
    shift = np.array([120.0, -75.0, 0.0])
    a = solve(two_eaves)
    b = solve(two_eaves.translated(shift))
    assert b.expected_secrecy == pytest.approx(a.expected_secrecy, rel=1e-6)
    np.testing.assert_allclose(b.info_pose.position - shift, a.info_pose.position, atol=1e-3)


def test_colocated_eavesdropper_gives_no_secrecy():
    s = make_scenario(eaves=((0.0, 0.0, 0.0), (200.0, 100.0, 0.0)))
    plan = solve(s, n_starts=2)
    assert plan.expected_secrecy == pytest.approx(0.0, abs=1e-3)


def test_jittered_solve_reports_standard_error():
    s = generate_random_scenario(2, 4, jitter_std=0.05, sample_count=128, report_sample_count=1024)
    plan = solve(s, n_starts=2, max_evals=800)
    assert plan.standard_error > 0
    assert plan.expected_secrecy > 0
