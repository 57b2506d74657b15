"""Pose and power planning for an information drone and a friendly jammer."""

from .baselines import solve_conventional, solve_joint_12d
from .channel import RadioParams, SinrVector, secrecy_rate, sinr_at_node, utility_unclamped
from .errors import DegenerateGeometryError, InvalidArgumentError, ScenarioError, SolverError
from .geometry import (
    EulerAngles,
    GroundLine,
    Pose,
    angles_from_axis,
    antenna_gain,
    canonicalize_axis,
    elevation_cosine,
    orientation_vector,
    plane_normal_from_ground_line,
)
from .jitter import JitterBatch, JitterModel, draw_batch, expected_secrecy
from .planner import (
    PlanResult,
    info_orientation,
    jam_orientation,
    line_maximin,
    optimize_positions_powers,
    solve,
)
from .scenario import Scenario, generate_random_scenario, load_scenario, save_record

__version__ = "0.1.0"
