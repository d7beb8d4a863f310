"""Planning and simulation for vine robots steered by fixed-angle wrinkle turns."""

from .geometry import DomainError, Pose, Ray, advance, normalize_angle, ray_intersection, rotate_in_place, vertex_turn_angle
from .planner import (
    CorrectionTooTight,
    Grow,
    NoPathFound,
    Plan,
    PlanQuery,
    Turn,
    cast_rays,
    decompose_heading,
    discretize_arc,
    dogleg_correction,
    plan_dubins,
    plan_heading_only,
)
from .sim import ErrorModel, SimTrace, execute, execute_noisy, monte_carlo
from .wrinkle import Direction, TubeParams, feed_shift, planar_projection, required_fold_length, turn_angle_3d

__version__ = "0.1.0"
