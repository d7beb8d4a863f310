"""Wrinkle turn model: fold geometry to turn angle, and its planar projection.

A taped fold of length ``D`` on a tube of flat width ``L`` bends the inflated
tube by ``D / r`` where ``r = L / π`` is the inflated radius. With the tape
ribbons at the quarter points of the circumference the bend is tilted out of
the table plane, so only ``cos(tape_placement)`` of it shows up as a planar
heading change.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .geometry import DomainError

# Values measured on the reference build.
DEFAULT_TUBE_WIDTH_MM = 105.0
DEFAULT_FOLD_LENGTH_MM = 19.0
DEFAULT_TAPE_PLACEMENT = math.pi / 4

# Turn angles as reported for the reference build, which do not follow from
# the formula with the measured L and D (see ``cmd_angle`` output).
REPORTED_TURN_3D_DEG = 30.3
REPORTED_TURN_PLANAR_DEG = 21.44


class Direction(str, Enum):
    LEFT = "L"
    RIGHT = "R"

    @property
    def sign(self) -> int:
        return 1 if self is Direction.LEFT else -1

    @property
    def opposite(self) -> "Direction":
        return Direction.RIGHT if self is Direction.LEFT else Direction.LEFT

    @classmethod
    def from_sign(cls, s: float) -> "Direction":
        return cls.RIGHT if s < 0 else cls.LEFT


@dataclass(frozen=True)
class TubeParams:
    tube_width_L: float = DEFAULT_TUBE_WIDTH_MM
    fold_length_D: float = DEFAULT_FOLD_LENGTH_MM
    tape_placement: float = DEFAULT_TAPE_PLACEMENT

    def __post_init__(self):
        if not (math.isfinite(self.tube_width_L) and self.tube_width_L > 0):
            raise DomainError(f"tube width must be > 0, got {self.tube_width_L!r}")
        if not (0 <= self.fold_length_D < self.tube_width_L):
            raise DomainError(
                f"fold length must satisfy 0 <= D < L={self.tube_width_L}, got {self.fold_length_D!r}"
            )
        if not (0 <= self.tape_placement <= math.pi / 2):
            raise DomainError(f"tape placement must be in [0, pi/2], got {self.tape_placement!r}")

    @property
    def inflated_radius(self) -> float:
        return self.tube_width_L / math.pi


@dataclass(frozen=True)
class TurnCapability:
    theta_3d: float
    theta_planar: float
    direction_set: frozenset = frozenset({Direction.LEFT, Direction.RIGHT})


def turn_angle_3d(p: TubeParams) -> float:
    """Bend angle of one wrinkle, ``D·π / L`` radians."""
    return p.fold_length_D * math.pi / p.tube_width_L


def planar_projection(theta_3d: float, tape_placement: float) -> float:
    if not (math.isfinite(theta_3d) and math.isfinite(tape_placement)):
        raise DomainError("projection inputs must be finite")
    return theta_3d * math.cos(tape_placement)


def capability(p: TubeParams) -> TurnCapability:
    theta = turn_angle_3d(p)
    return TurnCapability(theta, planar_projection(theta, p.tape_placement))


def feed_shift(p: TubeParams, compensated: bool) -> float:
    """Angular misalignment of the supply material caused by one wrinkle.

    A one-sided fold drags the flat feed sideways by the full wrinkle angle;
    pre-taping the opposite side keeps the fold rectangular and the feed
    aligned.
    """
    if compensated:
        return 0.0
    return turn_angle_3d(p)


def required_fold_length(L: float, theta_planar_target: float, tape_placement: float) -> float:
    """Fold length that yields ``theta_planar_target`` on the table."""
    if not theta_planar_target > 0:
        raise DomainError(f"target angle must be > 0, got {theta_planar_target!r}")
    if not (0 <= tape_placement < math.pi / 2):
        raise DomainError(f"tape placement must be in [0, pi/2), got {tape_placement!r}")
    if not L > 0:
        raise DomainError(f"tube width must be > 0, got {L!r}")
    D = theta_planar_target * L / (math.pi * math.cos(tape_placement))
    if D >= L:
        raise DomainError(
            f"target {math.degrees(theta_planar_target):.2f} deg needs D={D:.2f} mm >= L={L} mm"
        )
    return D
