"""Planar SE(2) geometry: poses, rays and ray-ray intersection.

All angles are radians, counterclockwise from +x. Everything here is a pure
function over immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

TAU = 2.0 * math.pi

# Ray parameters below this count as "at the origin" and are rejected.
EPS_PARAM = 1e-9
# |sin(angle between rays)| below this means parallel or anti-parallel.
EPS_PARALLEL = 1e-12

Point = Tuple[float, float]


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


def normalize_angle(a: float) -> float:
    """Wrap ``a`` into ``[0, 2π)``."""
    if not math.isfinite(a):
        raise DomainError(f"angle must be finite, got {a!r}")
    r = a % TAU
    # a tiny negative input can round up to exactly 2π
    if r >= TAU:
        r = 0.0
    return r


def normalize_signed(a: float) -> float:
    """Wrap ``a`` into ``(-π, π]``."""
    r = normalize_angle(a)
    if r > math.pi:
        r -= TAU
    return r


def angle_distance(a: float, b: float) -> float:
    """Unsigned angular distance between two headings, in ``[0, π]``."""
    return abs(normalize_signed(a - b))


@dataclass(frozen=True)
class Pose:
    """Robot tip state: position in mm and heading in radians."""

    x: float
    y: float
    heading: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError(f"pose position must be finite, got ({self.x}, {self.y})")
        object.__setattr__(self, "heading", normalize_angle(self.heading))

    @property
    def position(self) -> Point:
        return (self.x, self.y)

    @classmethod
    def from_degrees(cls, x: float, y: float, heading_deg: float) -> "Pose":
        return cls(x, y, math.radians(heading_deg))


@dataclass(frozen=True)
class Ray:
    origin: Point
    direction: float

    def __post_init__(self):
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))
        object.__setattr__(self, "direction", normalize_angle(self.direction))

    def unit(self) -> Point:
        return (math.cos(self.direction), math.sin(self.direction))

    def reversed(self) -> "Ray":
        return Ray(self.origin, self.direction + math.pi)

    def point_at(self, t: float) -> Point:
        ux, uy = self.unit()
        return (self.origin[0] + t * ux, self.origin[1] + t * uy)


def advance(p: Pose, distance: float) -> Pose:
    """Grow straight ahead by ``distance`` mm."""
    if not distance >= 0.0:
        raise DomainError(f"growth distance must be >= 0, got {distance!r}")
    return Pose(
        p.x + distance * math.cos(p.heading),
        p.y + distance * math.sin(p.heading),
        p.heading,
    )


def rotate_in_place(p: Pose, delta: float) -> Pose:
    return Pose(p.x, p.y, p.heading + delta)


def distance(a: Point, b: Point) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


def _cross(ax: float, ay: float, bx: float, by: float) -> float:
    return ax * by - ay * bx


def ray_intersection(a: Ray, b: Ray) -> Optional[Point]:
    """Point strictly ahead of both ray origins, or ``None``.

    Parallel and anti-parallel rays never intersect, even when collinear.
    Intersections with a ray parameter below ``EPS_PARAM`` are rejected.
    """
    # canonical order makes the result bit-identical under argument swap
    if (b.origin, b.direction) < (a.origin, a.direction):
        a, b = b, a
    ux, uy = a.unit()
    vx, vy = b.unit()
    denom = _cross(ux, uy, vx, vy)
    if abs(denom) < EPS_PARALLEL:
        return None
    wx = b.origin[0] - a.origin[0]
    wy = b.origin[1] - a.origin[1]
    t = _cross(wx, wy, vx, vy) / denom
    s = _cross(wx, wy, ux, uy) / denom
    if t < EPS_PARAM or s < EPS_PARAM:
        return None
    return (a.origin[0] + t * ux, a.origin[1] + t * uy)


def vertex_turn_angle(incoming: Ray, outgoing: Ray) -> float:
    """Signed heading change at a vertex, in ``(-π, π]``; positive is a left turn.

    Equivalent to checking the interior angle against ``π - increment``.
    """
    return normalize_signed(outgoing.direction - incoming.direction)
