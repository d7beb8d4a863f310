"""Fixed-angle path planning.

The robot can only grow straight and turn in place by a fixed ``increment``,
left or right. A path between two poses is built from a single vertex: turn
in place at the start, grow to a vertex ``P``, make one fixed turn, grow to
the goal, then turn in place to the goal heading. Vertices are found by
casting fans of rays from the start (forward) and from the goal (backward)
and keeping intersections whose heading change is one increment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, List, NamedTuple, Optional, Sequence, Union

from .geometry import (
    EPS_PARAM,
    TAU,
    DomainError,
    Pose,
    Ray,
    angle_distance,
    distance,
    normalize_angle,
    normalize_signed,
    ray_intersection,
    vertex_turn_angle,
)
from .wrinkle import Direction

DEFAULT_TOLERANCE = math.radians(0.5)
DEFAULT_MIN_SEGMENT = 20.0

# slack for "exact" integer ratios of angles
_RATIO_SLACK = 1e-9
# heading closure around the vertex must be exact to this many radians
_CLOSURE_TOL = 1e-9


class NoPathFound(Exception):
    """No start/goal ray pair yields a valid single-vertex path."""


class CorrectionTooTight(ValueError):
    """A lateral correction would need a segment shorter than allowed."""


@dataclass(frozen=True)
class Grow:
    length: float

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length > 0):
            raise DomainError(f"grow length must be > 0, got {self.length!r}")


@dataclass(frozen=True)
class Turn:
    direction: Direction


Primitive = Union[Grow, Turn]


@dataclass(frozen=True, eq=False)
class Plan:
    primitives: tuple
    increment: float
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "primitives", tuple(self.primitives))
        if not (math.isfinite(self.increment) and self.increment > 0):
            raise DomainError(f"plan increment must be > 0, got {self.increment!r}")
        prev = None
        for k, prim in enumerate(self.primitives):
            if not isinstance(prim, (Grow, Turn)):
                raise DomainError(f"primitive {k} is not a Grow or Turn: {prim!r}")
            if isinstance(prim, Grow) and isinstance(prev, Grow):
                raise DomainError(f"primitives {k - 1} and {k} are consecutive grows")
            prev = prim

    def __eq__(self, other):
        if not isinstance(other, Plan):
            return NotImplemented
        return (
            self.primitives == other.primitives
            and math.isclose(self.increment, other.increment, rel_tol=1e-12, abs_tol=0.0)
            and self.meta == other.meta
        )

    __hash__ = None

    def __len__(self):
        return len(self.primitives)

    @classmethod
    def build(cls, parts: Iterable[Primitive], increment: float, meta: Optional[dict] = None) -> "Plan":
        """Make a plan from loose parts, merging adjacent grows."""
        merged: List[Primitive] = []
        for prim in parts:
            if isinstance(prim, Grow) and merged and isinstance(merged[-1], Grow):
                merged[-1] = Grow(merged[-1].length + prim.length)
            else:
                merged.append(prim)
        return cls(tuple(merged), increment, dict(meta or {}))

    @property
    def total_length(self) -> float:
        return math.fsum(p.length for p in self.primitives if isinstance(p, Grow))

    @property
    def turn_count(self) -> int:
        return sum(1 for p in self.primitives if isinstance(p, Turn))

    @property
    def net_turns(self) -> int:
        return sum(p.direction.sign for p in self.primitives if isinstance(p, Turn))


@dataclass(frozen=True)
class PlanQuery:
    start: Pose
    goal: Pose
    increment: float
    tolerance: float = DEFAULT_TOLERANCE
    min_segment: float = DEFAULT_MIN_SEGMENT

    def __post_init__(self):
        if not (0 < self.increment < math.pi):
            raise DomainError(f"increment must be in (0, pi), got {self.increment!r}")
        if not (0 < self.tolerance < self.increment / 2):
            raise DomainError(
                f"tolerance must be in (0, increment/2), got {math.degrees(self.tolerance):.4f} deg"
            )
        if not self.min_segment >= 0:
            raise DomainError(f"min_segment must be >= 0, got {self.min_segment!r}")


class HeadingSplit(NamedTuple):
    count: int
    direction: Direction
    residual: float


def decompose_heading(delta: float, increment: float) -> HeadingSplit:
    """Split a heading change into whole turns, over-rotating when it does not divide."""
    if not increment > 0:
        raise DomainError(f"increment must be > 0, got {increment!r}")
    mag = abs(delta)
    count = max(0, math.ceil(mag / increment - _RATIO_SLACK))
    residual = max(0.0, count * increment - mag)
    return HeadingSplit(count, Direction.from_sign(delta), residual)


def fan_size(increment: float) -> int:
    return int(math.floor(TAU / increment + _RATIO_SLACK))


def _divides_circle(increment: float) -> bool:
    n = fan_size(increment)
    return abs(n * increment - TAU) <= _RATIO_SLACK


def cast_rays(p: Pose, increment: float, reverse: bool = False, signed: bool = False) -> List[Ray]:
    """Fan of rays from ``p`` at multiples of ``increment`` off its heading.

    With ``signed`` the fan covers turn counts ``-(n-1) .. n-1`` instead of
    ``0 .. n-1``, so that right-hand directions are on the turn lattice even
    when the increment does not divide a full circle.
    """
    if not increment > 0:
        raise DomainError(f"increment must be > 0, got {increment!r}")
    base = p.heading + (math.pi if reverse else 0.0)
    return [Ray(p.position, base + k * increment) for k in _fan_indices(increment, signed)]


def _fan_indices(increment: float, signed: bool) -> range:
    n = fan_size(increment)
    return range(-(n - 1), n) if signed else range(n)


def _turns(count: int) -> List[Turn]:
    d = Direction.from_sign(count)
    return [Turn(d)] * abs(count)


def _shortest_count(t: int, increment: float) -> int:
    """Equivalent turn count with the least magnitude, when turns wrap the circle."""
    if not _divides_circle(increment):
        return t
    n = fan_size(increment)
    t %= n
    if t > n // 2:
        t -= n
    return t


def snap_heading(start_heading: float, goal_heading: float, increment: float) -> int:
    """Turn count from ``start_heading`` that best matches ``goal_heading``.

    Exact matches win; among equally good counts the smallest magnitude wins.
    """
    n = fan_size(increment)
    best = None
    for m in range(-n, n + 1):
        err = angle_distance(start_heading + m * increment, goal_heading)
        key = (0.0 if err <= _CLOSURE_TOL else err, abs(m), m)
        if best is None or key < best[0]:
            best = (key, m)
    return best[1]


class _Candidate(NamedTuple):
    length: float
    turns: int
    start_index: int
    parts: list
    vertex: Optional[tuple]


def _better(a: _Candidate, b: Optional[_Candidate]) -> bool:
    if b is None:
        return True
    if a.length < b.length - 1e-9:
        return True
    if a.length > b.length + 1e-9:
        return False
    return (a.turns, abs(a.start_index), a.start_index) < (b.turns, abs(b.start_index), b.start_index)


def plan_dubins(q: PlanQuery, path_type: Optional[str] = None, straight_shortcut: bool = True) -> Plan:
    """Shortest single-vertex fixed-angle path from ``q.start`` to ``q.goal``.

    ``path_type`` is carried into the plan metadata and otherwise unused.
    With ``straight_shortcut`` a goal lying exactly on one of the start rays is
    reached without a vertex: turn in place, grow, turn at the goal. Such goals
    sit on the boundary of every vertex candidate, which would need a
    zero-length leg. Without the shortcut only true vertices are accepted.

    Raises ``NoPathFound`` when no candidate satisfies the angle guard and
    the minimum segment length.
    """
    S, G = q.start, q.goal
    if distance(S.position, G.position) <= EPS_PARAM:
        raise DomainError("start and goal positions coincide")
    inc = q.increment
    m = snap_heading(S.heading, G.heading, inc)
    goal_heading = normalize_angle(S.heading + m * inc)
    residual = normalize_signed(G.heading - goal_heading)
    min_seg = max(q.min_segment, EPS_PARAM)

    indices = list(_fan_indices(inc, signed=True))
    start_rays = [Ray(S.position, S.heading + i * inc) for i in indices]
    goal_rays = [Ray(G.position, goal_heading + j * inc + math.pi) for j in indices]

    best: Optional[_Candidate] = None
    examined = 0

    if straight_shortcut:
        dx, dy = G.x - S.x, G.y - S.y
        span = math.hypot(dx, dy)
        for i, ray in zip(indices, start_rays):
            ux, uy = ray.unit()
            along = dx * ux + dy * uy
            if along < min_seg or abs(ux * dy - uy * dx) > 1e-9 * max(1.0, span):
                continue
            t = _shortest_count(m - i, inc)
            cand = _Candidate(along, abs(i) + abs(t), i, _turns(i) + [Grow(along)] + _turns(t), None)
            if _better(cand, best):
                best = cand

    for i, s_ray in zip(indices, start_rays):
        for j, g_ray in zip(indices, goal_rays):
            P = ray_intersection(s_ray, g_ray)
            if P is None:
                continue
            examined += 1
            angle = vertex_turn_angle(s_ray, g_ray.reversed())
            if abs(abs(angle) - inc) >= q.tolerance:
                continue
            sigma = 1 if angle > 0 else -1
            # a near-miss of the guard must not leak heading error into the plan
            if angle_distance(S.heading + (i + sigma) * inc, goal_heading + j * inc) > _CLOSURE_TOL:
                continue
            s1 = distance(S.position, P)
            s2 = distance(P, G.position)
            if s1 < min_seg or s2 < min_seg:
                continue
            parts = _turns(i) + [Grow(s1), Turn(Direction.from_sign(sigma)), Grow(s2)] + _turns(-j)
            cand = _Candidate(s1 + s2, abs(i) + 1 + abs(j), i, parts, P)
            if _better(cand, best):
                best = cand

    if best is None:
        raise NoPathFound("no valid path found")

    meta = {
        "path_type": path_type,
        "heading_residual_deg": math.degrees(residual),
        "start_turns": best.start_index,
        "vertex": list(best.vertex) if best.vertex is not None else None,
        "pairs_examined": examined,
    }
    return Plan.build(best.parts, inc, meta)


def plan_heading_only(start_heading: float, goal_heading: float, increment: float) -> Plan:
    """Pure rotation plan; over-rotates by ``meta['residual_deg']`` when needed."""
    split = decompose_heading(normalize_signed(goal_heading - start_heading), increment)
    return Plan(
        tuple([Turn(split.direction)] * split.count),
        increment,
        {"residual_deg": math.degrees(split.residual)},
    )


def dogleg_correction(lateral_offset: float, increment: float, min_segment: float = 0.0) -> Plan:
    """Turn, grow, counter-turn: shifts the path sideways by ``lateral_offset``.

    Positive offsets move to the left of the current heading. The heading is
    restored exactly; the maneuver also advances ``meta['along_track_mm']``
    along the original heading.
    """
    if not (0 < increment <= math.pi / 2):
        raise DomainError(f"increment must be in (0, pi/2], got {increment!r}")
    if not math.isfinite(lateral_offset):
        raise DomainError(f"lateral offset must be finite, got {lateral_offset!r}")
    if lateral_offset == 0:
        return Plan((), increment, {"along_track_mm": 0.0})
    s = abs(lateral_offset) / math.sin(increment)
    if s < min_segment:
        raise CorrectionTooTight(
            f"offset {lateral_offset} mm needs a {s:.2f} mm segment, below minimum {min_segment} mm"
        )
    d = Direction.from_sign(lateral_offset)
    return Plan((Turn(d), Grow(s), Turn(d.opposite)), increment, {"along_track_mm": s * math.cos(increment)})


def discretize_arc(radius: float, sweep: float, increment: float) -> Plan:
    """Approximate a circular arc by fixed turns joined by straight segments.

    The polygon is tangent to the arc: half-length entry and exit segments
    along the start and end tangents, full-length segments between turns.
    When ``|sweep|`` is a multiple of ``increment`` it starts and ends exactly
    on the arc's endpoints with the arc's end heading; otherwise it follows
    the over-rotated arc and reports the extra sweep in ``meta``.
    """
    if not radius > 0:
        raise DomainError(f"radius must be > 0, got {radius!r}")
    if sweep == 0 or not math.isfinite(sweep):
        raise DomainError(f"sweep must be finite and non-zero, got {sweep!r}")
    if not (0 < increment < math.pi):
        raise DomainError(f"increment must be in (0, pi), got {increment!r}")
    split = decompose_heading(sweep, increment)
    half = radius * math.tan(increment / 2)
    turn = Turn(split.direction)
    parts: List[Primitive] = [Grow(half)]
    for k in range(split.count):
        parts.append(turn)
        parts.append(Grow(half if k == split.count - 1 else 2 * half))
    return Plan(tuple(parts), increment, {"residual_deg": math.degrees(split.residual)})


def plan_from_sequence(spec: Sequence, increment: float) -> Plan:
    """Build a plan from shorthand items: numbers grow, ``"L"``/``"R"`` turn."""
    parts: List[Primitive] = []
    for item in spec:
        if isinstance(item, str):
            parts.append(Turn(Direction(item)))
        else:
            parts.append(Grow(float(item)))
    return Plan.build(parts, increment)
