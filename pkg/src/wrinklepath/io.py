"""File formats: JSON plans, CSV traces, SVG renders and key = value configs.

Angles are degrees in every file and radians everywhere else.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .geometry import DomainError, Pose
from .planner import DEFAULT_MIN_SEGMENT, DEFAULT_TOLERANCE, Grow, Plan, Turn
from .sim import ErrorModel, Failed, Grew, SimTrace, Turned
from .wrinkle import (
    REPORTED_TURN_PLANAR_DEG,
    Direction,
    TubeParams,
    capability,
)


class InputError(ValueError):
    """Malformed user input: plan file, config file or command argument."""


# ---------------------------------------------------------------- plans


def plan_to_dict(plan: Plan) -> dict:
    prims = []
    for p in plan.primitives:
        if isinstance(p, Grow):
            prims.append({"op": "grow", "mm": p.length})
        else:
            prims.append({"op": "turn", "dir": p.direction.value})
    return {"increment_deg": math.degrees(plan.increment), "primitives": prims, "meta": plan.meta}


def dumps_plan(plan: Plan) -> str:
    return json.dumps(plan_to_dict(plan), indent=2) + "\n"


def plan_from_dict(data) -> Plan:
    if not isinstance(data, dict):
        raise InputError("plan: top level must be an object")
    unknown = set(data) - {"increment_deg", "primitives", "meta"}
    if unknown:
        raise InputError(f"plan: unknown field(s) {sorted(unknown)}")
    inc = data.get("increment_deg")
    if isinstance(inc, bool) or not isinstance(inc, (int, float)) or not 0 < inc < 180:
        raise InputError(f"plan.increment_deg: expected a number in (0, 180), got {inc!r}")
    raw = data.get("primitives")
    if not isinstance(raw, list):
        raise InputError("plan.primitives: expected a list")
    meta = data.get("meta", {})
    if not isinstance(meta, dict):
        raise InputError("plan.meta: expected an object")
    prims = []
    for k, item in enumerate(raw):
        where = f"plan.primitives[{k}]"
        if not isinstance(item, dict):
            raise InputError(f"{where}: expected an object")
        op = item.get("op")
        if op == "grow":
            if set(item) != {"op", "mm"}:
                raise InputError(f"{where}: grow takes exactly 'op' and 'mm'")
            mm = item["mm"]
            if isinstance(mm, bool) or not isinstance(mm, (int, float)) or not (math.isfinite(mm) and mm > 0):
                raise InputError(f"{where}.mm: expected a positive number, got {mm!r}")
            if prims and isinstance(prims[-1], Grow):
                raise InputError(f"{where}: consecutive grow entries must be merged")
            prims.append(Grow(float(mm)))
        elif op == "turn":
            if set(item) != {"op", "dir"}:
                raise InputError(f"{where}: turn takes exactly 'op' and 'dir'")
            if item["dir"] not in ("L", "R"):
                raise InputError(f"{where}.dir: expected 'L' or 'R', got {item['dir']!r}")
            prims.append(Turn(Direction(item["dir"])))
        else:
            raise InputError(f"{where}.op: expected 'grow' or 'turn', got {op!r}")
    return Plan(tuple(prims), math.radians(inc), meta)


def loads_plan(text: str) -> Plan:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"plan: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return plan_from_dict(data)


def read_plan(path) -> Plan:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read plan file {path}: {exc.strerror}") from None
    return loads_plan(text)


def write_plan(plan: Plan, path) -> None:
    Path(path).write_text(dumps_plan(plan))


# ---------------------------------------------------------------- traces

CSV_HEADER = "index,x_mm,y_mm,heading_deg,event"


def _f6(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _heading_deg(h: float) -> float:
    d = math.degrees(h)
    # keep 359.9999999 from printing as 360.000000
    return 0.0 if round(d, 6) >= 360.0 else d


def _event_label(e) -> str:
    if isinstance(e, Grew):
        return f"grow:{_f6(e.length)}"
    if isinstance(e, Turned):
        return f"turn:{e.direction.value}:{_f6(math.degrees(e.angle))}"
    return f"fail:{e.reason}"


def trace_rows(trace: SimTrace) -> List[str]:
    """One row per pose; a failed run gets an extra row repeating the last pose."""
    rows = []
    moves = [e for e in trace.events if not isinstance(e, Failed)]
    for k, pose in enumerate(trace.poses):
        label = "start" if k == 0 else _event_label(moves[k - 1])
        rows.append(f"{k},{_f6(pose.x)},{_f6(pose.y)},{_f6(_heading_deg(pose.heading))},{label}")
    if trace.failed:
        t = trace.terminal
        k = len(trace.poses)
        label = _event_label(trace.events[-1]).replace(",", ";")
        rows.append(f"{k},{_f6(t.x)},{_f6(t.y)},{_f6(_heading_deg(t.heading))},{label}")
    return rows


def dumps_trace(trace: SimTrace) -> str:
    return "\n".join([CSV_HEADER] + trace_rows(trace)) + "\n"


def write_trace(trace: SimTrace, path) -> None:
    Path(path).write_text(dumps_trace(trace))


# ---------------------------------------------------------------- svg

TURN_COLORS = {Direction.LEFT: "green", Direction.RIGHT: "red"}


def render_svg(trace: SimTrace, markers: Sequence[Tuple[str, Pose]] = (), margin: float = 20.0) -> str:
    """SVG of a trace, 1 px per mm with +y pointing up the page.

    The path is a single polyline with one vertex per pose. Turn vertices
    carry a circle colored by direction.
    """
    pts = [(p.x, -p.y) for p in trace.poses] + [(m.x, -m.y) for _, m in markers]
    xmin = min(x for x, _ in pts) - margin
    ymin = min(y for _, y in pts) - margin
    width = max(x for x, _ in pts) - xmin + margin
    height = max(y for _, y in pts) - ymin + margin

    def fmt(v: float) -> str:
        s = f"{v:.3f}"
        return "0.000" if s == "-0.000" else s

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{fmt(width)}" height="{fmt(height)}" '
        f'viewBox="{fmt(xmin)} {fmt(ymin)} {fmt(width)} {fmt(height)}">',
    ]
    coords = " ".join(f"{fmt(p.x)},{fmt(-p.y)}" for p in trace.poses)
    out.append(f'  <polyline points="{coords}" fill="none" stroke="black" stroke-width="2"/>')
    pose_iter = iter(trace.poses[1:])
    for e in trace.events:
        if isinstance(e, Failed):
            break
        p = next(pose_iter)
        if isinstance(e, Turned):
            out.append(f'  <circle cx="{fmt(p.x)}" cy="{fmt(-p.y)}" r="4" fill="{TURN_COLORS[e.direction]}"/>')
    for name, m in markers:
        dx, dy = 15 * math.cos(m.heading), -15 * math.sin(m.heading)
        out.append(
            f'  <line class="{name}" x1="{fmt(m.x)}" y1="{fmt(-m.y)}" x2="{fmt(m.x + dx)}" y2="{fmt(-m.y + dy)}" '
            'stroke="blue" stroke-width="2"/>'
        )
    if trace.failed:
        t = trace.terminal
        out.append(f'  <rect x="{fmt(t.x - 5)}" y="{fmt(-t.y - 5)}" width="10" height="10" fill="orange"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(trace: SimTrace, path, markers: Sequence[Tuple[str, Pose]] = ()) -> None:
    Path(path).write_text(render_svg(trace, markers))


# ---------------------------------------------------------------- poses


def parse_pose(text: str) -> Pose:
    """Parse ``"x,y,heading_deg"``."""
    parts = text.split(",")
    if len(parts) != 3:
        raise InputError(f"pose {text!r}: expected x,y,heading_deg")
    try:
        x, y, h = (float(p) for p in parts)
        return Pose.from_degrees(x, y, h)
    except (ValueError, DomainError):
        raise InputError(f"pose {text!r}: expected three finite numbers") from None


# ---------------------------------------------------------------- config

_FLOAT_KEYS = {
    "tube_width_mm",
    "fold_length_mm",
    "tape_placement_deg",
    "increment_deg",
    "tolerance_deg",
    "min_segment_mm",
    "turn_mean_deg",
    "turn_sigma_deg",
    "degradation_deg",
}
_INT_KEYS = {"max_consecutive_same_dir", "seed"}


@dataclass
class Config:
    tube: TubeParams = field(default_factory=TubeParams)
    increment_override: Optional[float] = None  # degrees
    tolerance: float = math.degrees(DEFAULT_TOLERANCE)  # degrees
    min_segment: float = DEFAULT_MIN_SEGMENT
    error_model: ErrorModel = field(default_factory=ErrorModel)

    @property
    def increment(self) -> float:
        """Turn increment in radians: the override if set, else the tube model."""
        if self.increment_override is not None:
            return math.radians(self.increment_override)
        return capability(self.tube).theta_planar

    def paper_reported(self) -> "Config":
        return Config(self.tube, REPORTED_TURN_PLANAR_DEG, self.tolerance, self.min_segment, self.error_model)


def parse_config(text: str, source: str = "<config>") -> Config:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in _FLOAT_KEYS:
            try:
                v = float(value)
            except ValueError:
                raise InputError(f"{source}:{lineno}: {key} expects a number, got {value!r}") from None
            if not math.isfinite(v):
                raise InputError(f"{source}:{lineno}: {key} must be finite")
        elif key in _INT_KEYS:
            try:
                v = int(value)
            except ValueError:
                raise InputError(f"{source}:{lineno}: {key} expects an integer, got {value!r}") from None
        else:
            raise InputError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise InputError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = v
    return config_from_values(values, source)


def config_from_values(values: dict, source: str = "<config>") -> Config:
    defaults_tube = TubeParams()
    defaults_em = ErrorModel()
    try:
        tube = TubeParams(
            values.get("tube_width_mm", defaults_tube.tube_width_L),
            values.get("fold_length_mm", defaults_tube.fold_length_D),
            math.radians(values.get("tape_placement_deg", math.degrees(defaults_tube.tape_placement))),
        )
        mean = values.get("turn_mean_deg")
        em = ErrorModel(
            turn_mean=None if mean is None else math.radians(mean),
            turn_sigma=math.radians(values.get("turn_sigma_deg", math.degrees(defaults_em.turn_sigma))),
            degradation_per_repeat=math.radians(values.get("degradation_deg", 0.0)),
            max_consecutive_same_dir=values.get("max_consecutive_same_dir", defaults_em.max_consecutive_same_dir),
            seed=values.get("seed", 0),
        )
    except DomainError as exc:
        raise InputError(f"{source}: {exc}") from None
    cfg = Config(
        tube=tube,
        increment_override=values.get("increment_deg"),
        tolerance=values.get("tolerance_deg", math.degrees(DEFAULT_TOLERANCE)),
        min_segment=values.get("min_segment_mm", DEFAULT_MIN_SEGMENT),
        error_model=em,
    )
    validate_config(cfg, source)
    return cfg


def validate_config(cfg: Config, source: str = "<config>") -> None:
    if cfg.increment_override is not None and not 0 < cfg.increment_override < 180:
        raise InputError(f"{source}: increment_deg must be in (0, 180)")
    if not cfg.min_segment >= 0:
        raise InputError(f"{source}: min_segment_mm must be >= 0")
    if not cfg.tolerance > 0:
        raise InputError(f"{source}: tolerance_deg must be > 0")


def read_config(path) -> Config:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read config file {path}: {exc.strerror}") from None
    return parse_config(text, str(path))
