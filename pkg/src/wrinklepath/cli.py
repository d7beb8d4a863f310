"""``wrinklepath`` command line: angle, plan, simulate, montecarlo.

Exit codes: 0 success, 2 input or config error, 3 no path found.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

from .geometry import DomainError
from .io import (
    Config,
    InputError,
    dumps_trace,
    parse_pose,
    read_config,
    read_plan,
    write_plan,
    write_svg,
)
from .planner import NoPathFound, PlanQuery, plan_dubins
from .sim import ErrorModel, execute, execute_noisy, monte_carlo
from .wrinkle import (
    REPORTED_TURN_3D_DEG,
    REPORTED_TURN_PLANAR_DEG,
    capability,
    required_fold_length,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_PATH = 3

CONFIG_ENV = "WRINKLEPATH_CONFIG"

PRESETS = {
    "single": ErrorModel.single_turn_group,
    "alternating": ErrorModel.alternating_group,
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="FILE", help=f"key = value config file (fallback: ${CONFIG_ENV})")
    p.add_argument(
        "--paper-reported",
        action="store_true",
        help=f"use the reported {REPORTED_TURN_PLANAR_DEG} deg turn instead of the tube formula",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wrinklepath", description="Fixed-angle path planning for wrinkle-steered vine robots.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("angle", help="turn angle from tube and fold geometry")
    _common(p)
    p.add_argument("--target", type=float, default=REPORTED_TURN_PLANAR_DEG, metavar="DEG",
                   help="planar turn to size a fold for (default %(default)s)")

    p = sub.add_parser("plan", help="plan a fixed-turn path between two poses")
    _common(p)
    p.add_argument("--start", required=True, metavar="X,Y,DEG")
    p.add_argument("--goal", required=True, metavar="X,Y,DEG")
    p.add_argument("-o", "--output", default="plan.json", metavar="FILE")
    p.add_argument("--svg", metavar="FILE")
    p.add_argument("--path-type", default=None, help="label stored in the plan metadata")
    p.add_argument("--strict", action="store_true", help="only accept paths with a turn vertex")

    p = sub.add_parser("simulate", help="execute a plan file into a CSV trace")
    _common(p)
    p.add_argument("plan", metavar="PLAN_JSON")
    p.add_argument("--start", default="0,0,0", metavar="X,Y,DEG")
    p.add_argument("-o", "--output", default="-", metavar="FILE", help="CSV path, '-' for stdout")
    p.add_argument("--noisy", action="store_true", help="apply the error model")
    p.add_argument("--seed", type=int)
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--svg", metavar="FILE")

    p = sub.add_parser("montecarlo", help="repeat noisy execution and summarize")
    _common(p)
    p.add_argument("plan", metavar="PLAN_JSON")
    p.add_argument("--runs", type=int, default=1000)
    p.add_argument("--start", default="0,0,0", metavar="X,Y,DEG")
    p.add_argument("--seed", type=int)
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--csv", metavar="FILE", help="also write the summary as CSV")
    return parser


def load_config(args) -> Config:
    path = args.config or os.environ.get(CONFIG_ENV)
    cfg = read_config(path) if path else Config()
    if args.paper_reported:
        cfg = cfg.paper_reported()
    return cfg


def _error_model(cfg: Config, args) -> ErrorModel:
    em = cfg.error_model
    if getattr(args, "preset", None):
        em = PRESETS[args.preset](
            degradation_per_repeat=em.degradation_per_repeat,
            max_consecutive_same_dir=em.max_consecutive_same_dir,
            seed=em.seed,
        )
    if getattr(args, "seed", None) is not None:
        em = replace(em, seed=args.seed)
    return em


def cmd_angle(cfg: Config, args, out) -> int:
    tube = cfg.tube
    cap = capability(tube)
    print(f"tube width L:      {tube.tube_width_L:.2f} mm", file=out)
    print(f"fold length D:     {tube.fold_length_D:.2f} mm", file=out)
    print(f"tape placement:    {math.degrees(tube.tape_placement):.2f} deg", file=out)
    if args.paper_reported:
        print(f"theta (3D):        {REPORTED_TURN_3D_DEG:.2f} deg (reported preset)", file=out)
        print(f"theta' (planar):   {REPORTED_TURN_PLANAR_DEG:.2f} deg (reported preset)", file=out)
        print(
            f"formula values:    theta {math.degrees(cap.theta_3d):.2f} deg, theta' {math.degrees(cap.theta_planar):.2f} deg",
            file=out,
        )
    else:
        print(f"theta (3D):        {math.degrees(cap.theta_3d):.2f} deg", file=out)
        print(f"theta' (planar):   {math.degrees(cap.theta_planar):.2f} deg", file=out)
        print(f"reported preset:   theta' {REPORTED_TURN_PLANAR_DEG:.2f} deg (--paper-reported)", file=out)
    if cfg.increment_override is not None:
        print(f"planning turn:     {cfg.increment_override:.2f} deg", file=out)
    try:
        d = required_fold_length(tube.tube_width_L, math.radians(args.target), tube.tape_placement)
        print(f"fold for {args.target:.2f} deg: {d:.2f} mm", file=out)
    except DomainError as exc:
        print(f"fold for {args.target:.2f} deg: unreachable ({exc})", file=out)
    print(
        f"note: the reference build reports theta = {REPORTED_TURN_3D_DEG:.2f} deg and "
        f"theta' = {REPORTED_TURN_PLANAR_DEG:.2f} deg for L = 105 mm, D = 19 mm; "
        f"the formula gives {math.degrees(19 * math.pi / 105):.2f} deg. "
        "--paper-reported plans with the reported turn.",
        file=out,
    )
    return EXIT_OK


def cmd_plan(cfg: Config, args, out) -> int:
    start, goal = parse_pose(args.start), parse_pose(args.goal)
    try:
        q = PlanQuery(start, goal, cfg.increment, math.radians(cfg.tolerance), cfg.min_segment)
    except DomainError as exc:
        raise InputError(str(exc)) from None
    try:
        plan = plan_dubins(q, path_type=args.path_type, straight_shortcut=not args.strict)
    except NoPathFound:
        print("no valid path found", file=sys.stderr)
        return EXIT_NO_PATH
    write_plan(plan, args.output)
    if args.svg:
        write_svg(execute(plan, start), args.svg, markers=[("start", start), ("goal", goal)])
    print(f"total length: {plan.total_length:.2f} mm, turns: {plan.turn_count}", file=out)
    residual = plan.meta.get("heading_residual_deg", 0.0)
    if abs(residual) >= 0.005:
        print(f"goal heading missed by {residual:.2f} deg (fixed turn lattice)", file=out)
    return EXIT_OK


def cmd_simulate(cfg: Config, args, out) -> int:
    plan = read_plan(args.plan)
    start = parse_pose(args.start)
    if args.noisy:
        trace = execute_noisy(plan, start, _error_model(cfg, args))
    else:
        trace = execute(plan, start)
    text = dumps_trace(trace)
    if args.output == "-":
        out.write(text)
    else:
        Path(args.output).write_text(text)
    if args.svg:
        write_svg(trace, args.svg, markers=[("start", start)])
    if trace.failed:
        print(f"run failed: {trace.events[-1].reason}", file=sys.stderr)
    return EXIT_OK


def summary_rows(summary) -> List[tuple]:
    rows = [
        ("runs", str(summary.runs)),
        ("failures", str(summary.failures)),
        ("failure_rate", f"{summary.failure_rate:.6f}"),
        ("rng", summary.rng),
    ]
    if summary.pose_stats_defined:
        m = summary.mean_terminal
        rows += [
            ("mean_x_mm", f"{m.x:.6f}"),
            ("mean_y_mm", f"{m.y:.6f}"),
            ("heading_mean_deg", f"{math.degrees(summary.heading_mean):.6f}"),
            ("heading_sd_deg", f"{math.degrees(summary.heading_sd):.6f}"),
            ("position_rmse_mm", f"{summary.position_rmse:.6f}"),
        ]
    else:
        rows.append(("pose_stats", "undefined (all runs failed)"))
    for t in summary.per_turn:
        rows += [
            (f"turn_{t.index}_count", str(t.count)),
            (f"turn_{t.index}_mean_deg", f"{math.degrees(t.mean):.6f}"),
            (f"turn_{t.index}_sd_deg", f"{math.degrees(t.sd):.6f}"),
        ]
    return rows


def cmd_montecarlo(cfg: Config, args, out) -> int:
    plan = read_plan(args.plan)
    start = parse_pose(args.start)
    if args.runs < 1:
        raise InputError(f"--runs must be >= 1, got {args.runs}")
    summary = monte_carlo(plan, start, _error_model(cfg, args), args.runs)

    print(f"runs: {summary.runs}  failures: {summary.failures}  failure rate: {summary.failure_rate:.4f}", file=out)
    if summary.pose_stats_defined:
        m = summary.mean_terminal
        print(
            f"terminal: mean ({m.x:.2f}, {m.y:.2f}) mm, heading {math.degrees(summary.heading_mean):.2f} "
            f"+/- {math.degrees(summary.heading_sd):.2f} deg, position rmse {summary.position_rmse:.2f} mm",
            file=out,
        )
    else:
        print("terminal: undefined, every run failed", file=out)
    if summary.per_turn:
        print(f"{'turn':>4} {'n':>7} {'mean deg':>9} {'sd deg':>7}", file=out)
        for t in summary.per_turn:
            print(f"{t.index:>4} {t.count:>7} {math.degrees(t.mean):>9.2f} {math.degrees(t.sd):>7.2f}", file=out)
    if args.csv:
        lines = ["metric,value"] + [f"{k},{v}" for k, v in summary_rows(summary)]
        Path(args.csv).write_text("\n".join(lines) + "\n")
    return EXIT_OK


COMMANDS = {
    "angle": cmd_angle,
    "plan": cmd_plan,
    "simulate": cmd_simulate,
    "montecarlo": cmd_montecarlo,
}


def run(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](cfg, args, out)
    except (InputError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
