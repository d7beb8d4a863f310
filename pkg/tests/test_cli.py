import io
import json
import math
import subprocess
import sys
from pathlib import Path


from wrinklepath.cli import EXIT_INPUT, EXIT_NO_PATH, EXIT_OK, run
from wrinklepath.io import read_plan
from wrinklepath.geometry import Pose, angle_distance, distance
from wrinklepath.sim import execute

GOLDEN = Path(__file__).parent / "golden"


def call(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], out=out)
    return code, out.getvalue()


def test_angle_default_formula():
    code, text = call("angle")
    assert code == EXIT_OK
    assert "theta (3D):        32.57 deg" in text
    assert "theta' (planar):   23.03 deg" in text
    assert "21.44" in text and "30.30" in text


def test_angle_paper_reported():
    code, text = call("angle", "--paper-reported")
    assert code == EXIT_OK
    assert "theta' (planar):   21.44 deg" in text


def test_angle_zero_fold(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("fold_length_mm = 0\n")
    code, text = call("angle", "--config", cfg)
    assert code == EXIT_OK
    assert "theta' (planar):   0.00 deg" in text


def test_bad_config_exits_2(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("wheel_base = 3\n")
    code, _ = call("angle", "--config", cfg)
    assert code == EXIT_INPUT
    assert "unknown key" in capsys.readouterr().err


def test_config_from_env(tmp_path, monkeypatch):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("fold_length_mm = 0\n")
    monkeypatch.setenv("WRINKLEPATH_CONFIG", str(cfg))
    assert "0.00 deg" in call("angle")[1]


def test_plan_and_simulate_round_trip(tmp_path):
    plan_file = tmp_path / "p.json"
    svg = tmp_path / "p.svg"
    code, text = call("plan", "--start", "0,0,0", "--goal", "400,250,69.09", "-o", plan_file, "--svg", svg)
    assert code == EXIT_OK
    assert "total length" in text and "turns" in text
    assert svg.read_text().startswith("<?xml")
    csv_file = tmp_path / "t.csv"
    assert call("simulate", plan_file, "-o", csv_file)[0] == EXIT_OK
    last = csv_file.read_text().splitlines()[-1].split(",")
    assert math.hypot(float(last[1]) - 400, float(last[2]) - 250) < 1e-6


def test_plan_no_path_exits_3(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("increment_deg = 90\ntolerance_deg = 1\n")
    code, _ = call("plan", "--config", cfg, "--strict", "--start", "0,0,0", "--goal=-200,0,0", "-o", tmp_path / "p.json")
    assert code == EXIT_NO_PATH
    assert "no valid path found" in capsys.readouterr().err
    assert not (tmp_path / "p.json").exists()


def test_plan_bad_pose_exits_2(tmp_path):
    assert call("plan", "--start", "0,0", "--goal", "1,1,0", "-o", tmp_path / "p.json")[0] == EXIT_INPUT


def test_plan_zero_increment_exits_2(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("fold_length_mm = 0\n")
    assert call("plan", "--config", cfg, "--start", "0,0,0", "--goal", "1,1,0", "-o", tmp_path / "p.json")[0] == EXIT_INPUT


def test_simulate_noisy_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for f in (a, b):
        assert call("simulate", GOLDEN / "plan.json", "--noisy", "--seed", 7, "-o", f)[0] == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_simulate_rejects_consecutive_grows(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"increment_deg": 21.44, "primitives": [{"op": "grow", "mm": 5}, {"op": "grow", "mm": 5}]}))
    assert call("simulate", bad)[0] == EXIT_INPUT
    assert "primitives[1]" in capsys.readouterr().err


def test_simulate_missing_file(tmp_path):
    assert call("simulate", tmp_path / "nope.json")[0] == EXIT_INPUT


def _single_turn_plan(tmp_path):
    p = tmp_path / "one.json"
    p.write_text(json.dumps({"increment_deg": 21.44, "primitives": [{"op": "turn", "dir": "L"}]}))
    return p


def test_montecarlo_group_one(tmp_path):
    csv_file = tmp_path / "mc.csv"
    code, text = call("montecarlo", _single_turn_plan(tmp_path), "--preset", "single", "--runs", 10000, "--csv", csv_file)
    assert code == EXIT_OK
    rows = dict(line.split(",", 1) for line in csv_file.read_text().splitlines()[1:])
    assert abs(float(rows["heading_mean_deg"]) - 21.5) < 0.1
    assert abs(float(rows["heading_sd_deg"]) - 1.5) < 0.1
    assert abs(float(rows["turn_1_mean_deg"]) - 21.5) < 0.1
    assert "failure rate: 0.0000" in text


def test_montecarlo_zero_variance(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("turn_sigma_deg = 0\n")
    csv_file = tmp_path / "mc.csv"
    assert call("montecarlo", _single_turn_plan(tmp_path), "--config", cfg, "--runs", 1, "--csv", csv_file)[0] == EXIT_OK
    rows = dict(line.split(",", 1) for line in csv_file.read_text().splitlines()[1:])
    assert float(rows["heading_sd_deg"]) == 0
    assert float(rows["position_rmse_mm"]) == 0


def test_montecarlo_eleven_same_direction_turns_always_fail(tmp_path):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"increment_deg": 21.44, "primitives": [{"op": "turn", "dir": "R"}] * 11}))
    code, text = call("montecarlo", p, "--runs", 50)
    assert code == EXIT_OK
    assert "failure rate: 1.0000" in text
    assert "every run failed" in text


def test_montecarlo_bad_runs(tmp_path):
    assert call("montecarlo", _single_turn_plan(tmp_path), "--runs", 0)[0] == EXIT_INPUT


def test_golden_files_reproduce(tmp_path):
    plan_file, plan_svg = tmp_path / "plan.json", tmp_path / "plan.svg"
    csv_file, trace_svg = tmp_path / "t.csv", tmp_path / "t.svg"
    call("plan", "--paper-reported", "--start", "0,0,0", "--goal", "400,250,64.32", "-o", plan_file, "--svg", plan_svg)
    call("simulate", plan_file, "--paper-reported", "--noisy", "--seed", 7, "-o", csv_file, "--svg", trace_svg)
    assert plan_file.read_bytes() == (GOLDEN / "plan.json").read_bytes()
    assert plan_svg.read_bytes() == (GOLDEN / "plan.svg").read_bytes()
    assert csv_file.read_bytes() == (GOLDEN / "trace_seed7.csv").read_bytes()
    assert trace_svg.read_bytes() == (GOLDEN / "trace_seed7.svg").read_bytes()


def test_golden_plan_lands_on_goal():
    plan = read_plan(GOLDEN / "plan.json")
    end = execute(plan, Pose(0, 0, 0)).terminal
    goal = Pose.from_degrees(400, 250, 64.32)
    assert distance(end.position, goal.position) < 1e-6
    assert angle_distance(end.heading, goal.heading) < 1e-9


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "wrinklepath", "angle", "--paper-reported"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "21.44" in res.stdout
    res = subprocess.run([sys.executable, "-m", "wrinklepath", "plan"], capture_output=True, text=True)
    assert res.returncode == 2
