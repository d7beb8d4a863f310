import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wrinklepath.geometry import DomainError
from wrinklepath.wrinkle import (
    TubeParams,
    capability,
    feed_shift,
    planar_projection,
    required_fold_length,
    turn_angle_3d,
)

from conftest import deg


def test_turn_angle_reference_build():
    # 19 * pi / 105 by hand: 0.5684... rad
    theta = turn_angle_3d(TubeParams(105, 19))
    assert theta == pytest.approx(0.56848, abs=5e-6)
    assert math.degrees(theta) == pytest.approx(32.57, abs=0.005)


def test_turn_angle_trivial_cases():
    assert turn_angle_3d(TubeParams(105, 0)) == 0
    assert turn_angle_3d(TubeParams(105, 105 / math.pi)) == pytest.approx(1.0, abs=1e-15)


def test_defaults_give_23_03_planar():
    cap = capability(TubeParams())
    assert math.degrees(cap.theta_planar) == pytest.approx(23.03, abs=0.005)
    assert 0 <= cap.theta_planar <= cap.theta_3d


def test_projection_reproduces_reported_planar_turn():
    got = math.degrees(planar_projection(deg(30.3), deg(45)))
    assert got == pytest.approx(21.42, abs=0.01)
    assert abs(got - 21.44) < 0.05


@pytest.mark.parametrize("theta", [0.1, 0.5, 1.3])
def test_projection_limits(theta):
    assert planar_projection(theta, 0) == theta
    assert planar_projection(theta, math.pi / 2) == pytest.approx(0, abs=1e-16)


def test_feed_shift():
    p = TubeParams(105, 19)
    assert feed_shift(p, True) == 0
    assert feed_shift(TubeParams(105, 0), False) == 0
    assert feed_shift(p, False) == pytest.approx(0.56848, abs=5e-6)


def test_required_fold_length_examples():
    # theta * L / (pi * cos45) with theta = 21.42 deg
    assert required_fold_length(105, deg(21.42), deg(45)) == pytest.approx(17.67, abs=0.005)
    with pytest.raises(DomainError):
        required_fold_length(105, 0, deg(45))
    with pytest.raises(DomainError):
        required_fold_length(105, deg(180), deg(45))


@pytest.mark.parametrize(
    "kw",
    [
        dict(tube_width_L=0),
        dict(tube_width_L=-3),
        dict(fold_length_D=-1),
        dict(fold_length_D=105),
        dict(tape_placement=-0.1),
        dict(tape_placement=2.0),
    ],
)
def test_tube_params_invariants(kw):
    with pytest.raises(DomainError):
        TubeParams(**kw)


widths = st.floats(1, 1000)
fractions = st.floats(1e-6, 0.49)


@given(widths, fractions)
def test_linearity_in_fold(L, f):
    D = f * L
    assert turn_angle_3d(TubeParams(L, 2 * D)) == pytest.approx(2 * turn_angle_3d(TubeParams(L, D)), rel=1e-12, abs=0)


@given(widths, fractions, st.floats(0.01, 100))
def test_scale_invariance(L, f, k):
    D = f * L
    assert turn_angle_3d(TubeParams(k * L, k * D)) == pytest.approx(turn_angle_3d(TubeParams(L, D)), rel=1e-12)


@given(widths, st.floats(0.01, 0.98), st.floats(0.01, 0.98))
def test_monotonicity(L, f1, f2):
    a, b = sorted((f1, f2))
    if b - a < 1e-9:
        return
    assert turn_angle_3d(TubeParams(L, a * L)) < turn_angle_3d(TubeParams(L, b * L))
    D = a * L
    assert turn_angle_3d(TubeParams(L * 1.5, D)) < turn_angle_3d(TubeParams(L, D))


@given(widths, st.floats(0.001, 0.5), st.floats(0, 1.4))
def test_required_fold_round_trip(L, target, placement):
    try:
        D = required_fold_length(L, target, placement)
    except DomainError:
        return
    theta = planar_projection(turn_angle_3d(TubeParams(L, D, placement)), placement)
    assert theta == pytest.approx(target, abs=1e-12)
