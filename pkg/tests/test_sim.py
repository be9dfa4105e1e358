"""Arm-pair simulation: stepping, safety stop, detectors, lifecycle."""

import math
import time

import numpy as np
import pytest

from crowdkiosk.model import CollisionFlag
from crowdkiosk.sim import ArmPairSim, Phase
from crowdkiosk.trajectories import TOUCH_POSE, full, tutorial_script, with_aperture

from .oracles import sampled_segment_distance

# mirror-symmetric reach toward the table center; wrists interpenetrate
CROSSING = full((0.0, -0.2, 0.5, 0.0, 0.0, 0.0, 0.5))


@pytest.fixture(scope="module")
def sim():
    return ArmPairSim()


@pytest.fixture()
def home_state(sim):
    return sim.raise_to_home(sim.initial_state())[-1]


def test_initial_state_lowered_and_clear(sim):
    s = sim.initial_state()
    assert s.phase is Phase.LOWERED
    assert s.collision is CollisionFlag.CLEAR
    assert s.leader == s.follower


def test_home_pose_is_clear(sim, home_state):
    assert home_state.phase is Phase.HOME
    assert home_state.collision is CollisionFlag.CLEAR
    assert home_state.min_clearance > sim.config.warn_at


def test_raise_trajectory_never_violates(sim):
    for s in sim.raise_to_home(sim.initial_state()):
        assert s.collision is not CollisionFlag.VIOLATION


def test_raise_reaches_home_exactly(sim):
    traj = sim.raise_to_home(sim.initial_state())
    assert traj[-1].follower == sim.config.full_home()


def test_raise_midpoint_is_average_of_endpoints(sim):
    traj = sim.raise_to_home(sim.initial_state())
    steps = len(traj)
    assert steps % 2 == 1 or steps % 2 == 0  # guard against config change
    mid = traj[steps // 2 - 1] if steps % 2 == 0 else None
    if mid is not None:
        expected = [
            (a + b) / 2 for a, b in zip(sim.config.full_rest(), sim.config.full_home())
        ]
        assert mid.follower == pytest.approx(expected, abs=1e-12)


def test_lower_returns_to_rest(sim, home_state):
    traj = sim.lower_to_rest(home_state)
    assert traj[-1].phase is Phase.LOWERED
    assert traj[-1].follower == sim.config.full_rest()


def test_raise_requires_lowered_phase(sim, home_state):
    with pytest.raises(ValueError):
        sim.raise_to_home(home_state)


def test_step_tracks_constant_command(sim, home_state):
    s = sim.start_teleop(home_state)
    target = list(sim.config.full_home())
    target[1] += 0.3
    target[8] -= 0.2
    target = tuple(target)
    for _ in range(200):
        s = sim.step(s, target)
    err = max(abs(f - t) for f, t in zip(s.follower, target))
    assert err < 1e-6


def test_step_error_strictly_decreases(sim, home_state):
    s = sim.start_teleop(home_state)
    target = list(sim.config.full_home())
    target[2] += 0.5
    target = tuple(target)
    prev = max(abs(f - t) for f, t in zip(s.follower, target))
    for _ in range(30):
        s = sim.step(s, target)
        err = max(abs(f - t) for f, t in zip(s.follower, target))
        if prev > 1e-9:
            assert err < prev  # strict decrease until converged
        prev = err
    assert prev < 1e-6


def test_command_clamped_to_joint_limits(sim, home_state):
    s = sim.start_teleop(home_state)
    cmd = list(sim.config.full_home())
    cmd[1] = 9.0  # far beyond the shoulder limit
    cmd[6] = 1.7  # aperture beyond 1.0
    s = sim.step(s, tuple(cmd))
    hi_shoulder = sim.config.follower_left.limits[1][1]
    assert s.leader[1] == hi_shoulder
    assert s.leader[6] == 1.0


def test_step_rejects_wrong_length_and_nonfinite(sim, home_state):
    s = sim.start_teleop(home_state)
    with pytest.raises(ValueError):
        sim.step(s, (0.0,) * 13)
    bad = list(sim.config.full_home())
    bad[3] = math.nan
    with pytest.raises(ValueError):
        sim.step(s, tuple(bad))


def test_step_determinism_bit_identical(sim, home_state):
    cmd = full(with_aperture(TOUCH_POSE, 0.4))
    s1 = sim.start_teleop(home_state)
    s2 = sim.start_teleop(home_state)
    for _ in range(50):
        s1 = sim.step(s1, cmd)
        s2 = sim.step(s2, cmd)
    assert s1 == s2  # tuple equality is bitwise for floats


def test_crossing_command_freezes_follower(sim, home_state):
    s = sim.start_teleop(home_state)
    last_ok = s.follower
    saw_violation = False
    for _ in range(400):
        s = sim.step(s, CROSSING)
        if s.collision is CollisionFlag.VIOLATION:
            saw_violation = True
            assert s.follower == last_ok  # held at the last non-violating pose
        else:
            last_ok = s.follower
    assert saw_violation
    # the held pose itself is safe
    flag, _ = sim.collision_status_of(s.follower)
    assert flag is not CollisionFlag.VIOLATION


def test_follower_recovers_after_backing_off(sim, home_state):
    s = sim.start_teleop(home_state)
    for _ in range(400):
        s = sim.step(s, CROSSING)
    assert s.collision is CollisionFlag.VIOLATION
    home_cmd = sim.config.full_home()
    for _ in range(400):
        s = sim.step(s, home_cmd)
    assert s.collision is CollisionFlag.CLEAR
    err = max(abs(f - t) for f, t in zip(s.follower, home_cmd))
    assert err < 1e-6


def test_collision_status_crossing_pose_is_violation(sim):
    flag, clearance = sim.collision_status_of(CROSSING)
    assert flag is CollisionFlag.VIOLATION
    assert clearance < 0  # interpenetrating capsules


def test_collision_boundary_exclusive(sim):
    # clearance exactly equal to warn_at is Clear; exactly stop_at is Warning
    pose = sim.config.full_home()
    clearance = sim.min_clearance_of(pose)
    flag, _ = sim.collision_status_of(pose, warn_at=clearance, stop_at=0.001)
    assert flag is CollisionFlag.CLEAR
    flag, _ = sim.collision_status_of(pose, warn_at=clearance + 1.0, stop_at=clearance)
    assert flag is CollisionFlag.WARNING


def test_min_clearance_matches_sampling_oracle_on_crossing(sim):
    # reconstruct the violating pair distances with the dense oracle
    starts, ends = sim._follower_capsules(CROSSING)
    best = math.inf
    for i, j in zip(sim._pair_i, sim._pair_j):
        d = sampled_segment_distance(starts[i], ends[i], starts[j], ends[j], n=4000)
        best = min(best, d - sim._radii[i] - sim._radii[j])
    table_best = min(
        min(starts[k, 2], ends[k, 2]) - sim._radii[k]
        for arm in range(2)
        for k in [arm * 6 + c for c in (1, 2, 3)]
    )
    expected = min(best, table_best)
    assert sim.min_clearance_of(CROSSING) == pytest.approx(expected, abs=1e-3)


def test_grippers_squeezed_requires_both(sim, home_state):
    s = sim.start_teleop(home_state)
    both = list(sim.config.full_home())
    both[6] = both[13] = 0.05
    s2 = sim.step(s, tuple(both))
    assert sim.grippers_squeezed(s2)
    one = list(both)
    one[13] = 0.5
    s3 = sim.step(s, tuple(one))
    assert not sim.grippers_squeezed(s3)


def test_table_touch_at_touch_pose(sim, home_state):
    s = sim.start_teleop(home_state)
    cmd = full(with_aperture(TOUCH_POSE, 0.7))
    for _ in range(120):
        s = sim.step(s, cmd)
    assert sim.table_touch(s) == (True, True)
    assert s.collision is CollisionFlag.CLEAR  # fingers are exempt from the table check


def test_table_touch_false_at_home(sim, home_state):
    assert sim.table_touch(home_state) == (False, False)


def test_rest_on_stop_detection(sim, home_state):
    s = sim.start_teleop(home_state)
    rest_cmd = sim.config.full_rest()
    for _ in range(120):
        s = sim.step(s, rest_cmd)
    assert sim.rest_on_stop(s)


def test_rest_on_stop_rejects_squeezed_grippers(sim, home_state):
    s = sim.start_teleop(home_state)
    cmd = list(sim.config.full_rest())
    cmd[6] = 0.02  # below the rest aperture range
    for _ in range(120):
        s = sim.step(s, tuple(cmd))
    assert not sim.rest_on_stop(s)


def test_tutorial_script_traverses_all_detectors(sim, home_state):
    s = sim.start_teleop(home_state)
    squeezed_at = touched = rested = None
    touches = [False, False]
    for k, cmd in enumerate(tutorial_script(sim.config)):
        s = sim.step(s, cmd)
        if squeezed_at is None and sim.grippers_squeezed(s):
            squeezed_at = k
        tl, tr = sim.table_touch(s)
        touches[0] |= tl
        touches[1] |= tr
        if touched is None and all(touches):
            touched = k
        if rested is None and sim.rest_on_stop(s):
            rested = k
        assert s.collision is not CollisionFlag.VIOLATION
    assert squeezed_at is not None and touched is not None and rested is not None
    assert squeezed_at < touched < rested


def test_joint_limits_hold_after_every_operation(sim, home_state):
    rng = np.random.default_rng(5)
    s = sim.start_teleop(home_state)
    models = (sim.config.follower_left, sim.config.follower_right)
    for _ in range(100):
        cmd = tuple(rng.uniform(-4, 4, size=14).tolist())
        s = sim.step(s, cmd)
        for arm, model in enumerate(models):
            for j, (lo, hi) in enumerate(model.limits):
                assert lo <= s.follower[arm * 7 + j] <= hi
                assert lo <= s.leader[arm * 7 + j] <= hi
            glo, ghi = model.gripper_limits
            assert glo <= s.follower[arm * 7 + 6] <= ghi


def test_collision_check_budget(sim):
    # 50Hz contract with >= 100x margin: full two-arm check under 200 us
    pose = sim.config.full_home()
    sim.collision_status_of(pose)  # warm up
    n = 500
    t0 = time.perf_counter()
    for _ in range(n):
        sim.collision_status_of(pose)
    per_call = (time.perf_counter() - t0) / n
    assert per_call < 200e-6
