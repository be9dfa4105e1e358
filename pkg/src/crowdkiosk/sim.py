"""Deterministic kinematic simulation of the leader/follower arm pairs.

The follower pair tracks the leader pair with a per-joint rate limit and a
safety stop: a commanded pose whose capsule clearance falls below the stop
threshold is rejected, so the follower never occupies a violating pose.
All operations are pure functions of (state, input); two runs with the
same inputs produce bit-identical states.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .arm import ArmModel, ArmPairConfig, JOINTS_PER_ARM, load_arm_pair
from .geometry import rotation_about_axis
from .model import CollisionFlag

N_TOTAL = 2 * JOINTS_PER_ARM  # 14 command values: [left 7, right 7]

# per-arm capsule indices: 0 base, 1 upper, 2 fore, 3 wrist, 4/5 fingers
_ADJACENT = {(0, 1), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)}
_TABLE_CAPSULES = (1, 2, 3)  # base is bolted down, fingers work at the surface
_FINGER_CAPSULES = (4, 5)
_CAPS_PER_ARM = 6


class Phase(enum.Enum):
    LOWERED = "Lowered"
    RAISING = "Raising"
    HOME = "Home"
    TELEOP = "Teleop"
    LOWERING = "Lowering"


@dataclass(frozen=True)
class SimState:
    leader: tuple
    follower: tuple
    follower_target: tuple
    tick: int
    phase: Phase
    collision: CollisionFlag
    min_clearance: float


class ArmPairSim:
    """Owns the rig configuration and exposes pure state-transition ops."""

    def __init__(self, config: ArmPairConfig | None = None, dt: float = 0.02):
        self.config = config if config is not None else load_arm_pair()
        self.dt = dt
        c = self.config
        self._followers = (c.follower_left, c.follower_right)
        self._leaders = (c.leader_left, c.leader_right)
        self._radii = self._capsule_radii()
        self._pair_i, self._pair_j = self._build_pair_indices()
        self._pair_radii = self._radii[self._pair_i] + self._radii[self._pair_j]
        # scratch buffers for the 50Hz check; the sim has a single ticking
        # writer, so reuse is safe and keeps the per-tick cost low
        n_pairs = len(self._pair_i)
        self._buf_starts = np.empty((2 * _CAPS_PER_ARM, 3))
        self._buf_ends = np.empty((2 * _CAPS_PER_ARM, 3))
        self._buf_gather = tuple(np.empty((n_pairs, 3)) for _ in range(4))

    # ------------------------------------------------------------------
    # lifecycle

    def initial_state(self) -> SimState:
        pose = self.config.full_rest()
        flag, clearance = self.collision_status_of(pose)
        return SimState(
            leader=pose,
            follower=pose,
            follower_target=pose,
            tick=0,
            phase=Phase.LOWERED,
            collision=flag,
            min_clearance=clearance,
        )

    def raise_to_home(self, s: SimState) -> list[SimState]:
        """Linear joint-space ramp to the home pose; terminal phase Home."""
        if s.phase is not Phase.LOWERED:
            raise ValueError(f"raise_to_home requires phase Lowered, got {s.phase.value}")
        return self._ramp(s, self.config.full_home(), Phase.RAISING, Phase.HOME)

    def lower_to_rest(self, s: SimState) -> list[SimState]:
        """Linear joint-space ramp to the rest pose; terminal phase Lowered."""
        if s.phase not in (Phase.HOME, Phase.TELEOP):
            raise ValueError(f"lower_to_rest requires a raised phase, got {s.phase.value}")
        return self._ramp(s, self.config.full_rest(), Phase.LOWERING, Phase.LOWERED)

    def start_teleop(self, s: SimState) -> SimState:
        if s.phase is not Phase.HOME:
            raise ValueError(f"start_teleop requires phase Home, got {s.phase.value}")
        return replace(s, phase=Phase.TELEOP)

    def _ramp(self, s, target, moving_phase, final_phase):
        steps = max(1, round(self.config.raise_duration / self.dt))
        start = np.asarray(s.follower)
        goal = np.asarray(target)
        out = []
        state = s
        for k in range(1, steps + 1):
            if k == steps:
                pose = tuple(target)  # land on the goal exactly
            else:
                pose = tuple((start + (goal - start) * (k / steps)).tolist())
            flag, clearance = self.collision_status_of(pose)
            state = SimState(
                leader=pose,
                follower=pose,
                follower_target=tuple(target),
                tick=state.tick + 1,
                phase=final_phase if k == steps else moving_phase,
                collision=flag,
                min_clearance=clearance,
            )
            out.append(state)
        return out

    # ------------------------------------------------------------------
    # stepping

    def step(self, s: SimState, command) -> SimState:
        """Advance one controller tick (dt) applying a 14-value leader command."""
        if s.phase not in (Phase.HOME, Phase.TELEOP):
            raise ValueError(f"step requires phase Home or Teleop, got {s.phase.value}")
        if len(command) != N_TOTAL:
            raise ValueError(f"command must have {N_TOTAL} values, got {len(command)}")
        if not all(math.isfinite(v) for v in command):
            raise ValueError("command contains non-finite values")

        leader = tuple(
            self._leaders[0].clamp(command[:JOINTS_PER_ARM])
            + self._leaders[1].clamp(command[JOINTS_PER_ARM:])
        )
        target = leader
        max_delta = self.config.rate_limit * self.dt
        candidate = tuple(
            f + min(max_delta, max(-max_delta, t - f)) for f, t in zip(s.follower, target)
        )
        flag, clearance = self.collision_status_of(candidate)
        if flag is CollisionFlag.VIOLATION:
            follower = s.follower  # safety stop: hold the last non-violating pose
        else:
            follower = candidate
        return SimState(
            leader=leader,
            follower=follower,
            follower_target=target,
            tick=s.tick + 1,
            phase=s.phase,
            collision=flag,
            min_clearance=clearance,
        )

    # ------------------------------------------------------------------
    # collision

    def collision_status(
        self, s: SimState, warn_at: float | None = None, stop_at: float | None = None
    ):
        return self.collision_status_of(s.follower, warn_at, stop_at)

    def collision_status_of(self, follower_joints, warn_at=None, stop_at=None):
        """Classify a follower pose; returns (flag, min clearance in meters)."""
        warn = self.config.warn_at if warn_at is None else warn_at
        stop = self.config.stop_at if stop_at is None else stop_at
        if not warn > stop >= 0.0:
            raise ValueError(f"need warn_at > stop_at >= 0, got {warn}, {stop}")
        clearance = self.min_clearance_of(follower_joints)
        if clearance < stop:
            return CollisionFlag.VIOLATION, clearance
        if clearance < warn:
            return CollisionFlag.WARNING, clearance
        return CollisionFlag.CLEAR, clearance

    def min_clearance_of(self, follower_joints) -> float:
        """Minimum clearance over capsule pairs and link-vs-table distances."""
        starts, ends = self._follower_capsules(follower_joints)
        pa, pb, qa, qb = self._buf_gather
        np.take(starts, self._pair_i, axis=0, out=pa)
        np.take(ends, self._pair_i, axis=0, out=pb)
        np.take(starts, self._pair_j, axis=0, out=qa)
        np.take(ends, self._pair_j, axis=0, out=qb)
        d = _pair_distances_nondegenerate(pa, pb, qa, qb)
        min_pair = float(np.min(d - self._pair_radii))
        table = self.config.table_z
        min_table = math.inf
        for arm in range(2):
            for ci in _TABLE_CAPSULES:
                k = arm * _CAPS_PER_ARM + ci
                zc = min(starts[k, 2], ends[k, 2]) - self._radii[k] - table
                if zc < min_table:
                    min_table = zc
        return min(min_pair, min_table)

    # ------------------------------------------------------------------
    # detectors

    def grippers_squeezed(self, s: SimState) -> bool:
        thr = self.config.squeeze_threshold
        return s.leader[6] < thr and s.leader[13] < thr

    def table_touch(self, s: SimState):
        """Per-arm finger contact with the table plane (left, right)."""
        starts, ends = self._follower_capsules(s.follower)
        eps = self.config.contact_eps
        table = self.config.table_z
        result = []
        for arm in range(2):
            clear = min(
                min(starts[arm * _CAPS_PER_ARM + ci, 2], ends[arm * _CAPS_PER_ARM + ci, 2])
                - self._radii[arm * _CAPS_PER_ARM + ci]
                - table
                for ci in _FINGER_CAPSULES
            )
            result.append(bool(clear < eps))
        return tuple(result)

    def rest_on_stop(self, s: SimState) -> bool:
        """Both leader end effectors inside the mechanical-stop boxes."""
        lo, hi = self.config.rest_aperture
        if not (lo <= s.leader[6] <= hi and lo <= s.leader[13] <= hi):
            return False
        half = self.config.rest_box_half
        for arm, model in enumerate(self._leaders):
            joints = s.leader[arm * JOINTS_PER_ARM : (arm + 1) * JOINTS_PER_ARM]
            ee = _end_effector_fast(model, joints)
            center = self.config.rest_box_centers[arm]
            if any(abs(ee[k] - center[k]) > half for k in range(3)):
                return False
        return True

    # ------------------------------------------------------------------
    # internals

    def _follower_capsules(self, joints14):
        starts = self._buf_starts
        ends = self._buf_ends
        for arm, model in enumerate(self._followers):
            j = joints14[arm * JOINTS_PER_ARM : (arm + 1) * JOINTS_PER_ARM]
            _arm_capsule_endpoints(
                model, j, starts[arm * _CAPS_PER_ARM :], ends[arm * _CAPS_PER_ARM :]
            )
        return starts, ends

    def _capsule_radii(self):
        radii = []
        for model in self._followers:
            radii.extend(spec.radius for spec in model.capsule_specs)
            radii.extend([model.finger_radius, model.finger_radius])
        return np.array(radii)

    def _build_pair_indices(self):
        pairs = []
        for arm in range(2):
            base = arm * _CAPS_PER_ARM
            for i in range(_CAPS_PER_ARM):
                for j in range(i + 1, _CAPS_PER_ARM):
                    if (i, j) not in _ADJACENT:
                        pairs.append((base + i, base + j))
        for i in range(_CAPS_PER_ARM):
            for j in range(_CAPS_PER_ARM):
                pairs.append((i, _CAPS_PER_ARM + j))
        return np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs])


def _arm_capsule_endpoints(model: ArmModel, joints, starts, ends):
    """Fill capsule endpoint rows for one arm (fast path, no validation)."""
    frames = _frames_fast(model, joints)
    for k, spec in enumerate(model.capsule_specs):
        sx, sy, sz = frames[spec.start_frame][1]
        starts[k, 0] = sx
        starts[k, 1] = sy
        starts[k, 2] = sz + spec.start_lift
        ends[k, 0], ends[k, 1], ends[k, 2] = frames[spec.end_frame][1]
    R, p = frames[6]
    half = model.finger_base_halfwidth + model.finger_aperture_halfwidth * joints[6]
    fx = (R[0][0] * model.finger_length, R[1][0] * model.finger_length, R[2][0] * model.finger_length)
    for k, side in ((4, half), (5, -half)):
        ax = p[0] + R[0][1] * side
        ay = p[1] + R[1][1] * side
        az = p[2] + R[2][1] * side
        starts[k, 0] = ax
        starts[k, 1] = ay
        starts[k, 2] = az
        ends[k, 0] = ax + fx[0]
        ends[k, 1] = ay + fx[1]
        ends[k, 2] = az + fx[2]


def _frames_fast(model: ArmModel, joints):
    """FK without limit validation, pure-python 3x3 math for speed."""
    cy = math.cos(model.base_yaw)
    sy = math.sin(model.base_yaw)
    R = ((cy, -sy, 0.0), (sy, cy, 0.0), (0.0, 0.0, 1.0))
    p = model.base_position
    frames = [(R, p)]
    for axis, offset, q in zip(model.axes, model.offsets, joints):
        R = _mat_mul(R, _axis_rot(axis, q))
        p = (
            p[0] + R[0][0] * offset[0] + R[0][1] * offset[1] + R[0][2] * offset[2],
            p[1] + R[1][0] * offset[0] + R[1][1] * offset[1] + R[1][2] * offset[2],
            p[2] + R[2][0] * offset[0] + R[2][1] * offset[1] + R[2][2] * offset[2],
        )
        frames.append((R, p))
    return frames


def _axis_rot(axis, q):
    c = math.cos(q)
    s = math.sin(q)
    if axis[2] == 1.0:
        return ((c, -s, 0.0), (s, c, 0.0), (0.0, 0.0, 1.0))
    if axis[1] == 1.0:
        return ((c, 0.0, s), (0.0, 1.0, 0.0), (-s, 0.0, c))
    if axis[0] == 1.0:
        return ((1.0, 0.0, 0.0), (0.0, c, -s), (0.0, s, c))
    return tuple(tuple(row) for row in rotation_about_axis(axis, q))


def _mat_mul(A, B):
    return tuple(
        tuple(A[i][0] * B[0][j] + A[i][1] * B[1][j] + A[i][2] * B[2][j] for j in range(3))
        for i in range(3)
    )


def _end_effector_fast(model, joints):
    return _frames_fast(model, joints)[6][1]


def _pair_distances_nondegenerate(pa, pb, qa, qb):
    """Segment-pair distances assuming no degenerate segments.

    Arm capsules always have nonzero axis length, so the degenerate
    branches of geometry.batch_segment_distances are skipped here to keep
    the 50Hz check cheap.
    """
    d1 = pb - pa
    d2 = qb - qa
    r = pa - qa
    a = np.einsum("ij,ij->i", d1, d1)
    e = np.einsum("ij,ij->i", d2, d2)
    f = np.einsum("ij,ij->i", d2, r)
    c = np.einsum("ij,ij->i", d1, r)
    b = np.einsum("ij,ij->i", d1, d2)
    denom = a * e - b * b
    parallel = denom <= 1e-12
    s = np.clip((b * f - c * e) / np.where(parallel, 1.0, denom), 0.0, 1.0)
    s[parallel] = 0.0
    t = (b * s + f) / e
    t_lo = t < 0.0
    t_hi = t > 1.0
    s = np.where(t_lo, np.clip(-c / a, 0.0, 1.0), s)
    s = np.where(t_hi, np.clip((b - c) / a, 0.0, 1.0), s)
    np.clip(t, 0.0, 1.0, out=t)
    c1 = pa + s[:, None] * d1
    c2 = qa + t[:, None] * d2
    diff = c1 - c2
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))
