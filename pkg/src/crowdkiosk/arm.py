"""Kinematic model of one 6-DOF arm with a parallel gripper.

The chain is a fixed base pose followed by six revolute joints. Each joint
rotates about a configured axis and is followed by a rigid link offset, so
link frame i is

    T_i = T_{i-1} @ Rot(axis_i, q_i) @ Trans(offset_i)

Link geometry is approximated by capsules rigidly attached to the frames:
four body capsules (base column, upper arm, forearm, wrist) plus two finger
capsules whose lateral separation follows the gripper aperture.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .geometry import Capsule, rotation_about_axis

N_JOINTS = 6
JOINTS_PER_ARM = 7  # 6 revolute + gripper aperture


class JointLimitError(ValueError):
    """A joint value lies outside the model's configured limits."""


@dataclass(frozen=True)
class CapsuleSpec:
    """Capsule attached between two chain origins (indices into the FK output)."""

    name: str
    start_frame: int
    end_frame: int
    radius: float
    start_lift: float = 0.0  # z offset applied to the start point, base column only


@dataclass(frozen=True)
class ArmModel:
    axes: tuple[tuple[float, float, float], ...]
    offsets: tuple[tuple[float, float, float], ...]
    limits: tuple[tuple[float, float], ...]  # per revolute joint
    gripper_limits: tuple[float, float]
    capsule_specs: tuple[CapsuleSpec, ...]
    finger_length: float
    finger_radius: float
    finger_base_halfwidth: float
    finger_aperture_halfwidth: float
    base_position: tuple[float, float, float]
    base_yaw: float

    def __post_init__(self):
        if len(self.axes) != N_JOINTS or len(self.offsets) != N_JOINTS:
            raise ValueError("arm chain must have exactly 6 joints")
        for lo, hi in self.limits:
            if not lo < hi:
                raise ValueError(f"joint limits must satisfy lo < hi, got [{lo}, {hi}]")

    def check_joints(self, joints) -> None:
        """Raise JointLimitError if any of the 7 values is out of range."""
        if len(joints) != JOINTS_PER_ARM:
            raise ValueError(f"expected {JOINTS_PER_ARM} joint values, got {len(joints)}")
        for i, ((lo, hi), q) in enumerate(zip(self.limits, joints)):
            if not (lo <= q <= hi):
                raise JointLimitError(f"joint {i} value {q} outside [{lo}, {hi}]")
        lo, hi = self.gripper_limits
        if not (lo <= joints[6] <= hi):
            raise JointLimitError(f"gripper aperture {joints[6]} outside [{lo}, {hi}]")

    def clamp(self, joints):
        """Clamp 7 values into the configured ranges."""
        out = [min(hi, max(lo, q)) for (lo, hi), q in zip(self.limits, joints)]
        lo, hi = self.gripper_limits
        out.append(min(hi, max(lo, joints[6])))
        return out


def forward_kinematics(model: ArmModel, joints):
    """Compose the chain; returns (frames, capsules).

    frames is a list of 7 (rotation 3x3, origin 3) pairs: the base frame
    followed by one frame per joint, each taken after that joint's link
    offset. Joint values are validated against the model limits.
    """
    model.check_joints(joints)
    R = rotation_about_axis((0.0, 0.0, 1.0), model.base_yaw)
    p = np.array(model.base_position, float)
    frames = [(R, p.copy())]
    for axis, offset, q in zip(model.axes, model.offsets, joints):
        R = R @ rotation_about_axis(axis, q)
        p = p + R @ np.asarray(offset, float)
        frames.append((R, p.copy()))
    return frames, _capsules_from_frames(model, frames, joints[6])


def _capsules_from_frames(model, frames, aperture):
    caps = []
    for spec in model.capsule_specs:
        a = frames[spec.start_frame][1].copy()
        a[2] += spec.start_lift
        b = frames[spec.end_frame][1]
        caps.append(Capsule(tuple(a), tuple(b), spec.radius))
    R_ee, p_ee = frames[-1]
    half = model.finger_base_halfwidth + model.finger_aperture_halfwidth * aperture
    for side in (+1.0, -1.0):
        a = p_ee + R_ee @ np.array([0.0, side * half, 0.0])
        b = a + R_ee @ np.array([model.finger_length, 0.0, 0.0])
        caps.append(Capsule(tuple(a), tuple(b), model.finger_radius))
    return caps


def end_effector(model: ArmModel, joints) -> np.ndarray:
    frames, _ = forward_kinematics(model, joints)
    return frames[-1][1]


_AXIS_BY_NAME = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}


def _parse_vec3(text):
    parts = [float(v) for v in text.replace(",", " ").split()]
    if len(parts) != 3:
        raise ValueError(f"expected 3 numbers, got {text!r}")
    return tuple(parts)


def _parse_pairs(text):
    return tuple(tuple(float(v) for v in pair.split(":")) for pair in text.split())


@dataclass(frozen=True)
class ArmPairConfig:
    """Full rig description: leader and follower arm pairs plus thresholds.

    Loaded from a plain-text key/value file (SI units throughout); the
    schema is documented in docs/arm_config.md and the shipped default
    lives in crowdkiosk/data/default_arm_pair.cfg.
    """

    follower_left: ArmModel
    follower_right: ArmModel
    leader_left: ArmModel
    leader_right: ArmModel
    table_z: float
    home_pose: tuple[float, ...]  # 7 values, same local pose for both arms
    rest_pose: tuple[float, ...]
    warn_at: float
    stop_at: float
    squeeze_threshold: float
    contact_eps: float
    rate_limit: float  # rad/s (and aperture units/s) for follower tracking
    raise_duration: float  # seconds for raise/lower interpolation
    rest_box_half: float
    rest_aperture: tuple[float, float]
    rest_box_centers: tuple[tuple[float, float, float], tuple[float, float, float]]

    def full_home(self):
        return tuple(self.home_pose) * 2

    def full_rest(self):
        return tuple(self.rest_pose) * 2


def load_arm_pair(path=None) -> ArmPairConfig:
    """Load a rig config; with no path, the packaged default is used."""
    cp = configparser.ConfigParser()
    if path is None:
        text = resources.files("crowdkiosk.data").joinpath("default_arm_pair.cfg").read_text()
        cp.read_string(text)
    else:
        with open(path) as fh:
            cp.read_file(fh)

    chain = cp["chain"]
    axes = tuple(_AXIS_BY_NAME[a] for a in chain["axes"].split())
    offsets = tuple(_parse_vec3(v) for v in chain["offsets"].split(";"))
    limits = _parse_pairs(chain["limits"])
    gripper_limits = tuple(float(v) for v in chain["gripper_limits"].split(":"))

    caps = cp["capsules"]
    specs = []
    for name in caps["names"].split():
        start, end, radius, *lift = caps[name].split()
        specs.append(
            CapsuleSpec(name, int(start), int(end), float(radius), float(lift[0]) if lift else 0.0)
        )
    fingers = cp["fingers"]

    def make_arm(pos, yaw):
        return ArmModel(
            axes=axes,
            offsets=offsets,
            limits=limits,
            gripper_limits=gripper_limits,
            capsule_specs=tuple(specs),
            finger_length=float(fingers["length"]),
            finger_radius=float(fingers["radius"]),
            finger_base_halfwidth=float(fingers["base_halfwidth"]),
            finger_aperture_halfwidth=float(fingers["aperture_halfwidth"]),
            base_position=pos,
            base_yaw=yaw,
        )

    rig = cp["rig"]
    fl = make_arm(_parse_vec3(rig["follower_left_base"]), float(rig["follower_left_yaw"]))
    fr = make_arm(_parse_vec3(rig["follower_right_base"]), float(rig["follower_right_yaw"]))
    ll = make_arm(_parse_vec3(rig["leader_left_base"]), float(rig["leader_left_yaw"]))
    lr = make_arm(_parse_vec3(rig["leader_right_base"]), float(rig["leader_right_yaw"]))

    poses = cp["poses"]
    thresholds = cp["thresholds"]
    rest = cp["rest_detection"]
    return ArmPairConfig(
        follower_left=fl,
        follower_right=fr,
        leader_left=ll,
        leader_right=lr,
        table_z=float(rig["table_z"]),
        home_pose=tuple(float(v) for v in poses["home"].split()),
        rest_pose=tuple(float(v) for v in poses["rest"].split()),
        warn_at=float(thresholds["warn_at"]),
        stop_at=float(thresholds["stop_at"]),
        squeeze_threshold=float(thresholds["squeeze_threshold"]),
        contact_eps=float(thresholds["contact_eps"]),
        rate_limit=float(thresholds["rate_limit"]),
        raise_duration=float(thresholds["raise_duration"]),
        rest_box_half=float(rest["box_half"]),
        rest_aperture=tuple(float(v) for v in rest["aperture_range"].split(":")),
        rest_box_centers=(
            _parse_vec3(rest["left_center"]),
            _parse_vec3(rest["right_center"]),
        ),
    )
