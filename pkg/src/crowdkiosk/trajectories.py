"""Deterministic scripted command sequences for demos and soak tests.

A command is 14 leader values [left 6 joints + aperture, right ditto].
The tutorial script drives the detectors through the full onboarding
sequence: squeeze both grippers, touch the table with each arm, then rest
on the mechanical stops.
"""

from __future__ import annotations

import math

from .arm import ArmPairConfig

# both arms use the same local joints; same-sign yaws send them to
# opposite world corners, so the pose stays clear of self-collision
TOUCH_POSE = (0.3, -0.5, 0.842, 0.0, 1.228, 0.0)


def full(pose7):
    return tuple(pose7) * 2


def with_aperture(pose6, aperture):
    return tuple(pose6) + (aperture,)


def hold(command, ticks):
    return [tuple(command)] * ticks


def ramp(start, goal, ticks):
    """Linear command ramp; slow enough for the follower rate limit when
    ticks >= max joint delta / (rate * dt)."""
    out = []
    for k in range(1, ticks + 1):
        a = k / ticks
        out.append(tuple(s + (g - s) * a for s, g in zip(start, goal)))
    return out


def tutorial_script(config: ArmPairConfig, settle=15):
    """Commands traversing squeeze -> table touch -> rest-on-stop."""
    home6 = config.home_pose[:6]
    rest6 = config.rest_pose[:6]
    open_ap = 0.7
    squeezed_ap = 0.05
    rest_ap = 0.7  # inside the configured rest aperture range

    home_open = full(with_aperture(home6, open_ap))
    home_squeezed = full(with_aperture(home6, squeezed_ap))
    touch = full(with_aperture(TOUCH_POSE, open_ap))
    rest = full(with_aperture(rest6, rest_ap))

    script = []
    script += hold(home_open, settle)
    script += hold(home_squeezed, settle)  # squeeze both grippers
    script += ramp(home_squeezed, touch, 60)
    script += hold(touch, settle)  # both fingers reach the table
    script += ramp(touch, rest, 60)
    script += hold(rest, settle)  # leader grippers into the stop grooves
    return script


def teleop_wiggle(config: ArmPairConfig, ticks, amplitude=0.18, aperture=0.6):
    """Smooth periodic motion around home for scripted teleop sessions."""
    home6 = config.home_pose[:6]
    out = []
    for k in range(ticks):
        t = k * 0.02
        delta = (
            0.4 * amplitude * math.sin(0.9 * t),
            amplitude * math.sin(0.6 * t),
            amplitude * math.sin(0.8 * t + 0.5),
            0.0,
            amplitude * math.sin(1.1 * t + 1.0),
            0.3 * amplitude * math.sin(0.7 * t),
        )
        pose = tuple(h + d for h, d in zip(home6, delta))
        ap = aperture + 0.3 * math.sin(1.3 * t)
        out.append(full(with_aperture(pose, ap)))
    return out
