"""Capsule primitives and distance queries.

Capsules (segments with radius) stand in for link geometry so that
clearance between arbitrary arm poses reduces to segment-segment distance,
which has a closed form. A negative distance approximates penetration
depth (axis distance minus radius sum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_EPS = 1e-12


@dataclass(frozen=True)
class Capsule:
    """Swept sphere between two endpoints. Degenerate a == b is a sphere."""

    a: tuple[float, float, float]
    b: tuple[float, float, float]
    radius: float

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError(f"capsule radius must be > 0, got {self.radius}")


def segment_segment_distance(p1, q1, p2, q2) -> float:
    """Minimum distance between segments [p1,q1] and [p2,q2]."""
    p1 = np.asarray(p1, float)
    q1 = np.asarray(q1, float)
    p2 = np.asarray(p2, float)
    q2 = np.asarray(q2, float)
    s, t = _closest_params(p1, q1, p2, q2)
    c1 = p1 + s * (q1 - p1)
    c2 = p2 + t * (q2 - p2)
    return float(np.linalg.norm(c1 - c2))


def _closest_params(p1, q1, p2, q2):
    """Clamped closest-point parameters (s, t) in [0,1]^2 for two segments."""
    d1 = q1 - p1
    d2 = q2 - p2
    r = p1 - p2
    a = float(d1 @ d1)
    e = float(d2 @ d2)
    f = float(d2 @ r)
    if a <= _EPS and e <= _EPS:
        return 0.0, 0.0
    if a <= _EPS:
        return 0.0, min(1.0, max(0.0, f / e))
    c = float(d1 @ r)
    if e <= _EPS:
        return min(1.0, max(0.0, -c / a)), 0.0
    b = float(d1 @ d2)
    denom = a * e - b * b
    # closest point on infinite lines, clamped to segment 1 first
    s = min(1.0, max(0.0, (b * f - c * e) / denom)) if denom > _EPS else 0.0
    t = (b * s + f) / e
    # clamp t, then recompute s against the clamped t
    if t < 0.0:
        t = 0.0
        s = min(1.0, max(0.0, -c / a))
    elif t > 1.0:
        t = 1.0
        s = min(1.0, max(0.0, (b - c) / a))
    return s, t


def capsule_distance(c1: Capsule, c2: Capsule) -> float:
    """Surface distance between two capsules; negative when penetrating.

    Exactly symmetric: operands are put in a canonical order first, so the
    same floating-point operations run regardless of argument order.
    """
    if (c1.a, c1.b, c1.radius) > (c2.a, c2.b, c2.radius):
        c1, c2 = c2, c1
    return segment_segment_distance(c1.a, c1.b, c2.a, c2.b) - c1.radius - c2.radius


def capsule_plane_clearance(c: Capsule, plane_z: float = 0.0) -> float:
    """Clearance of a capsule above the horizontal plane z = plane_z."""
    return min(c.a[2], c.b[2]) - c.radius - plane_z


def batch_segment_distances(pa, pb, qa, qb) -> np.ndarray:
    """Vectorized segment-segment distances.

    All inputs are (N, 3) arrays; row i holds one segment pair
    [pa[i], pb[i]] vs [qa[i], qb[i]]. Used by the per-tick collision check,
    which batches every capsule pair into one call.
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

    safe_a = np.where(a > _EPS, a, 1.0)
    safe_e = np.where(e > _EPS, e, 1.0)
    safe_denom = np.where(denom > _EPS, denom, 1.0)

    s = np.clip((b * f - c * e) / safe_denom, 0.0, 1.0)
    s = np.where(denom > _EPS, s, 0.0)
    t = (b * s + f) / safe_e

    t_lo = t < 0.0
    t_hi = t > 1.0
    s = np.where(t_lo, np.clip(-c / safe_a, 0.0, 1.0), s)
    s = np.where(t_hi, np.clip((b - c) / safe_a, 0.0, 1.0), s)
    t = np.clip(t, 0.0, 1.0)

    # degenerate segments: point vs segment / point vs point
    first_pt = a <= _EPS
    second_pt = e <= _EPS
    s = np.where(second_pt, np.clip(-c / safe_a, 0.0, 1.0), s)
    s = np.where(first_pt, 0.0, s)
    t = np.where(first_pt, np.clip(f / safe_e, 0.0, 1.0), t)
    t = np.where(second_pt, 0.0, t)

    c1 = pa + s[:, None] * d1
    c2 = qa + t[:, None] * d2
    diff = c1 - c2
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def rotation_about_axis(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation matrix for a unit axis."""
    x, y, z = axis
    c = math.cos(angle)
    s = math.sin(angle)
    C = 1.0 - c
    return np.array(
        [
            [x * x * C + c, x * y * C - z * s, x * z * C + y * s],
            [y * x * C + z * s, y * y * C + c, y * z * C - x * s],
            [z * x * C - y * s, z * y * C + x * s, z * z * C + c],
        ]
    )
