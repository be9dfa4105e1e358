"""Independent reference computations the test suite checks against.

Everything here deliberately avoids the library's own algorithms: distances
come from dense parameter sampling, kinematics from explicitly written 4x4
homogeneous matrices, and test statistics from direct enumeration over
labelings. Keep it slow and obvious.
"""

import itertools
from math import comb

import numpy as np


def sampled_segment_distance(p1, q1, p2, q2, n=10_000):
    """Min distance between two segments by dense sampling of the first.

    Samples n points along [p1,q1] and takes the exact point-to-segment
    distance to [p2,q2] for each; the sampling error is bounded by
    |q1-p1| / (2n), far below the 1e-3 tolerance used in tests.
    """
    p1 = np.asarray(p1, float)
    q1 = np.asarray(q1, float)
    p2 = np.asarray(p2, float)
    q2 = np.asarray(q2, float)
    ts = np.linspace(0.0, 1.0, n)
    pts = p1[None, :] + ts[:, None] * (q1 - p1)[None, :]
    ab = q2 - p2
    denom = float(ab @ ab)
    if denom < 1e-15:
        return float(np.min(np.linalg.norm(pts - p2, axis=1)))
    s = np.clip((pts - p2) @ ab / denom, 0.0, 1.0)
    proj = p2[None, :] + s[:, None] * ab[None, :]
    return float(np.min(np.linalg.norm(pts - proj, axis=1)))


def sampled_capsule_distance(cap1, cap2, n=10_000):
    return sampled_segment_distance(cap1.a, cap1.b, cap2.a, cap2.b, n) - cap1.radius - cap2.radius


def homogeneous(R, p):
    T = np.eye(4)
    T[:3, :3] = R
    T[:3, 3] = p
    return T


def rot_z(q):
    c, s = np.cos(q), np.sin(q)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def rot_y(q):
    c, s = np.cos(q), np.sin(q)
    return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])


def two_link_chain_position(q1, q2, l1, l2):
    """End of a 2-link chain (yaw about z then pitch about y) via explicit
    homogeneous transforms, for checking the library's frame composition."""
    T = homogeneous(rot_z(q1), (0, 0, 0)) @ homogeneous(np.eye(3), l1)
    T = T @ homogeneous(rot_y(q2), (0, 0, 0)) @ homogeneous(np.eye(3), l2)
    return T[:3, 3]


def mann_whitney_enumeration(xs, ys):
    """Two-sided p by enumerating every labeling of the pooled sample.

    U is computed by direct pair counting (wins plus half-ties), not rank
    sums. Feasible only for small samples; the tests keep n1+n2 <= 12.
    """
    pooled = list(xs) + list(ys)
    n1 = len(xs)
    n = len(pooled)

    def pair_u(sample_x, sample_y):
        u = 0.0
        for x in sample_x:
            for y in sample_y:
                if x > y:
                    u += 1.0
                elif x == y:
                    u += 0.5
        return u

    u_obs = pair_u(xs, ys)
    u_lo = min(u_obs, n1 * (n - n1) - u_obs)
    count = 0
    total = 0
    for idx in itertools.combinations(range(n), n1):
        chosen = set(idx)
        sx = [pooled[i] for i in range(n) if i in chosen]
        sy = [pooled[i] for i in range(n) if i not in chosen]
        u = pair_u(sx, sy)
        total += 1
        if min(u, n1 * (n - n1) - u) <= u_lo + 1e-9:
            count += 1
    return u_obs, min(1.0, count / total)


def exact_u_tail_count(n1, n2, u_lo):
    """Number of tie-free rank assignments with U <= u_lo (recurrence-free:
    direct enumeration over position subsets)."""
    count = 0
    for subset in itertools.combinations(range(n1 + n2), n1):
        u = sum(p + 1 for p in subset) - n1 * (n1 + 1) // 2
        if u <= u_lo + 1e-9:
            count += 1
    return count, comb(n1 + n2, n1)


def exact_u_distribution(n1, n2):
    """{u: count} over all tie-free rank assignments, by subset enumeration."""
    dist = {}
    for subset in itertools.combinations(range(n1 + n2), n1):
        u = sum(p + 1 for p in subset) - n1 * (n1 + 1) // 2
        dist[u] = dist.get(u, 0) + 1
    return dist


def pair_count_u(xs, ys):
    """U for xs by direct pair counting (wins + half ties)."""
    u = 0.0
    for x in xs:
        for y in ys:
            if x > y:
                u += 1.0
            elif x == y:
                u += 0.5
    return u


def two_sided_p_from_distribution(dist, n1, n2, u_obs):
    total = comb(n1 + n2, n1)
    u_lo = min(u_obs, n1 * n2 - u_obs)
    tail = sum(c for u, c in dist.items() if u <= u_lo + 1e-9)
    return min(1.0, 2 * tail / total)


def tutorial_stream_qualifies(stream):
    """Forward scan for the ordered detector sequence a tutorial needs.

    stream is a list of observation tuples
    (phase_home, squeezed, left_touch, right_touch, rest_on_stop).
    Mirrors the stage semantics by explicit index arithmetic: one
    observation is consumed per stage advance, touches latch only while
    the touch stage is active.
    """
    i = 0
    n = len(stream)
    while i < n and not stream[i][0]:
        i += 1
    if i >= n:
        return False
    i += 1  # squeeze counts only after the home observation
    while i < n and not stream[i][1]:
        i += 1
    if i >= n:
        return False
    i += 1
    left = right = False
    while i < n:
        left = left or stream[i][2]
        right = right or stream[i][3]
        if left and right:
            break
        i += 1
    if i >= n:
        return False
    i += 1
    while i < n and not stream[i][4]:
        i += 1
    return i < n
