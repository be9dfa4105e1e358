"""Mann-Whitney U against the enumeration oracle and scipy cross-check."""

import math
import random

import pytest
from scipy import stats as scipy_stats

from crowdkiosk.stats import Method, mann_whitney_u

from .oracles import exact_u_tail_count, mann_whitney_enumeration


def test_separated_samples_exact():
    # all of ys above xs: U = 0; enumeration gives 2 of C(6,3)=20 labelings
    r = mann_whitney_u([1, 2, 3], [4, 5, 6])
    assert r.U == 0
    assert r.method is Method.EXACT
    assert r.p_two_sided == pytest.approx(0.1, abs=1e-12)


def test_identical_multisets_p_one():
    xs = [1.0, 2.0, 3.0]
    r = mann_whitney_u(xs, list(xs))
    assert r.U == pytest.approx(len(xs) ** 2 / 2)
    assert r.p_two_sided == 1.0


def test_empty_sample_rejected():
    with pytest.raises(ValueError):
        mann_whitney_u([], [1.0])
    with pytest.raises(ValueError):
        mann_whitney_u([1.0], [])


def test_u_statistics_sum_to_n1n2():
    rng = random.Random(5)
    for _ in range(200):
        n1 = rng.randrange(1, 10)
        n2 = rng.randrange(1, 10)
        # values with deliberate ties
        xs = [rng.randrange(0, 6) for _ in range(n1)]
        ys = [rng.randrange(0, 6) for _ in range(n2)]
        ux = mann_whitney_u(xs, ys, method="approx").U
        uy = mann_whitney_u(ys, xs, method="approx").U
        assert ux + uy == pytest.approx(n1 * n2, abs=1e-12)


def test_exact_matches_enumeration_oracle_small():
    rng = random.Random(11)
    for _ in range(120):
        n1 = rng.randrange(1, 7)
        n2 = rng.randrange(1, 7)
        xs, ys = _tie_free_samples(rng, n1, n2)
        r = mann_whitney_u(xs, ys)
        assert r.method is Method.EXACT
        u_oracle, p_oracle = mann_whitney_enumeration(xs, ys)
        assert r.U == pytest.approx(u_oracle, abs=1e-12)
        assert r.p_two_sided == pytest.approx(p_oracle, abs=1e-12)


def test_exact_tail_counts_against_position_enumeration():
    for n1, n2 in [(3, 3), (4, 5), (6, 4), (7, 7)]:
        for u_lo in range(0, n1 * n2 // 2 + 1):
            count, total = exact_u_tail_count(n1, n2, u_lo)
            r_p = min(1.0, 2 * count / total)
            # drive the implementation to an observed U of u_lo
            xs, ys = _samples_with_u(n1, n2, u_lo)
            r = mann_whitney_u(xs, ys, method="exact")
            assert r.p_two_sided == pytest.approx(r_p, abs=1e-12)


def _samples_with_u(n1, n2, u):
    """Construct tie-free samples with exactly u x-over-y wins."""
    # start with all x below all y (U=0), then promote x values one by one
    xs = [float(i) for i in range(n1)]
    ys = [float(n1 + i) for i in range(n2)]
    remaining = u
    for i in reversed(range(n1)):
        wins = min(n2, remaining)
        # lift x_i above the smallest `wins` y values; the per-i epsilon
        # keeps lifted values distinct (tie-free) without adding wins
        if wins:
            xs[i] = ys[wins - 1] + 0.5 + 0.001 * i
        remaining -= wins
        if remaining == 0:
            break
    return xs, ys


def test_sample_construction_helper():
    for n1, n2 in [(3, 4), (5, 5)]:
        for u in range(n1 * n2 + 1):
            xs, ys = _samples_with_u(n1, n2, u)
            assert sum(1 for x in xs for y in ys if x > y) == u


def test_approx_close_to_exact_at_7_7():
    rng = random.Random(77)
    worst = 0.0
    for _ in range(200):
        xs, ys = _tie_free_samples(rng, 7, 7)
        exact = mann_whitney_u(xs, ys, method="exact").p_two_sided
        approx = mann_whitney_u(xs, ys, method="approx").p_two_sided
        worst = max(worst, abs(exact - approx))
    assert worst < 0.005


def test_rank_invariance_under_monotone_transform():
    rng = random.Random(13)
    for _ in range(50):
        xs = [rng.uniform(0, 10) for _ in range(8)]
        ys = [rng.uniform(2, 12) for _ in range(9)]
        base = mann_whitney_u(xs, ys)
        for f in (math.exp, lambda v: 3.0 * v - 7.0, lambda v: v**3):
            r = mann_whitney_u([f(v) for v in xs], [f(v) for v in ys])
            assert r.p_two_sided == pytest.approx(base.p_two_sided, abs=1e-12)
            assert r.U == pytest.approx(base.U, abs=1e-12)


def test_null_calibration():
    rng = random.Random(2024)
    ok = 0
    for _ in range(100):
        xs = [rng.gauss(0, 1) for _ in range(30)]
        ys = [rng.gauss(0, 1) for _ in range(30)]
        if mann_whitney_u(xs, ys).p_two_sided >= 0.05:
            ok += 1
    assert ok >= 90


def test_agrees_with_scipy_asymptotic_with_ties():
    rng = random.Random(3)
    for _ in range(60):
        n1 = rng.randrange(8, 25)
        n2 = rng.randrange(8, 25)
        xs = [rng.randrange(0, 8) for _ in range(n1)]
        ys = [rng.randrange(1, 9) for _ in range(n2)]
        ys[0] = xs[0]  # guarantee at least one tie: the plain CC-normal path
        r = mann_whitney_u(xs, ys, method="approx")
        ref = scipy_stats.mannwhitneyu(xs, ys, alternative="two-sided", method="asymptotic")
        assert r.U == pytest.approx(float(ref.statistic), abs=1e-9)
        assert r.p_two_sided == pytest.approx(float(ref.pvalue), abs=1e-9)


def test_exact_with_ties_rejected():
    with pytest.raises(ValueError):
        mann_whitney_u([1, 1, 2], [2, 3, 4], method="exact")


def _tie_free_samples(rng, n1, n2):
    vals = rng.sample(range(10_000), n1 + n2)
    return [float(v) for v in vals[:n1]], [float(v) for v in vals[n1:]]
