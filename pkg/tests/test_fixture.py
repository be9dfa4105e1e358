"""The synthetic reference dataset hits every published aggregate."""

from collections import defaultdict

import pytest

from crowdkiosk.analytics import (
    composition,
    leaderboard_cohort_compare,
    likert_aggregate,
    play_fraction,
    task_time_ratio,
    tutorial_vs_task_quality,
    usage_stats,
)
from crowdkiosk.fixture import build_reference_dataset
from crowdkiosk.model import validate_annotation, validate_episode
from crowdkiosk.stats import mann_whitney_u


@pytest.fixture(scope="module")
def ds():
    return build_reference_dataset()


def test_every_episode_valid_and_annotated(ds):
    assert len(ds.episodes) == 817
    for e in ds.episodes:
        assert validate_episode(e) == []
        segs = ds.annotations[e.episode_id]
        assert validate_annotation(e, segs) == []
    assert ds.violations() == []


def test_composition_matches_published_aggregates(ds):
    rep = composition(ds)
    assert rep.percent("task") == pytest.approx(54.2, abs=0.1)
    assert rep.percent("tutorial") == pytest.approx(9.6, abs=0.1)
    assert rep.percent("play") == pytest.approx(36.1, abs=0.1)
    assert sum(rep.fractions.values()) == pytest.approx(1.0, abs=1e-9)


def test_scene_ratios(ds):
    assert task_time_ratio(ds, "hi_chew", "tootsie_roll") == pytest.approx(2.00, abs=0.01)
    assert task_time_ratio(ds, "jelly_bean", "hershey_kiss") == pytest.approx(1.50, abs=0.01)
    assert task_time_ratio(ds, "hi_chew_ziploc", "hi_chew_bin") == pytest.approx(4.18, abs=0.01)


def test_play_fractions(ds):
    assert play_fraction(ds, "A") == pytest.approx(0.507, abs=0.001)
    assert play_fraction(ds, "B") == pytest.approx(0.353, abs=0.001)


def test_usage_totals_exact(ds):
    u = usage_stats(ds)
    assert u["total_users"] == 231
    assert u["total_episodes"] == 817
    assert u["episodes_by_scene"] == {"A": 129, "B": 381, "C": 307}


def test_hour_histogram_peaks_at_13(ds):
    hours = usage_stats(ds)["episodes_by_hour"]
    peak = max(hours, key=hours.get)
    assert peak == 13
    assert hours[13] > max(v for h, v in hours.items() if h != 13)


def test_cohort_effects(ds):
    cc = leaderboard_cohort_compare(ds)
    assert cc.visitors == 77 and cc.others == 154
    assert cc.quantity.p_two_sided < 0.001
    assert cc.quality.p_two_sided < 0.05
    assert cc.quantity_means[0] > cc.quantity_means[1]
    assert cc.quality_means[0] > cc.quality_means[1]


def test_cohort_null_calibration(ds):
    # identically drawn cohorts stay insignificant in >= 90 of 100 runs
    import random

    ok = 0
    for seed in range(100):
        rng = random.Random(seed)
        xs = [rng.gauss(3.0, 1.0) for _ in range(77)]
        ys = [rng.gauss(3.0, 1.0) for _ in range(154)]
        if mann_whitney_u(xs, ys).p_two_sided >= 0.05:
            ok += 1
    assert ok >= 90


def test_likert_histogram_matches_brute_force(ds):
    # independent recomputation of per-user minima from raw surveys
    owner = {e.episode_id: e.user_id for e in ds.episodes}
    raw = defaultdict(lambda: defaultdict(list))
    for eid, s in ds.surveys.items():
        for q in ("intuitive", "interesting", "wanted"):
            raw[owner[eid]][q].append(getattr(s, q))
    expected = {q: {r: 0 for r in range(1, 6)} for q in ("intuitive", "interesting", "wanted")}
    for user, ratings in raw.items():
        for q in ("intuitive", "interesting", "wanted"):
            expected[q][min(ratings[q])] += 1
    agg = likert_aggregate(ds)
    assert agg["histograms"] == expected
    # every surveyed user contributes exactly once per question
    for q in expected:
        assert sum(expected[q].values()) == len(raw)


def test_tutorial_scores_cover_all_classes(ds):
    rows = tutorial_vs_task_quality(ds)
    assert len(rows) == 231  # every user has both tutorial and task data
    scores = {s for _, s, _ in rows}
    assert scores == {0, 1, 2}
    # loose positive association: mean task quality rises with tutorial score
    by_score = defaultdict(list)
    for _, s, q in rows:
        by_score[s].append(q)
    means = {s: sum(v) / len(v) for s, v in by_score.items()}
    assert means[2] > means[0]


def test_deterministic_rebuild(ds):
    again = build_reference_dataset()
    assert [e.episode_id for e in again.episodes] == [e.episode_id for e in ds.episodes]
    assert again.episodes == ds.episodes
    assert again.annotations == ds.annotations
    assert again.surveys == ds.surveys
    assert again.leaderboard_visits == ds.leaderboard_visits
