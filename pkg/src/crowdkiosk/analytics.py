"""Dataset analytics: composition, incentive-effect ratios, cohort tests,
survey aggregation, usage statistics, and checklist scoring.

Everything is a pure function over a DatasetIndex. Step counts come from
annotation segment lengths, so composition requires every episode in the
index to be annotated.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass

from .model import DatasetIndex, LabelKind
from .stats import UTestResult, mann_whitney_u

UNANNOTATED = "UNANNOTATED"
DIVIDE_BY_ZERO = "DIVIDE_BY_ZERO"
EMPTY_COHORT = "EMPTY_COHORT"
EMPTY_SCENE = "EMPTY_SCENE"
LENGTH_MISMATCH = "LENGTH_MISMATCH"


class AnalyticsError(Exception):
    def __init__(self, code, message):
        super().__init__(f"{code}: {message}")
        self.code = code


def _segments(ds: DatasetIndex):
    """Yield (episode, segment) pairs; every episode must be annotated."""
    for e in ds.episodes:
        segs = ds.annotations.get(e.episode_id)
        if segs is None:
            raise AnalyticsError(UNANNOTATED, f"episode {e.episode_id} has no annotation")
        for s in segs:
            yield e, s


def _label_name(segment):
    if segment.label.kind is LabelKind.TASK:
        return segment.label.task_id
    return segment.label.kind.value


@dataclass(frozen=True)
class CompositionReport:
    timesteps: dict  # (scene_id, label name, quality) -> steps
    fractions: dict  # {"task","tutorial","play"} -> fraction of all steps
    total_steps: int

    def percent(self, key) -> float:
        return 100.0 * self.fractions[key]


def composition(ds: DatasetIndex) -> CompositionReport:
    steps = Counter()
    by_kind = Counter()
    for e, s in _segments(ds):
        n = s.end - s.start
        steps[(e.scene_id, _label_name(s), s.quality)] += n
        by_kind[s.label.kind] += n
    total = sum(by_kind.values())
    if total == 0:
        raise AnalyticsError(EMPTY_SCENE, "dataset has no annotated timesteps")
    fractions = {
        "task": by_kind[LabelKind.TASK] / total,
        "tutorial": by_kind[LabelKind.TUTORIAL] / total,
        "play": by_kind[LabelKind.PLAY] / total,
    }
    return CompositionReport(timesteps=dict(steps), fractions=fractions, total_steps=total)


def task_timesteps(ds: DatasetIndex) -> dict:
    out = Counter()
    for e, s in _segments(ds):
        if s.label.kind is LabelKind.TASK:
            out[s.label.task_id] += s.end - s.start
    return dict(out)


def task_time_ratio(ds: DatasetIndex, task_a, task_b) -> float:
    steps = task_timesteps(ds)
    denom = steps.get(task_b, 0)
    if denom == 0:
        raise AnalyticsError(DIVIDE_BY_ZERO, f"task {task_b!r} has zero timesteps")
    return steps.get(task_a, 0) / denom


def play_fraction(ds: DatasetIndex, scene_id) -> float:
    play = 0
    total = 0
    for e, s in _segments(ds):
        if e.scene_id != scene_id:
            continue
        n = s.end - s.start
        total += n
        if s.label.kind is LabelKind.PLAY:
            play += n
    if total == 0:
        raise AnalyticsError(EMPTY_SCENE, f"scene {scene_id!r} has no annotated timesteps")
    return play / total


# -- cohort comparison --------------------------------------------------------


def episodes_per_user(ds: DatasetIndex) -> dict:
    counts = Counter(e.user_id for e in ds.episodes)
    return dict(counts)


def mean_task_quality_per_user(ds: DatasetIndex) -> dict:
    """Timestep-weighted mean quality over task-labeled segments; users
    with no task segments have no defined quality and are absent."""
    steps = defaultdict(int)
    weighted = defaultdict(int)
    for e, s in _segments(ds):
        if s.label.kind is LabelKind.TASK:
            n = s.end - s.start
            steps[e.user_id] += n
            weighted[e.user_id] += n * s.quality
    return {u: weighted[u] / steps[u] for u in steps}


@dataclass(frozen=True)
class CohortComparison:
    quantity: UTestResult
    quality: UTestResult
    visitors: int
    others: int
    quantity_means: tuple  # (visitors, others)
    quality_means: tuple


def leaderboard_cohort_compare(ds: DatasetIndex) -> CohortComparison:
    counts = episodes_per_user(ds)
    visitors = sorted(u for u in counts if u in ds.leaderboard_visits)
    others = sorted(u for u in counts if u not in ds.leaderboard_visits)
    if not visitors or not others:
        raise AnalyticsError(EMPTY_COHORT, "both leaderboard cohorts must be nonempty")
    qty_v = [counts[u] for u in visitors]
    qty_o = [counts[u] for u in others]
    quality = mean_task_quality_per_user(ds)
    qual_v = [quality[u] for u in visitors if u in quality]
    qual_o = [quality[u] for u in others if u in quality]
    if not qual_v or not qual_o:
        raise AnalyticsError(EMPTY_COHORT, "a cohort has no users with task segments")
    return CohortComparison(
        quantity=mann_whitney_u(qty_v, qty_o),
        quality=mann_whitney_u(qual_v, qual_o),
        visitors=len(visitors),
        others=len(others),
        quantity_means=(_mean(qty_v), _mean(qty_o)),
        quality_means=(_mean(qual_v), _mean(qual_o)),
    )


def _mean(xs):
    return sum(xs) / len(xs)


# -- surveys ------------------------------------------------------------------

LIKERT_QUESTIONS = ("intuitive", "interesting", "wanted")


def likert_aggregate(ds: DatasetIndex) -> dict:
    """Per-question histogram of each user's minimum rating, plus the
    distribution of per-user mean task quality at each minimum rating."""
    episode_user = {e.episode_id: e.user_id for e in ds.episodes}
    per_user = defaultdict(lambda: defaultdict(list))
    for eid, survey in ds.surveys.items():
        user = episode_user.get(eid)
        if user is None:
            continue
        for q in LIKERT_QUESTIONS:
            per_user[user][q].append(getattr(survey, q))
    quality = mean_task_quality_per_user(ds)
    histograms = {q: {r: 0 for r in range(1, 6)} for q in LIKERT_QUESTIONS}
    quality_by_rating = {q: {r: [] for r in range(1, 6)} for q in LIKERT_QUESTIONS}
    minima = defaultdict(dict)
    for user, ratings in per_user.items():
        for q in LIKERT_QUESTIONS:
            m = min(ratings[q])
            minima[user][q] = m
            histograms[q][m] += 1
            if user in quality:
                quality_by_rating[q][m].append(quality[user])
    return {
        "histograms": histograms,
        "quality_by_rating": quality_by_rating,
        "minima": dict(minima),
    }


# -- tutorial correlation -------------------------------------------------------


def tutorial_vs_task_quality(ds: DatasetIndex) -> list:
    """(user_id, tutorial score, mean task quality) per user.

    The tutorial period is the user's episodes that contain tutorial
    segments; any play labeling inside those episodes scores 0, otherwise
    the minimum tutorial segment quality (1 or 2). Users without task
    segments have no defined mean and are excluded.
    """
    tut_quality = defaultdict(lambda: 2)
    saw_tutorial = set()
    off_task = set()
    for e in ds.episodes:
        segs = ds.annotations.get(e.episode_id)
        if segs is None:
            raise AnalyticsError(UNANNOTATED, f"episode {e.episode_id} has no annotation")
        kinds = {s.label.kind for s in segs}
        if LabelKind.TUTORIAL not in kinds:
            continue
        saw_tutorial.add(e.user_id)
        if LabelKind.PLAY in kinds:
            off_task.add(e.user_id)
        for s in segs:
            if s.label.kind is LabelKind.TUTORIAL:
                tut_quality[e.user_id] = min(tut_quality[e.user_id], s.quality)
    task_quality = mean_task_quality_per_user(ds)
    out = []
    for user in sorted(saw_tutorial):
        if user not in task_quality:
            continue
        score = 0 if user in off_task else tut_quality[user]
        out.append((user, score, task_quality[user]))
    return out


# -- usage --------------------------------------------------------------------


def usage_stats(ds: DatasetIndex) -> dict:
    users_by_day = defaultdict(set)
    episodes_by_day = Counter()
    episodes_by_hour = Counter()
    episodes_by_scene = Counter()
    first_seen = {}
    for e in sorted(ds.episodes, key=lambda e: e.start_wallclock):
        day = e.start_wallclock.date()
        users_by_day[day].add(e.user_id)
        episodes_by_day[day] += 1
        episodes_by_hour[e.start_wallclock.hour] += 1
        episodes_by_scene[e.scene_id] += 1
        first_seen.setdefault(e.user_id, day)
    new_users_by_day = Counter(first_seen.values())
    return {
        "total_users": len(first_seen),
        "total_episodes": len(ds.episodes),
        "episodes_by_scene": dict(episodes_by_scene),
        "users_per_day": {d: len(u) for d, u in sorted(users_by_day.items())},
        "new_users_per_day": dict(sorted(new_users_by_day.items())),
        "episodes_per_day": dict(sorted(episodes_by_day.items())),
        "episodes_by_hour": {h: episodes_by_hour.get(h, 0) for h in range(24)},
    }


# -- checklist scoring ----------------------------------------------------------


def normalized_return(completed, checklist) -> float:
    """Percentage of checklist subtasks completed, 0..100."""
    items = checklist.subtask_checklist if hasattr(checklist, "subtask_checklist") else checklist
    if len(completed) != len(items):
        raise AnalyticsError(
            LENGTH_MISMATCH,
            f"completed vector has {len(completed)} entries for {len(items)} subtasks",
        )
    if not items:
        raise AnalyticsError(LENGTH_MISMATCH, "checklist is empty")
    return 100.0 * sum(bool(v) for v in completed) / len(items)


def normalized_return_batch(trials, checklist) -> tuple:
    """Mean and sample standard deviation of normalized return over trials."""
    scores = [normalized_return(t, checklist) for t in trials]
    mean = _mean(scores)
    if len(scores) < 2:
        return mean, 0.0
    var = sum((s - mean) ** 2 for s in scores) / (len(scores) - 1)
    return mean, math.sqrt(var)
