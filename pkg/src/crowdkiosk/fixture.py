"""Synthetic reference dataset for analytics regression tests and demos.

This is a TEST ASSET, not field data: it deterministically constructs 817
episodes from 231 users across three scenes so that every headline
aggregate lands on its published target simultaneously:

    scene A: 20000 steps  = hi_chew 5306 + tootsie_roll 2653
                            + tutorial 1901 + play 10140      (play 50.7%)
    scene B: 40000 steps  = hershey_kiss 8800 + jelly_bean 13200
                            + tutorial 3880 + play 14120      (play 35.3%)
    scene C: 43060 steps  = hi_chew_bin 5000 + hi_chew_ziploc 20900
                            + tutorial 4164 + play 12996

    totals: 103060 steps -> task 54.20%, tutorial 9.65%, play 36.15%
    ratios: 2.00 (A), 1.50 (B), 4.18 (C); episodes 129/381/307

Leaderboard visitors (77 of 231) receive more episodes per user and
higher task quality than non-visitors, so the cohort comparison comes out
strongly significant for quantity and significant for quality.
"""

from __future__ import annotations

from datetime import date, datetime, timedelta

from .model import (
    AnnotationSegment,
    CollisionFlag,
    DatasetIndex,
    Episode,
    EventTally,
    Frame,
    Label,
    SurveyResponse,
    Termination,
    UserProfile,
    default_scenes,
)

NEUTRAL_JOINTS = (0.0, -1.0, 1.0, 0.0, 0.5, 0.0, 0.5) * 2

# events that derive_quality maps onto each target score
TASK_EVENTS = {
    3: EventTally(1, True, False, False, False, True),
    2: EventTally(3, True, False, False, False, True),
    1: EventTally(5, True, False, False, False, True),
}
TUTORIAL_EVENTS = {2: EventTally(0, True), 1: EventTally(1, True)}

PLAY_IN_TUTORIAL_LEN = 12

# chronological hour weights; 13:00 is strictly the most common hour
HOUR_WEIGHTS = {9: 2, 10: 4, 11: 7, 12: 10, 13: 15, 14: 10, 15: 7, 16: 4, 17: 2}

SCENE_PLAN = {
    "A": {
        "days": (date(2024, 11, 4), date(2024, 11, 4)),
        "users": 40,
        "visitors": 13,
        "tutorial_steps": 1901,
        "play_steps": 10140,
        "tasks": {"hi_chew": 5306, "tootsie_roll": 2653},
        "task_episodes": {"hi_chew": 59, "tootsie_roll": 30},
        "visitor_regular": [4] * 9 + [3] * 4,
        "other_regular": [2] * 14 + [1] * 13,
    },
    "B": {
        "days": (date(2024, 11, 5), date(2024, 11, 8)),
        "users": 110,
        "visitors": 37,
        "tutorial_steps": 3880,
        "play_steps": 14120,
        "tasks": {"hershey_kiss": 8800, "jelly_bean": 13200},
        "task_episodes": {"hershey_kiss": 108, "jelly_bean": 163},
        "visitor_regular": [4] * 37,
        "other_regular": [2] * 50 + [1] * 23,
    },
    "C": {
        "days": (date(2024, 11, 9), date(2024, 11, 14)),
        "users": 81,
        "visitors": 27,
        "tutorial_steps": 4164,
        "play_steps": 12996,
        "tasks": {"hi_chew_bin": 5000, "hi_chew_ziploc": 20900},
        "task_episodes": {"hi_chew_bin": 44, "hi_chew_ziploc": 182},
        "visitor_regular": [4] * 27,
        "other_regular": [3] * 10 + [2] * 44,
    },
}

VISITOR_QUALITY_CYCLE = (3, 3, 3, 2, 3)
OTHER_QUALITY_CYCLE = (2, 1, 2, 3, 1)
VISITOR_LIKERT = (4, 5, 4)
OTHER_LIKERT = (3, 4, 3)
LIKERT_JITTER = (0, 1, -1, 0, 1)


def spread(total, n):
    """n nonnegative integers summing exactly to total, near-equal."""
    base, rem = divmod(total, n)
    return [base + 1 if i < rem else base for i in range(n)]


def _weighted_hours(k):
    """k hours drawn proportionally from HOUR_WEIGHTS, ascending."""
    total_w = sum(HOUR_WEIGHTS.values())
    counts = {h: (k * w) // total_w for h, w in HOUR_WEIGHTS.items()}
    rem = k - sum(counts.values())
    by_frac = sorted(
        HOUR_WEIGHTS,
        key=lambda h: ((k * HOUR_WEIGHTS[h]) % total_w, HOUR_WEIGHTS[h]),
        reverse=True,
    )
    for h in by_frac[:rem]:
        counts[h] += 1
    out = []
    for h in sorted(counts):
        out.extend([h] * counts[h])
    return out


def _frames(n):
    return tuple(
        Frame(i, 20 * i, NEUTRAL_JOINTS, NEUTRAL_JOINTS, CollisionFlag.CLEAR) for i in range(n)
    )


class _UserPlan:
    def __init__(self, user_id, scene_id, visitor, idx_in_scene, regular_count):
        self.user_id = user_id
        self.scene_id = scene_id
        self.visitor = visitor
        self.idx = idx_in_scene
        self.regular_count = regular_count
        self.play_in_tutorial = idx_in_scene % 9 == 4
        if self.play_in_tutorial:
            self.tutorial_quality = 1
        elif visitor:
            self.tutorial_quality = 1 if idx_in_scene % 5 == 3 else 2
        else:
            self.tutorial_quality = 2 if idx_in_scene % 2 == 0 else 1

    def task_quality(self, k):
        cycle = VISITOR_QUALITY_CYCLE if self.visitor else OTHER_QUALITY_CYCLE
        return cycle[(self.idx + k) % len(cycle)]

    def likert(self, k):
        base = VISITOR_LIKERT if self.visitor else OTHER_LIKERT
        out = []
        for qi, b in enumerate(base):
            v = b + LIKERT_JITTER[(self.idx + k + qi) % len(LIKERT_JITTER)]
            out.append(min(5, max(1, v)))
        return tuple(out)


def build_reference_dataset() -> DatasetIndex:
    """Assemble the full synthetic dataset in memory."""
    scenes = default_scenes()
    episodes = []
    annotations = {}
    surveys = {}
    users = {}
    visitors = set()

    user_counter = 0
    for scene_id, plan in SCENE_PLAN.items():
        n_users = plan["users"]
        plans = []
        regular_counts = plan["visitor_regular"] + plan["other_regular"]
        assert len(regular_counts) == n_users
        for i in range(n_users):
            user_counter += 1
            uid = f"u-{user_counter:03d}"
            visitor = i < plan["visitors"]
            if visitor:
                visitors.add(uid)
            plans.append(_UserPlan(uid, scene_id, visitor, i, regular_counts[i]))

        tut_lengths = spread(plan["tutorial_steps"], n_users)
        n_regular = sum(regular_counts)
        play_pool = plan["play_steps"] - PLAY_IN_TUTORIAL_LEN * sum(
            1 for p in plans if p.play_in_tutorial
        )
        play_lengths = spread(play_pool, n_regular)

        # task assignment: per-episode labels and exact step budgets
        task_order = []
        task_lengths = []
        for task_id, n_eps in plan["task_episodes"].items():
            task_order.extend([task_id] * n_eps)
            task_lengths.extend(spread(plan["tasks"][task_id], n_eps))
        assert len(task_order) == n_regular

        # scene-local records in user order: tutorial first, then regulars
        records = []
        reg_cursor = 0
        for p, tut_len in zip(plans, tut_lengths):
            records.append(("tutorial", p, tut_len))
            for k in range(p.regular_count):
                records.append(
                    ("regular", p, (task_order[reg_cursor], task_lengths[reg_cursor],
                                    play_lengths[reg_cursor], k))
                )
                reg_cursor += 1

        # timestamps: users spread over the scene's days, hours weighted
        day_lo, day_hi = plan["days"]
        n_days = (day_hi - day_lo).days + 1
        day_of_user = {p.user_id: day_lo + timedelta(days=(p.idx * n_days) // n_users) for p in plans}
        by_day = {}
        for rec in records:
            by_day.setdefault(day_of_user[rec[1].user_id], []).append(rec)
        for day, recs in sorted(by_day.items()):
            hours = _weighted_hours(len(recs))
            minute_counter = {}
            for rec, hour in zip(recs, hours):
                slot = minute_counter.get(hour, 0)
                minute_counter[hour] = slot + 1
                at = datetime(day.year, day.month, day.day, hour, slot % 60, slot // 60)
                episodes.append(_build_episode(scenes, scene_id, rec, at, annotations, surveys))

    episodes.sort(key=lambda pair: pair[0])
    final_episodes = []
    remap = {}
    for n, (at, episode) in enumerate(episodes, start=1):
        eid = f"ep-{n:06d}"
        remap[episode.episode_id] = eid
        final_episodes.append(
            Episode(
                episode_id=eid,
                user_id=episode.user_id,
                scene_id=episode.scene_id,
                task_id=episode.task_id,
                start_wallclock=episode.start_wallclock,
                frames=episode.frames,
                termination=episode.termination,
                self_reported_success=episode.self_reported_success,
            )
        )
        users.setdefault(
            episode.user_id,
            UserProfile(episode.user_id, f"crowd{episode.user_id[2:]}", True, True, episode.start_wallclock),
        )
    annotations = {remap[k]: v for k, v in annotations.items()}
    surveys = {
        remap[k]: SurveyResponse(remap[k], s.success, s.intuitive, s.interesting, s.wanted)
        for k, s in surveys.items()
    }

    return DatasetIndex(
        episodes=tuple(final_episodes),
        annotations=annotations,
        surveys=surveys,
        users=users,
        leaderboard_visits=frozenset(visitors),
        scene_calendar={sid: plan["days"] for sid, plan in SCENE_PLAN.items()},
    )


_temp_ids = iter(range(10**6))


def _build_episode(scenes, scene_id, rec, at, annotations, surveys):
    kind, plan, payload = rec
    temp_id = f"tmp-{next(_temp_ids):06d}"
    if kind == "tutorial":
        tut_len = payload
        segs = [
            AnnotationSegment(
                0, tut_len, Label.tutorial(), plan.tutorial_quality,
                TUTORIAL_EVENTS[plan.tutorial_quality],
            )
        ]
        total = tut_len
        if plan.play_in_tutorial:
            segs.append(
                AnnotationSegment(tut_len, tut_len + PLAY_IN_TUTORIAL_LEN, Label.play(), 0)
            )
            total += PLAY_IN_TUTORIAL_LEN
        episode = Episode(
            episode_id=temp_id,
            user_id=plan.user_id,
            scene_id=scene_id,
            task_id=None,
            start_wallclock=at,
            frames=_frames(total),
            termination=Termination.MECHANICAL_STOP,
            self_reported_success=None,
        )
        annotations[temp_id] = tuple(segs)
        return at, episode

    task_id, task_len, play_len, k = payload
    quality = plan.task_quality(k)
    segs = [
        AnnotationSegment(0, task_len, Label.task(task_id), quality, TASK_EVENTS[quality])
    ]
    total = task_len
    if play_len > 0:
        segs.append(AnnotationSegment(task_len, task_len + play_len, Label.play(), 0))
        total += play_len
    success = (plan.idx + k) % 5 != 1
    episode = Episode(
        episode_id=temp_id,
        user_id=plan.user_id,
        scene_id=scene_id,
        task_id=task_id,
        start_wallclock=at,
        frames=_frames(total),
        termination=Termination.STOP_BUTTON if k % 2 == 0 else Termination.MECHANICAL_STOP,
        self_reported_success=success,
    )
    annotations[temp_id] = tuple(segs)
    likert = plan.likert(k)
    surveys[temp_id] = SurveyResponse(temp_id, success, *likert)
    return at, episode


def write_reference_dataset(data_dir):
    """Persist the synthetic dataset through the episode store."""
    from .store import EpisodeStore

    ds = build_reference_dataset()
    store = EpisodeStore(data_dir)
    for e in ds.episodes:
        store.write_episode(e)
        store.attach_annotation(e.episode_id, list(ds.annotations[e.episode_id]))
        if e.episode_id in ds.surveys:
            store.write_survey(ds.surveys[e.episode_id])
    for u in ds.users.values():
        store.upsert_user(u)
    for uid in sorted(ds.leaderboard_visits):
        store.record_visit(uid)
    store.write_scene_calendar(ds.scene_calendar)
    return ds
