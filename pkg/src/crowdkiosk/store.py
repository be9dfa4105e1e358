"""Durable persistence for episodes, annotations, surveys, ledger and visits.

Layout under one data directory:

    episodes/<episode_id>.jsonl   one header object, then one object per frame
    annotations/<episode_id>.json sidecar: {"episode_id", "segments": [...]}
    surveys/<episode_id>.json
    ledger.jsonl                  one object per point award
    visits.json                   sorted list of leaderboard visitor ids
    users.jsonl                   one object per user profile
    scenes.json                   scene calendar: {scene_id: [start, end]}

Serialization is byte-stable: field order is fixed and floats are written
with 17 significant digits, so identical values always produce identical
bytes (the determinism tests diff whole files).
"""

from __future__ import annotations

import json
import os
from datetime import date, datetime
from pathlib import Path

from .model import (
    AnnotationSegment,
    CollisionFlag,
    DatasetIndex,
    Episode,
    EventTally,
    Frame,
    Label,
    LabelKind,
    PointLedgerEntry,
    SurveyResponse,
    Termination,
    UserProfile,
    validate_annotation,
    validate_episode,
)


class StoreError(Exception):
    def __init__(self, code, message):
        super().__init__(f"{code}: {message}")
        self.code = code


# ---------------------------------------------------------------------------
# canonical JSON

def _fmt(value):
    if isinstance(value, bool) or value is None or isinstance(value, int):
        return json.dumps(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise StoreError("NON_FINITE", "refusing to serialize non-finite float")
        return format(value, ".17g")
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_fmt(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ",".join(f"{json.dumps(k)}:{_fmt(v)}" for k, v in value.items()) + "}"
    raise TypeError(f"cannot canonically serialize {type(value).__name__}")


def canonical_json(obj) -> str:
    """Deterministic single-line JSON with 17-significant-digit floats."""
    return _fmt(obj)


# ---------------------------------------------------------------------------
# record codecs (fixed field order)

def _episode_header(e: Episode) -> dict:
    return {
        "episode_id": e.episode_id,
        "user_id": e.user_id,
        "scene_id": e.scene_id,
        "task_id": e.task_id,
        "start_wallclock": e.start_wallclock.isoformat(),
        "termination": e.termination.value,
        "self_reported_success": e.self_reported_success,
    }


def _frame_record(f: Frame) -> dict:
    return {
        "index": f.index,
        "t": f.t,
        "leader": [float(v) for v in f.leader],
        "follower": [float(v) for v in f.follower],
        "collision_flag": f.collision_flag.value,
    }


def _parse_frame(obj) -> Frame:
    return Frame(
        index=obj["index"],
        t=obj["t"],
        leader=tuple(obj["leader"]),
        follower=tuple(obj["follower"]),
        collision_flag=CollisionFlag(obj["collision_flag"]),
    )


def _segment_record(s: AnnotationSegment) -> dict:
    return {
        "start": s.start,
        "end": s.end,
        "label": s.label.kind.value,
        "task_id": s.label.task_id,
        "quality": s.quality,
        "events": {
            "max_retries_per_subtask": s.events.max_retries_per_subtask,
            "smooth": s.events.smooth,
            "slight_error": s.events.slight_error,
            "scene_change": s.events.scene_change,
            "opposite_arm": s.events.opposite_arm,
            "completed": s.events.completed,
        },
    }


def _parse_segment(obj) -> AnnotationSegment:
    kind = LabelKind(obj["label"])
    label = Label(kind, obj["task_id"]) if kind is LabelKind.TASK else Label(kind)
    return AnnotationSegment(
        start=obj["start"],
        end=obj["end"],
        label=label,
        quality=obj["quality"],
        events=EventTally(**obj["events"]),
    )


class EpisodeStore:
    def __init__(self, data_dir):
        self.root = Path(data_dir)
        (self.root / "episodes").mkdir(parents=True, exist_ok=True)
        (self.root / "annotations").mkdir(exist_ok=True)
        (self.root / "surveys").mkdir(exist_ok=True)

    # -- episodes -----------------------------------------------------------

    def episode_path(self, episode_id) -> Path:
        return self.root / "episodes" / f"{episode_id}.jsonl"

    def write_episode(self, e: Episode) -> str:
        violations = validate_episode(e)
        if violations:
            raise StoreError("INVALID_EPISODE", "; ".join(violations))
        path = self.episode_path(e.episode_id)
        tmp = path.with_suffix(".jsonl.tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(_episode_header(e)) + "\n")
            for f in e.frames:
                fh.write(canonical_json(_frame_record(f)) + "\n")
        os.replace(tmp, path)
        return e.episode_id

    def read_episode(self, episode_id) -> Episode:
        path = self.episode_path(episode_id)
        if not path.exists():
            raise StoreError("MISSING", f"no episode file for {episode_id}")
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if not lines:
            raise StoreError("CORRUPT", f"{path.name} is empty")
        records = []
        for n, line in enumerate(lines):
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError:
                raise StoreError(
                    "CORRUPT", f"{path.name} line {n + 1} is truncated or corrupt"
                ) from None
        head = records[0]
        return Episode(
            episode_id=head["episode_id"],
            user_id=head["user_id"],
            scene_id=head["scene_id"],
            task_id=head["task_id"],
            start_wallclock=datetime.fromisoformat(head["start_wallclock"]),
            frames=tuple(_parse_frame(r) for r in records[1:]),
            termination=Termination(head["termination"]),
            self_reported_success=head["self_reported_success"],
        )

    def episode_ids(self):
        return sorted(p.stem for p in (self.root / "episodes").glob("*.jsonl"))

    # -- sidecars -----------------------------------------------------------

    def attach_annotation(self, episode_id, segments) -> None:
        episode = self.read_episode(episode_id)
        violations = validate_annotation(episode, segments)
        if violations:
            raise StoreError("INVALID_ANNOTATION", "; ".join(violations))
        obj = {
            "episode_id": episode_id,
            "segments": [_segment_record(s) for s in sorted(segments, key=lambda s: s.start)],
        }
        path = self.root / "annotations" / f"{episode_id}.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(canonical_json(obj) + "\n", encoding="utf-8")
        os.replace(tmp, path)

    def read_annotation(self, episode_id):
        path = self.root / "annotations" / f"{episode_id}.json"
        if not path.exists():
            return None
        obj = json.loads(path.read_text(encoding="utf-8"))
        return tuple(_parse_segment(s) for s in obj["segments"])

    def write_survey(self, survey: SurveyResponse) -> None:
        obj = {
            "episode_id": survey.episode_id,
            "success": survey.success,
            "intuitive": survey.intuitive,
            "interesting": survey.interesting,
            "wanted": survey.wanted,
        }
        path = self.root / "surveys" / f"{survey.episode_id}.json"
        path.write_text(canonical_json(obj) + "\n", encoding="utf-8")

    def read_survey(self, episode_id):
        path = self.root / "surveys" / f"{episode_id}.json"
        if not path.exists():
            return None
        obj = json.loads(path.read_text(encoding="utf-8"))
        return SurveyResponse(**obj)

    # -- ledger, visits, users, calendar -------------------------------------

    def append_ledger(self, entry: PointLedgerEntry) -> None:
        obj = {
            "user_id": entry.user_id,
            "episode_id": entry.episode_id,
            "points_awarded": entry.points_awarded,
            "cumulative": entry.cumulative,
            "at": entry.at.isoformat(),
        }
        with open(self.root / "ledger.jsonl", "a", encoding="utf-8") as fh:
            fh.write(canonical_json(obj) + "\n")

    def read_ledger(self):
        path = self.root / "ledger.jsonl"
        if not path.exists():
            return []
        out = []
        for line in path.read_text(encoding="utf-8").splitlines():
            obj = json.loads(line)
            obj["at"] = datetime.fromisoformat(obj["at"])
            out.append(PointLedgerEntry(**obj))
        return out

    def record_visit(self, user_id) -> None:
        visits = set(self.visits())
        visits.add(user_id)
        path = self.root / "visits.json"
        path.write_text(canonical_json(sorted(visits)) + "\n", encoding="utf-8")

    def visits(self):
        path = self.root / "visits.json"
        if not path.exists():
            return frozenset()
        return frozenset(json.loads(path.read_text(encoding="utf-8")))

    def upsert_user(self, profile: UserProfile) -> None:
        users = {u.user_id: u for u in self.read_users()}
        users[profile.user_id] = profile
        path = self.root / "users.jsonl"
        tmp = path.with_suffix(".jsonl.tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            for uid in sorted(users):
                u = users[uid]
                fh.write(
                    canonical_json(
                        {
                            "user_id": u.user_id,
                            "nickname": u.nickname,
                            "consented": u.consented,
                            "tutorial_completed": u.tutorial_completed,
                            "created_at": u.created_at.isoformat() if u.created_at else None,
                        }
                    )
                    + "\n"
                )
        os.replace(tmp, path)

    def read_users(self):
        path = self.root / "users.jsonl"
        if not path.exists():
            return []
        out = []
        for line in path.read_text(encoding="utf-8").splitlines():
            obj = json.loads(line)
            if obj["created_at"] is not None:
                obj["created_at"] = datetime.fromisoformat(obj["created_at"])
            out.append(UserProfile(**obj))
        return out

    def write_scene_calendar(self, calendar) -> None:
        obj = {sid: [d[0].isoformat(), d[1].isoformat()] for sid, d in sorted(calendar.items())}
        (self.root / "scenes.json").write_text(canonical_json(obj) + "\n", encoding="utf-8")

    def read_scene_calendar(self):
        path = self.root / "scenes.json"
        if not path.exists():
            return {}
        obj = json.loads(path.read_text(encoding="utf-8"))
        return {
            sid: (date.fromisoformat(lo), date.fromisoformat(hi)) for sid, (lo, hi) in obj.items()
        }

    def append_help_request(self, user_id, at: datetime) -> None:
        # operator notification: append-only log the study team watches
        with open(self.root / "help_requests.jsonl", "a", encoding="utf-8") as fh:
            fh.write(canonical_json({"user_id": user_id, "at": at.isoformat()}) + "\n")

    def append_feedback(self, user_id, text, at: datetime) -> None:
        with open(self.root / "feedback.jsonl", "a", encoding="utf-8") as fh:
            fh.write(canonical_json({"user_id": user_id, "text": text, "at": at.isoformat()}) + "\n")

    # -- scan and integrity ---------------------------------------------------

    def scan(self, scene=None, task=None, user=None, date_range=None, skip_corrupt=False) -> DatasetIndex:
        """Load everything matching the filter; episode order is lexicographic."""
        episodes = []
        for eid in self.episode_ids():
            try:
                e = self.read_episode(eid)
            except StoreError:
                if skip_corrupt:
                    continue
                raise
            if scene is not None and e.scene_id != scene:
                continue
            if task is not None and e.task_id != task:
                continue
            if user is not None and e.user_id != user:
                continue
            if date_range is not None:
                lo, hi = date_range
                if not lo <= e.start_wallclock.date() <= hi:
                    continue
            episodes.append(e)
        selected = {e.episode_id for e in episodes}
        annotations = {}
        surveys = {}
        for eid in selected:
            segs = self.read_annotation(eid)
            if segs is not None:
                annotations[eid] = segs
            survey = self.read_survey(eid)
            if survey is not None:
                surveys[eid] = survey
        return DatasetIndex(
            episodes=tuple(episodes),
            annotations=annotations,
            surveys=surveys,
            users={u.user_id: u for u in self.read_users()},
            leaderboard_visits=self.visits(),
            scene_calendar=self.read_scene_calendar(),
        )

    def integrity_check(self, quarantine=False) -> dict:
        """Report truncated files, frame violations, and orphan sidecars."""
        report = {"corrupt_episodes": [], "episode_violations": {}, "orphan_annotations": [],
                  "orphan_surveys": [], "quarantined": []}
        ids = set()
        for eid in self.episode_ids():
            try:
                e = self.read_episode(eid)
            except StoreError as exc:
                report["corrupt_episodes"].append({"episode_id": eid, "error": str(exc)})
                if quarantine:
                    qdir = self.root / "quarantine"
                    qdir.mkdir(exist_ok=True)
                    os.replace(self.episode_path(eid), qdir / f"{eid}.jsonl")
                    report["quarantined"].append(eid)
                continue
            ids.add(eid)
            violations = validate_episode(e)
            if violations:
                report["episode_violations"][eid] = violations
        for path in sorted((self.root / "annotations").glob("*.json")):
            if path.stem not in ids:
                report["orphan_annotations"].append(path.stem)
        for path in sorted((self.root / "surveys").glob("*.json")):
            if path.stem not in ids:
                report["orphan_surveys"].append(path.stem)
        report["clean"] = not (
            report["corrupt_episodes"]
            or report["episode_violations"]
            or report["orphan_annotations"]
            or report["orphan_surveys"]
        )
        return report

    # -- learning export ------------------------------------------------------

    def export_learning_bundle(self, out_dir, scene=None, task=None, user=None) -> list[str]:
        """One JSONL file per annotated episode with frame-aligned
        (state, action, task_label, quality) rows; the action is the leader
        pose at the next frame, repeated at the final frame."""
        ds = self.scan(scene=scene, task=task, user=user)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for e in ds.episodes:
            segs = ds.annotations.get(e.episode_id)
            if segs is None:
                raise StoreError("UNANNOTATED", f"episode {e.episode_id} has no annotation")
            labels = _per_frame_labels(e, segs)
            path = out / f"{e.episode_id}.jsonl"
            with open(path, "w", encoding="utf-8") as fh:
                n = len(e.frames)
                for i, f in enumerate(e.frames):
                    action_frame = e.frames[min(i + 1, n - 1)]
                    label, quality = labels[i]
                    fh.write(
                        canonical_json(
                            {
                                "state": [float(v) for v in f.follower],
                                "action": [float(v) for v in action_frame.leader],
                                "task_label": label,
                                "quality": quality,
                            }
                        )
                        + "\n"
                    )
            written.append(str(path))
        return written


def _per_frame_labels(episode, segments):
    labels = [None] * len(episode.frames)
    for s in segments:
        name = s.label.task_id if s.label.kind is LabelKind.TASK else s.label.kind.value
        for i in range(s.start, min(s.end, len(labels))):
            labels[i] = (name, s.quality)
    return labels
